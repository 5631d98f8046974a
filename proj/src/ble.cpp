#include "pulsewarp/ble.hpp"

namespace pulsewarp::ble {

// No BLE backend is compiled into this build; hosts with BlueZ or similar can
// slot a backend in behind Adapter. Callers treat nullptr as AdapterUnavailable.
std::unique_ptr<Adapter> make_system_adapter(const std::string&) { return nullptr; }

}  // namespace pulsewarp::ble
