#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pulsewarp/hr_source.hpp"

namespace pulsewarp::ble {

// Heart Rate Service / Heart Rate Measurement characteristic, Bluetooth SIG
// assigned numbers.
inline constexpr std::uint16_t kHeartRateServiceUuid = 0x180D;
inline constexpr std::uint16_t kHeartRateMeasurementUuid = 0x2A37;

struct DeviceInfo {
    std::string name;
    std::string address;
};

// Thin platform boundary. The data plane (payload parsing, stream semantics)
// is platform-independent; only discovery and notification transport live
// behind this interface.
class Adapter {
  public:
    virtual ~Adapter() = default;

    // Devices advertising the Heart Rate Service seen within the timeout.
    virtual std::vector<DeviceInfo> scan(std::chrono::milliseconds timeout) = 0;

    // Subscribes to Heart Rate Measurement notifications on `address` and
    // feeds each raw payload to on_payload until it returns false. Returns
    // nullopt on a consumer-requested stop, otherwise the failure.
    virtual std::optional<StreamError> subscribe(
        const std::string& address,
        const std::function<bool(std::span<const std::uint8_t>)>& on_payload) = 0;
};

// Adapter for the current platform, or nullptr when this build carries no BLE
// backend (headless/CI hosts).
std::unique_ptr<Adapter> make_system_adapter(const std::string& adapter_hint = {});

// Stream of validated samples from an adapter; timestamps are assigned at
// receipt. Parse-rejected notifications are dropped, the stream continues.
HrStream open_adapter_stream(std::shared_ptr<Adapter> adapter, const std::string& address);

}  // namespace pulsewarp::ble
