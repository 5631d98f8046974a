#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <vector>

#include "pulsewarp/ble.hpp"
#include "pulsewarp/hr_source.hpp"

using namespace pulsewarp;

namespace {

// Scripted fake: a fixed advertisement set and a canned notification sequence.
class MockAdapter final : public ble::Adapter {
  public:
    std::vector<ble::DeviceInfo> devices;
    std::vector<std::vector<std::uint8_t>> notifications;
    std::optional<StreamError> terminal = StreamError::ConnectionLost;
    std::string last_subscribed;

    std::vector<ble::DeviceInfo> scan(std::chrono::milliseconds) override { return devices; }

    std::optional<StreamError> subscribe(
        const std::string& address,
        const std::function<bool(std::span<const std::uint8_t>)>& on_payload) override {
        last_subscribed = address;
        for (const auto& n : notifications) {
            if (!on_payload(n)) return std::nullopt;
        }
        return terminal;
    }
};

}  // namespace

TEST_CASE("mock scan surfaces advertised heart-rate devices") {
    auto adapter = std::make_shared<MockAdapter>();
    adapter->devices = {{"Polar Verity Sense", "A0:B1:C2:D3:E4:F5"}};
    const auto found = adapter->scan(std::chrono::milliseconds(10));
    REQUIRE(found.size() == 1);
    CHECK(found[0].name == "Polar Verity Sense");
    CHECK(found[0].address == "A0:B1:C2:D3:E4:F5");
}

TEST_CASE("adapter stream: parses notifications, drops rejects, keeps order") {
    auto adapter = std::make_shared<MockAdapter>();
    adapter->notifications = {
        {0x00, 0x48},              // 72
        {0x01, 0x48, 0x01},        // 328: rejected, stream continues
        {0x10, 0x4B, 0x00, 0x04},  // 75 with one RR interval
        {0x00},                    // truncated: rejected
        {0x00, 0x50},              // 80
    };

    auto stream = ble::open_adapter_stream(adapter, "AA:BB");
    std::vector<HeartRateSample> got;
    while (true) {
        auto s = stream.wait_next(std::chrono::milliseconds(200));
        if (s) {
            got.push_back(*s);
        } else if (stream.done()) {
            break;
        }
    }

    CHECK(adapter->last_subscribed == "AA:BB");
    REQUIRE(got.size() == 3);
    CHECK(got[0].bpm == 72.0);
    CHECK(got[1].bpm == 75.0);
    REQUIRE(got[1].rr_intervals.size() == 1);
    CHECK(got[1].rr_intervals[0] == 1.0);
    CHECK(got[2].bpm == 80.0);
    // Receipt timestamps are strictly monotone.
    CHECK(got[0].t < got[1].t);
    CHECK(got[1].t < got[2].t);
    // The adapter ended the subscription; the marker is readable.
    CHECK(stream.error() == StreamError::ConnectionLost);
}

TEST_CASE("adapter stream: device-not-found surfaces as the stream marker") {
    auto adapter = std::make_shared<MockAdapter>();
    adapter->terminal = StreamError::DeviceNotFound;
    auto stream = ble::open_adapter_stream(adapter, "not-there");
    while (!stream.done()) {
        stream.wait_next(std::chrono::milliseconds(50));
    }
    CHECK(stream.error() == StreamError::DeviceNotFound);
}

TEST_CASE("open_stream: BLE without a system adapter ends with AdapterUnavailable") {
    SensorConfig config;
    config.kind = SourceKind::Ble;
    config.address_or_path = "AA:BB:CC:DD:EE:FF";
    auto stream = open_stream(config);
    while (!stream.done()) {
        stream.wait_next(std::chrono::milliseconds(50));
    }
    CHECK(stream.error() == StreamError::AdapterUnavailable);
    CHECK_FALSE(stream.poll().has_value());
}

TEST_CASE("no system BLE backend is compiled into this build") {
    CHECK(ble::make_system_adapter() == nullptr);
    CHECK(ble::make_system_adapter("hci0") == nullptr);
}
