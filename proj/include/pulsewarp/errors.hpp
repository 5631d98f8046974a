#pragma once

#include <stdexcept>

namespace pulsewarp {

// Typed exceptions for file, device, and configuration failures. Hot paths
// (payload parsing, per-chunk calls) use enum-based results instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure : Error {
    using Error::Error;
};
struct MalformedReplayRow : Error {
    using Error::Error;
};
struct UnsupportedFormat : Error {
    using Error::Error;
};
struct CorruptFile : Error {
    using Error::Error;
};
struct DeviceUnavailable : Error {
    using Error::Error;
};
struct SinkClosed : Error {
    using Error::Error;
};
struct AdapterUnavailable : Error {
    using Error::Error;
};
struct SampleRateMismatch : Error {
    using Error::Error;
};

}  // namespace pulsewarp
