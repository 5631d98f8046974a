#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pulsewarp/errors.hpp"

namespace pulsewarp {

// Decoded PCM material, planar (one vector per channel), amplitudes in [-1, 1].
struct AudioClip {
    int sample_rate_hz = 44100;
    int channels = 1;
    std::vector<std::vector<float>> samples;

    std::size_t length_frames() const { return samples.empty() ? 0 : samples[0].size(); }
    double duration_s() const {
        return static_cast<double>(length_frames()) / sample_rate_hz;
    }
};

// Fixed-size output block, planar: data[ch * frames + i].
struct AudioChunk {
    int channels = 1;
    int frames = 0;
    std::vector<float> data;

    AudioChunk() = default;
    AudioChunk(int ch, int n)
        : channels(ch), frames(n), data(static_cast<std::size_t>(ch) * n, 0.0f) {}

    float& at(int ch, int i) { return data[static_cast<std::size_t>(ch) * frames + i]; }
    float at(int ch, int i) const { return data[static_cast<std::size_t>(ch) * frames + i]; }
};

enum class WavFormat { Pcm16, Float32 };

// RIFF/WAVE reader: PCM 16-bit or IEEE float 32-bit, 1-2 channels. 16-bit
// samples are scaled by 1/32768 so -32768 maps to exactly -1.0. Throws
// UnsupportedFormat / CorruptFile / IoFailure.
AudioClip decode_wav(const std::string& path);

// Writer for the same two formats. Float output round-trips exactly; 16-bit
// round-trips within one quantization step (1/32768).
void encode_wav(const AudioClip& clip, const std::string& path,
                WavFormat format = WavFormat::Pcm16);

class AudioSink {
  public:
    virtual ~AudioSink() = default;

    // Chunks are consumed in order. Throws SinkClosed after close().
    virtual void write(const AudioChunk& chunk) = 0;
    virtual void close() = 0;  // idempotent
    virtual std::uint64_t frames_written() const = 0;
};

enum class SinkKind { Device, File };

// Device sinks keep at most this many chunks in flight so a tempo change is
// audible within ~100 ms at default chunk size.
inline constexpr int kDeviceQueueChunks = 4;

// File sinks accumulate chunks and encode on close. Device sinks need a
// platform audio backend; without one construction throws DeviceUnavailable
// and everything else keeps working headless.
std::unique_ptr<AudioSink> open_sink(SinkKind kind, int sample_rate_hz, int channels,
                                     const std::string& path = {},
                                     WavFormat format = WavFormat::Pcm16);

}  // namespace pulsewarp
