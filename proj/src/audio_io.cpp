#include "pulsewarp/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace pulsewarp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

float sanitize_sample(float v) {
    if (!std::isfinite(v)) return 0.0f;
    return std::clamp(v, -1.0f, 1.0f);
}

}  // namespace

AudioClip decode_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open WAV file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
    const std::size_t size = bytes.size();

    if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
        throw CorruptFile("not a RIFF/WAVE file: " + path);
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t off = 12;
    while (off + 8 <= size) {
        const char* id = bytes.data() + off;
        const std::uint32_t chunk_size = read_u32(p + off + 4);
        off += 8;
        if (chunk_size > size - off) throw CorruptFile("chunk overruns file: " + path);
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw CorruptFile("fmt chunk too small: " + path);
            format = read_u16(p + off);
            channels = read_u16(p + off + 2);
            sample_rate = read_u32(p + off + 4);
            block_align = read_u16(p + off + 12);
            bits = read_u16(p + off + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = p + off;
            data_size = chunk_size;
        }
        off += chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) throw CorruptFile("missing fmt or data chunk: " + path);
    if (format != kFormatPcm && format != kFormatIeeeFloat) {
        throw UnsupportedFormat("only PCM and IEEE-float WAV supported");
    }
    if (channels < 1 || channels > 2) throw UnsupportedFormat("only 1-2 channels supported");
    if (format == kFormatPcm && bits != 16) throw UnsupportedFormat("PCM must be 16-bit");
    if (format == kFormatIeeeFloat && bits != 32) throw UnsupportedFormat("float must be 32-bit");
    if (sample_rate == 0) throw CorruptFile("zero sample rate: " + path);

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_size = bytes_per_sample * channels;
    if (block_align != 0 && block_align != frame_size) {
        throw CorruptFile("block alignment inconsistent with format: " + path);
    }
    if (data_size % frame_size != 0) throw CorruptFile("data size not a whole frame count");
    const std::size_t frames = data_size / frame_size;

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(sample_rate);
    clip.channels = channels;
    clip.samples.assign(channels, std::vector<float>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        for (int c = 0; c < channels; ++c) {
            const std::uint8_t* s = data + f * frame_size + c * bytes_per_sample;
            if (format == kFormatPcm) {
                const auto raw = static_cast<std::int16_t>(read_u16(s));
                clip.samples[c][f] = static_cast<float>(raw) / 32768.0f;
            } else {
                float v;
                std::uint32_t bits32 = read_u32(s);
                std::memcpy(&v, &bits32, 4);
                clip.samples[c][f] = sanitize_sample(v);
            }
        }
    }
    return clip;
}

void encode_wav(const AudioClip& clip, const std::string& path, WavFormat format) {
    for (const auto& ch : clip.samples) {
        if (ch.size() != clip.length_frames()) {
            throw UnsupportedFormat("all channels must have equal length");
        }
    }
    if (clip.channels < 1 || clip.channels > 2 ||
        static_cast<int>(clip.samples.size()) != clip.channels) {
        throw UnsupportedFormat("clip must carry 1-2 equally sized channels");
    }

    const std::size_t frames = clip.length_frames();
    const std::uint16_t bits = format == WavFormat::Pcm16 ? 16 : 32;
    const std::uint16_t fmt_code = format == WavFormat::Pcm16 ? kFormatPcm : kFormatIeeeFloat;
    const std::uint32_t frame_size = clip.channels * bits / 8;
    const std::uint32_t data_size = static_cast<std::uint32_t>(frames * frame_size);

    std::string out;
    out.reserve(44 + data_size);
    out.append("RIFF");
    put_u32(out, 36 + data_size);
    out.append("WAVE");
    out.append("fmt ");
    put_u32(out, 16);
    put_u16(out, fmt_code);
    put_u16(out, static_cast<std::uint16_t>(clip.channels));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * frame_size);
    put_u16(out, static_cast<std::uint16_t>(frame_size));
    put_u16(out, bits);
    out.append("data");
    put_u32(out, data_size);

    for (std::size_t f = 0; f < frames; ++f) {
        for (int c = 0; c < clip.channels; ++c) {
            const float v = sanitize_sample(clip.samples[c][f]);
            if (format == WavFormat::Pcm16) {
                const long q = std::lround(static_cast<double>(v) * 32768.0);
                const auto s = static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L));
                put_u16(out, static_cast<std::uint16_t>(s));
            } else {
                std::uint32_t bits32;
                std::memcpy(&bits32, &v, 4);
                put_u32(out, bits32);
            }
        }
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot write WAV file: " + path);
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os) throw IoFailure("write failed: " + path);
}

namespace {

class FileSink final : public AudioSink {
  public:
    FileSink(std::string path, int sample_rate_hz, int channels, WavFormat format)
        : path_(std::move(path)), format_(format) {
        clip_.sample_rate_hz = sample_rate_hz;
        clip_.channels = channels;
        clip_.samples.assign(channels, {});
    }

    void write(const AudioChunk& chunk) override {
        if (closed_) throw SinkClosed("file sink already closed");
        if (chunk.channels != clip_.channels) {
            throw UnsupportedFormat("chunk channel count differs from sink");
        }
        for (int c = 0; c < chunk.channels; ++c) {
            auto& ch = clip_.samples[c];
            ch.insert(ch.end(), chunk.data.begin() + static_cast<std::ptrdiff_t>(c) * chunk.frames,
                      chunk.data.begin() + static_cast<std::ptrdiff_t>(c + 1) * chunk.frames);
        }
        frames_ += chunk.frames;
    }

    void close() override {
        if (closed_) return;
        closed_ = true;
        encode_wav(clip_, path_, format_);
    }

    std::uint64_t frames_written() const override { return frames_; }

    ~FileSink() override {
        try {
            close();
        } catch (...) {
            // destructor must not throw; an explicit close() reports failures
        }
    }

  private:
    std::string path_;
    WavFormat format_;
    AudioClip clip_;
    std::uint64_t frames_ = 0;
    bool closed_ = false;
};

}  // namespace

std::unique_ptr<AudioSink> open_sink(SinkKind kind, int sample_rate_hz, int channels,
                                     const std::string& path, WavFormat format) {
    if (channels < 1 || channels > 2) throw UnsupportedFormat("sinks take 1-2 channels");
    switch (kind) {
        case SinkKind::File:
            if (path.empty()) throw IoFailure("file sink needs an output path");
            return std::make_unique<FileSink>(path, sample_rate_hz, channels, format);
        case SinkKind::Device:
            // No audio output backend in this build: everything stays usable
            // headless, the caller picks a file sink instead.
            throw DeviceUnavailable("no audio output backend on this platform");
    }
    throw UnsupportedFormat("unknown sink kind");
}

}  // namespace pulsewarp
