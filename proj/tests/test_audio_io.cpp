#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

#include "pulsewarp/audio_io.hpp"
#include "test_util.hpp"

using namespace pulsewarp;

namespace {

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void push_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(x & 0xFF);
    v.push_back((x >> 8) & 0xFF);
}

void push_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(x & 0xFF);
    v.push_back((x >> 8) & 0xFF);
    v.push_back((x >> 16) & 0xFF);
    v.push_back((x >> 24) & 0xFF);
}

// Hand-built 16-bit PCM file, independent of encode_wav.
std::vector<std::uint8_t> raw_pcm16_wav(const std::vector<std::int16_t>& frames, int rate,
                                        int channels) {
    std::vector<std::uint8_t> v;
    const auto data_size = static_cast<std::uint32_t>(frames.size() * 2);
    v.insert(v.end(), {'R', 'I', 'F', 'F'});
    push_u32(v, 36 + data_size);
    v.insert(v.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    push_u32(v, 16);
    push_u16(v, 1);  // PCM
    push_u16(v, static_cast<std::uint16_t>(channels));
    push_u32(v, static_cast<std::uint32_t>(rate));
    push_u32(v, static_cast<std::uint32_t>(rate * channels * 2));
    push_u16(v, static_cast<std::uint16_t>(channels * 2));
    push_u16(v, 16);
    v.insert(v.end(), {'d', 'a', 't', 'a'});
    push_u32(v, data_size);
    for (const auto s : frames) push_u16(v, static_cast<std::uint16_t>(s));
    return v;
}

}  // namespace

TEST_CASE("decode: one second of 16-bit silence") {
    const auto path = testutil::temp_path("silence.wav");
    write_bytes(path, raw_pcm16_wav(std::vector<std::int16_t>(44100, 0), 44100, 1));
    const auto clip = decode_wav(path);
    CHECK(clip.sample_rate_hz == 44100);
    CHECK(clip.channels == 1);
    REQUIRE(clip.length_frames() == 44100);
    for (const float v : clip.samples[0]) CHECK(v == 0.0f);
}

TEST_CASE("decode: full-scale square wave scaling") {
    std::vector<std::int16_t> frames;
    for (int i = 0; i < 100; ++i) frames.push_back(i % 2 ? 32767 : -32768);
    const auto path = testutil::temp_path("square.wav");
    write_bytes(path, raw_pcm16_wav(frames, 44100, 1));
    const auto clip = decode_wav(path);
    REQUIRE(clip.length_frames() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
        if (i % 2) {
            CHECK(clip.samples[0][i] == 32767.0f / 32768.0f);
        } else {
            CHECK(clip.samples[0][i] == -1.0f);
        }
    }
}

TEST_CASE("decode: stereo interleave splits into planar channels") {
    std::vector<std::int16_t> frames;
    for (int i = 0; i < 10; ++i) {
        frames.push_back(static_cast<std::int16_t>(100 + i));  // left
        frames.push_back(static_cast<std::int16_t>(-200 - i)); // right
    }
    const auto path = testutil::temp_path("stereo.wav");
    write_bytes(path, raw_pcm16_wav(frames, 48000, 2));
    const auto clip = decode_wav(path);
    CHECK(clip.channels == 2);
    CHECK(clip.sample_rate_hz == 48000);
    REQUIRE(clip.length_frames() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(clip.samples[0][i] == static_cast<float>(100 + i) / 32768.0f);
        CHECK(clip.samples[1][i] == static_cast<float>(-200 - i) / 32768.0f);
    }
}

TEST_CASE("decode: a 5:38 clip at 44.1 kHz has 14905800 frames") {
    AudioClip clip;
    clip.sample_rate_hz = 44100;
    clip.channels = 1;
    clip.samples = {std::vector<float>(static_cast<std::size_t>(338) * 44100, 0.0f)};
    const auto path = testutil::temp_path("full_song.wav");
    encode_wav(clip, path, WavFormat::Pcm16);
    const auto back = decode_wav(path);
    CHECK(back.length_frames() == 14905800u);
    CHECK(back.duration_s() == Catch::Approx(338.0));
}

TEST_CASE("round-trip: float is lossless") {
    auto clip = testutil::make_noise_clip(5000, 2, 1);
    // include negative values
    for (auto& v : clip.samples[1]) v = -v;
    const auto path = testutil::temp_path("float.wav");
    encode_wav(clip, path, WavFormat::Float32);
    const auto back = decode_wav(path);
    REQUIRE(back.length_frames() == clip.length_frames());
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < clip.length_frames(); ++i) {
            CHECK(back.samples[c][i] == clip.samples[c][i]);
        }
    }
}

TEST_CASE("round-trip: 16-bit stays within one quantization step") {
    std::mt19937 gen(77);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    AudioClip clip;
    clip.samples = {std::vector<float>(5000)};
    for (auto& v : clip.samples[0]) v = dist(gen);
    const auto path = testutil::temp_path("pcm16.wav");
    encode_wav(clip, path, WavFormat::Pcm16);
    const auto back = decode_wav(path);
    REQUIRE(back.length_frames() == clip.length_frames());
    for (std::size_t i = 0; i < clip.length_frames(); ++i) {
        CHECK(std::abs(back.samples[0][i] - clip.samples[0][i]) <= 1.0f / 32768.0f);
    }
}

TEST_CASE("round-trip: silence is exact in both formats") {
    AudioClip clip;
    clip.samples = {std::vector<float>(1000, 0.0f)};
    for (const auto format : {WavFormat::Pcm16, WavFormat::Float32}) {
        const auto path = testutil::temp_path("silence_rt.wav");
        encode_wav(clip, path, format);
        const auto back = decode_wav(path);
        for (const float v : back.samples[0]) CHECK(v == 0.0f);
    }
}

TEST_CASE("decode: corrupt and unsupported files are typed errors") {
    const auto path = testutil::temp_path("bad.wav");

    write_bytes(path, {'R', 'I', 'F', 'F'});
    CHECK_THROWS_AS(decode_wav(path), CorruptFile);

    write_bytes(path, {'N', 'O', 'P', 'E', 0, 0, 0, 0, 'W', 'A', 'V', 'E'});
    CHECK_THROWS_AS(decode_wav(path), CorruptFile);

    // header claims a bigger data chunk than the file holds
    auto truncated = raw_pcm16_wav(std::vector<std::int16_t>(100, 42), 44100, 1);
    truncated.resize(truncated.size() - 50);
    write_bytes(path, truncated);
    CHECK_THROWS_AS(decode_wav(path), CorruptFile);

    // 3 channels
    auto multi = raw_pcm16_wav(std::vector<std::int16_t>(99, 7), 44100, 3);
    write_bytes(path, multi);
    CHECK_THROWS_AS(decode_wav(path), UnsupportedFormat);

    // 8-bit PCM
    auto eight = raw_pcm16_wav(std::vector<std::int16_t>(10, 7), 44100, 1);
    eight[34] = 8;  // bits-per-sample field
    eight[32] = 1;  // block align
    write_bytes(path, eight);
    CHECK_THROWS_AS(decode_wav(path), UnsupportedFormat);

    CHECK_THROWS_AS(decode_wav(testutil::temp_path("does_not_exist.wav")), IoFailure);
}

TEST_CASE("file sink: frame accounting and close semantics") {
    const auto path = testutil::temp_path("sink.wav");
    auto sink = open_sink(SinkKind::File, 44100, 1, path);

    AudioChunk chunk(1, 256);
    for (int i = 0; i < 256; ++i) chunk.at(0, i) = 0.25f;
    for (int i = 0; i < 10; ++i) sink->write(chunk);
    CHECK(sink->frames_written() == 2560);
    sink->close();

    const auto clip = decode_wav(path);
    CHECK(clip.length_frames() == 2560);

    CHECK_THROWS_AS(sink->write(chunk), SinkClosed);
    REQUIRE_NOTHROW(sink->close());  // idempotent
}

TEST_CASE("file sink: needs a path; chunk shape must match") {
    CHECK_THROWS_AS(open_sink(SinkKind::File, 44100, 1, ""), IoFailure);
    const auto path = testutil::temp_path("shape.wav");
    auto sink = open_sink(SinkKind::File, 44100, 2, path);
    AudioChunk mono(1, 64);
    CHECK_THROWS_AS(sink->write(mono), UnsupportedFormat);
}

TEST_CASE("device sink: unavailable without an audio backend") {
    CHECK_THROWS_AS(open_sink(SinkKind::Device, 44100, 2), DeviceUnavailable);
}

TEST_CASE("encode: ragged channels are rejected") {
    AudioClip clip;
    clip.channels = 2;
    clip.samples = {std::vector<float>(10, 0.0f), std::vector<float>(9, 0.0f)};
    CHECK_THROWS_AS(encode_wav(clip, testutil::temp_path("ragged.wav")), UnsupportedFormat);
}
