#include "pulsewarp/warp.hpp"

#include <algorithm>
#include <cmath>

namespace pulsewarp {

std::int64_t frames_consumed(int chunk_frames, double tempo) {
    const auto m = static_cast<std::int64_t>(std::floor(chunk_frames * tempo + 0.5));
    return std::max<std::int64_t>(m, 1);
}

Result<AudioChunk, WarpError> warp_chunk(const AudioClip& source, WarpState& state,
                                         double tempo) {
    if (state.finished) return WarpError::AlreadyFinished;

    const int n = state.chunk_frames;
    const std::int64_t m = frames_consumed(n, tempo);
    const auto len = static_cast<std::int64_t>(source.length_frames());
    const auto pos = static_cast<std::int64_t>(state.src_pos);
    const std::int64_t avail = len - pos;

    AudioChunk out(source.channels, n);  // zero-initialized
    if (m >= n) {
        // Speedup: nearest-neighbor decimation of the m consumed frames.
        for (int i = 0; i < n; ++i) {
            const std::int64_t j = pos + (static_cast<std::int64_t>(i) * m) / n;
            if (j >= len) break;  // tail stays zero-padded
            for (int c = 0; c < source.channels; ++c) {
                out.at(c, i) = source.samples[c][static_cast<std::size_t>(j)];
            }
        }
    } else {
        // Slowdown: spread the consumed frames uniformly, exact zeros between.
        const std::int64_t consume = std::min(m, std::max<std::int64_t>(avail, 0));
        for (std::int64_t j = 0; j < consume; ++j) {
            const auto i = static_cast<int>((j * n) / m);
            for (int c = 0; c < source.channels; ++c) {
                out.at(c, i) = source.samples[c][static_cast<std::size_t>(pos + j)];
            }
        }
    }

    if (avail <= m) {
        state.src_pos = static_cast<std::uint64_t>(len);
        state.finished = true;
    } else {
        state.src_pos += static_cast<std::uint64_t>(m);
    }
    return out;
}

AudioClip render_offline(const AudioClip& source, std::span<const double> tempo_per_chunk,
                         int chunk_frames) {
    AudioClip out;
    out.sample_rate_hz = source.sample_rate_hz;
    out.channels = source.channels;
    out.samples.assign(static_cast<std::size_t>(source.channels), {});

    WarpState state;
    state.chunk_frames = chunk_frames;
    for (std::size_t chunk = 0; !state.finished; ++chunk) {
        const double tempo = tempo_per_chunk.empty()
                                 ? 1.0
                                 : tempo_per_chunk[std::min(chunk, tempo_per_chunk.size() - 1)];
        auto result = warp_chunk(source, state, tempo);
        const AudioChunk& c = result.value();
        for (int ch = 0; ch < out.channels; ++ch) {
            out.samples[static_cast<std::size_t>(ch)].insert(
                out.samples[static_cast<std::size_t>(ch)].end(),
                c.data.begin() + static_cast<std::ptrdiff_t>(ch) * c.frames,
                c.data.begin() + static_cast<std::ptrdiff_t>(ch + 1) * c.frames);
        }
    }
    return out;
}

}  // namespace pulsewarp
