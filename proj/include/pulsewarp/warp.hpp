#pragma once

#include <cstdint>
#include <span>

#include "pulsewarp/audio_io.hpp"
#include "pulsewarp/result.hpp"

namespace pulsewarp {

struct WarpState {
    std::uint64_t src_pos = 0;  // next source frame; monotone non-decreasing
    int chunk_frames = 1024;
    bool finished = false;
};

enum class WarpError { AlreadyFinished };

// Source frames consumed per output chunk: round(N * tempo), half-up. Fixed
// here so the duration laws are exactly testable.
std::int64_t frames_consumed(int chunk_frames, double tempo);

// One output chunk at the given tempo. tempo >= 1 decimates: out[i] =
// src[pos + floor(i*M/N)]. tempo < 1 spreads the M consumed frames over the
// chunk at out[floor(j*N/M)] with exact zeros interspersed everywhere else.
// The source tail is zero-padded and flips `finished`. Channels are warped
// identically and never mix.
Result<AudioChunk, WarpError> warp_chunk(const AudioClip& source, WarpState& state,
                                         double tempo);

// Deterministic offline render: concatenates warp_chunk output until the
// source is exhausted. tempo_per_chunk[i] drives chunk i; the last entry is
// held when the render outlives the trace (empty trace plays at 1.0).
AudioClip render_offline(const AudioClip& source, std::span<const double> tempo_per_chunk,
                         int chunk_frames = 1024);

}  // namespace pulsewarp
