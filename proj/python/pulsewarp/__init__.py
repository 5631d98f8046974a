"""Heart-rate driven audio tempo warping."""

from pulsewarp._core import (
    AudioClip,
    HeartModelParams,
    TempoParams,
    UniformHrSeries,
    WindowStats,
    __version__,
    compute_rms,
    decode_wav,
    encode_wav,
    interpolate,
    map_tempo,
    normalize,
    parse_hr_measurement,
    render_offline,
    simulate_loop,
    step_heart,
    window_stats,
    write_trace_figure,
)

__all__ = [
    "AudioClip",
    "HeartModelParams",
    "TempoParams",
    "UniformHrSeries",
    "WindowStats",
    "__version__",
    "compute_rms",
    "decode_wav",
    "encode_wav",
    "interpolate",
    "map_tempo",
    "normalize",
    "parse_hr_measurement",
    "render_offline",
    "simulate_loop",
    "step_heart",
    "window_stats",
    "write_trace_figure",
]
