#pragma once

#include <cstdint>

#include "sicsim/signal.hpp"

namespace sicsim {

enum class WaveformKind { bandlimited_noise, two_tone, soi };

struct WaveformSpec {
    WaveformKind kind = WaveformKind::bandlimited_noise;
    double bandwidth_hz = 20e6;     // bandlimited_noise / soi
    double tone_spacing_hz = 10e6;  // two_tone
    double power_dbm = 0.0;
    double duration_s = 1e-3;
    std::uint64_t seed = 0;
};

// Deterministic test waveforms: band-limited Gaussian noise (sharp low-pass
// with a raised-cosine transition of 2% of the bandwidth), an equal-amplitude
// complex two-tone at +-spacing/2, or a narrowband signal of interest (same
// construction as bandlimited_noise). Output power is normalized exactly to
// power_dbm.
ComplexSignal generate(const WaveformSpec& spec, double sample_rate_hz);

}  // namespace sicsim
