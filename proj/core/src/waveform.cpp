#include "sicsim/waveform.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sicsim/fft.hpp"

namespace sicsim {
namespace {

void shape_and_normalize(ComplexSignal& s, double bandwidth_hz, double power_dbm) {
    const std::size_t n = s.size();
    const double fs = s.sample_rate_hz;
    fft::forward_inplace(s.samples);
    const double f2 = bandwidth_hz / 2.0;
    const double f1 = f2 - 0.02 * bandwidth_hz;
    for (std::size_t i = 0; i < n; ++i) {
        // FFT bin frequency in [-fs/2, fs/2)
        const double k = (i <= n / 2) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(n);
        const double f = std::abs(k * fs / static_cast<double>(n));
        double g = 0.0;
        if (f <= f1)
            g = 1.0;
        else if (f < f2)
            g = 0.5 * (1.0 + std::cos(std::numbers::pi * (f - f1) / (f2 - f1)));
        s.samples[i] *= g;
    }
    fft::inverse_inplace(s.samples);
    const double scale = std::sqrt(mw_from_dbm(power_dbm) / mean_power_mw(s));
    for (auto& v : s.samples) v *= scale;
}

}  // namespace

ComplexSignal generate(const WaveformSpec& spec, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("invalid sample rate");
    if (!(spec.duration_s > 0.0)) throw std::invalid_argument("invalid duration");
    const std::size_t n =
        static_cast<std::size_t>(std::llround(spec.duration_s * sample_rate_hz));
    if (n == 0) throw std::invalid_argument("invalid duration");

    ComplexSignal s;
    s.sample_rate_hz = sample_rate_hz;
    s.samples.resize(n);

    switch (spec.kind) {
        case WaveformKind::two_tone: {
            if (!(spec.tone_spacing_hz > 0.0))
                throw std::invalid_argument("invalid tone spacing");
            if (spec.tone_spacing_hz >= sample_rate_hz)
                throw std::invalid_argument("tone spacing exceeds sample rate");
            const double a = std::sqrt(mw_from_dbm(spec.power_dbm) / 2.0);
            const double w = std::numbers::pi * spec.tone_spacing_hz / sample_rate_hz;
            for (std::size_t i = 0; i < n; ++i) {
                const double ph = w * static_cast<double>(i);
                s.samples[i] = a * (cdouble{std::cos(ph), std::sin(ph)} +
                                    cdouble{std::cos(ph), -std::sin(ph)});
            }
            return s;
        }
        case WaveformKind::bandlimited_noise:
        case WaveformKind::soi: {
            if (!(spec.bandwidth_hz > 0.0)) throw std::invalid_argument("invalid bandwidth");
            if (spec.bandwidth_hz >= sample_rate_hz)
                throw std::invalid_argument("bandwidth exceeds sample rate");
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (auto& v : s.samples) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                v = cdouble{re, im};
            }
            shape_and_normalize(s, spec.bandwidth_hz, spec.power_dbm);
            return s;
        }
    }
    throw std::invalid_argument("invalid waveform kind");
}

}  // namespace sicsim
