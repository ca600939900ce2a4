#include "sicsim/canceller.hpp"

#include <stdexcept>

#include "sicsim/delay.hpp"

namespace sicsim {
namespace {

void validate(const CancellerConfig& cfg, const CancellerWeights& w) {
    if (cfg.tap_delays_s.empty()) throw std::invalid_argument("canceller needs at least one tap");
    for (std::size_t i = 1; i < cfg.tap_delays_s.size(); ++i)
        if (!(cfg.tap_delays_s[i] > cfg.tap_delays_s[i - 1]))
            throw std::invalid_argument("tap delays must be strictly increasing");
    if (w.w.size() != cfg.n_taps())
        throw std::invalid_argument("weight count does not match tap count");
}

}  // namespace

ComplexSignal synthesize(const CancellerConfig& cfg, const CancellerWeights& w,
                         const ComplexSignal& x_ref) {
    validate(cfg, w);
    ComplexSignal out;
    out.sample_rate_hz = x_ref.sample_rate_hz;
    out.start_time_s = x_ref.start_time_s;
    out.samples.assign(x_ref.size(), cdouble{0.0, 0.0});
    for (std::size_t n = 0; n < cfg.n_taps(); ++n) {
        const ComplexSignal xd = fractional_delay(x_ref, cfg.tap_delays_s[n]);
        for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += w.w[n] * xd.samples[i];
    }
    return out;
}

ComplexSignal cancel(const CancellerConfig& cfg, const CancellerWeights& w,
                     const ComplexSignal& y, const ComplexSignal& x_ref) {
    if (y.size() != x_ref.size()) throw std::invalid_argument("signal length mismatch");
    if (y.sample_rate_hz != x_ref.sample_rate_hz)
        throw std::invalid_argument("sample rate mismatch");
    ComplexSignal z = synthesize(cfg, w, x_ref);
    for (std::size_t i = 0; i < z.size(); ++i)
        z.samples[i] = y.samples[i] - z.samples[i];
    return z;
}

}  // namespace sicsim
