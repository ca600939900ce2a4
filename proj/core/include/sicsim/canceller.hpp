#pragma once

#include <optional>
#include <vector>

#include "sicsim/signal.hpp"

namespace sicsim {

struct CancellerConfig {
    // Fixed branch delays, strictly increasing. Default two-branch 5/7.5 ns.
    std::vector<double> tap_delays_s = {5e-9, 7.5e-9};
    // Optional magnitude cap per weight (a real vector modulator saturates);
    // disabled by default.
    std::optional<double> weight_cap;

    std::size_t n_taps() const { return tap_delays_s.size(); }
};

struct CancellerWeights {
    std::vector<cdouble> w;
};

// Cancellation signal sum_n w_n * x_ref(t - tau_n).
ComplexSignal synthesize(const CancellerConfig& cfg, const CancellerWeights& w,
                         const ComplexSignal& x_ref);

// z = y - synthesize(cfg, w, x_ref)
ComplexSignal cancel(const CancellerConfig& cfg, const CancellerWeights& w,
                     const ComplexSignal& y, const ComplexSignal& x_ref);

}  // namespace sicsim
