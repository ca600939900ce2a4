#include "sicsim/lms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sicsim/delay.hpp"

namespace sicsim {
namespace {

constexpr double kDivergenceGuard = 1e6;

struct BranchParams {
    bool adaptive;
    double off_i;  // dc_offset_i + nulling_offset_i
    double off_q;
};

std::vector<BranchParams> branch_params(const LmsConfig& cfg, std::size_t n) {
    auto at = [](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? v[i] : 0.0;
    };
    if (!cfg.modes.empty() && cfg.modes.size() != n)
        throw std::invalid_argument("branch mode count does not match tap count");
    std::vector<BranchParams> bp(n);
    for (std::size_t i = 0; i < n; ++i) {
        bp[i].adaptive = cfg.modes.empty() || cfg.modes[i] == BranchMode::adaptive;
        bp[i].off_i = at(cfg.dc_offset_i, i) + at(cfg.nulling_offset_i, i);
        bp[i].off_q = at(cfg.dc_offset_q, i) + at(cfg.nulling_offset_q, i);
    }
    return bp;
}

double leak_factor(const LmsConfig& cfg, double dt) {
    if (!std::isfinite(cfg.integrator_dc_gain_db)) return 1.0;
    if (cfg.integrator_dc_gain_db < 0.0)
        throw std::invalid_argument("integrator_dc_gain_db must be >= 0");
    // First-order leaky integrator: pole at mu*P0/G below the unity-gain rate
    // mu*P0 (P0 = 1 mW), so the steady-state weight bias scales as 1/G.
    const double g = amplitude_from_db(cfg.integrator_dc_gain_db);
    return 1.0 - cfg.mu * dt * 1.0 / g;
}

inline cdouble update_weight(cdouble w, cdouble x, cdouble z, double mu_dt,
                             double off_i, double off_q, double lambda) {
    const double di = x.real() * z.real() + x.imag() * z.imag() + off_i;
    const double dq = x.real() * z.imag() - x.imag() * z.real() + off_q;
    return lambda * cdouble{w.real() + mu_dt * di, w.imag() + mu_dt * dq};
}

}  // namespace

CancellerWeights lms_step(const CancellerWeights& w,
                          const std::vector<cdouble>& x_delayed, cdouble z,
                          double dt, const LmsConfig& cfg) {
    if (x_delayed.size() != w.w.size())
        throw std::invalid_argument("reference count does not match weight count");
    if (!(cfg.mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const auto bp = branch_params(cfg, w.w.size());
    const double lambda = leak_factor(cfg, dt);
    const double mu_dt = cfg.mu * dt;
    CancellerWeights out = w;
    for (std::size_t n = 0; n < out.w.size(); ++n) {
        if (!bp[n].adaptive) continue;
        out.w[n] = update_weight(out.w[n], x_delayed[n], z, mu_dt, bp[n].off_i,
                                 bp[n].off_q, lambda);
    }
    return out;
}

ClosedLoopResult run_closed_loop_prepared(const ComplexSignal& y,
                                          const ComplexSignal& x_ref,
                                          const CancellerConfig& cfg,
                                          const LmsConfig& lms,
                                          const CancellerWeights& w0) {
    const std::size_t n = y.size();
    if (n == 0) throw std::invalid_argument("empty signal");
    // The reference may extend past the received record: the tail guard keeps
    // the delay interpolators from reading zeros beyond the signal edge.
    if (x_ref.size() < n) throw std::invalid_argument("signal length mismatch");
    if (x_ref.sample_rate_hz != y.sample_rate_hz)
        throw std::invalid_argument("sample rate mismatch");
    const std::size_t nb = cfg.n_taps();
    if (w0.w.size() != nb) throw std::invalid_argument("initial weight count mismatch");
    if (!(lms.mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (lms.trace_decim == 0 || lms.residual_window == 0)
        throw std::invalid_argument("trace_decim and residual_window must be positive");

    const auto bp = branch_params(lms, nb);
    const double dt = y.dt();
    const double mu_dt = lms.mu * dt;
    const double lambda = leak_factor(lms, dt);
    const double cap = cfg.weight_cap.value_or(0.0);

    std::vector<ComplexSignal> xd;
    xd.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b)
        xd.push_back(fractional_delay(x_ref, cfg.tap_delays_s[b]));

    ClosedLoopResult res;
    res.z.sample_rate_hz = y.sample_rate_hz;
    res.z.start_time_s = y.start_time_s;
    res.z.samples.resize(n);
    res.final_weights = w0;
    auto& w = res.final_weights.w;

    std::vector<const cdouble*> xp(nb);
    for (std::size_t b = 0; b < nb; ++b) xp[b] = xd[b].samples.data();

    const std::size_t n_trace = n / lms.trace_decim + 1;
    res.trace.times_s.reserve(n_trace);
    res.trace.residual_power_dbm.reserve(n_trace);
    res.trace.weights.assign(nb, {});
    for (auto& tw : res.trace.weights) tw.reserve(n_trace);

    // Trailing-window residual power via a ring buffer of |z|^2.
    std::vector<double> ring(lms.residual_window, 0.0);
    double ring_sum = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        cdouble s{0.0, 0.0};
        for (std::size_t b = 0; b < nb; ++b) s += w[b] * xp[b][i];
        const cdouble z = y.samples[i] - s;
        res.z.samples[i] = z;

        for (std::size_t b = 0; b < nb; ++b) {
            if (!bp[b].adaptive) continue;
            cdouble wn = update_weight(w[b], xp[b][i], z, mu_dt,
                                       bp[b].off_i, bp[b].off_q, lambda);
            if (cap > 0.0) {
                const double m = std::abs(wn);
                if (m > cap) wn *= cap / m;
            }
            if (std::norm(wn) > kDivergenceGuard * kDivergenceGuard)
                throw std::runtime_error("LMS diverged (reduce mu)");
            w[b] = wn;
        }

        const double p = std::norm(z);
        const std::size_t slot = i % lms.residual_window;
        ring_sum += p - ring[slot];
        ring[slot] = p;

        if ((i + 1) % lms.trace_decim == 0 || i + 1 == n) {
            const std::size_t filled = std::min<std::size_t>(i + 1, lms.residual_window);
            res.trace.times_s.push_back(y.start_time_s + static_cast<double>(i) * dt);
            res.trace.residual_power_dbm.push_back(
                dbm_from_mw(ring_sum / static_cast<double>(filled)));
            for (std::size_t b = 0; b < nb; ++b) res.trace.weights[b].push_back(w[b]);
        }
    }
    return res;
}

ClosedLoopResult run_closed_loop(const ComplexSignal& tx, const SiChannel& ch,
                                 const CancellerConfig& cfg, const LmsConfig& lms,
                                 const CancellerWeights& w0,
                                 const ComplexSignal* soi,
                                 std::uint64_t noise_seed) {
    ComplexSignal y = propagate(ch, tx, noise_seed);
    if (soi) {
        if (soi->size() != y.size()) throw std::invalid_argument("signal length mismatch");
        for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += soi->samples[i];
    }
    return run_closed_loop_prepared(y, tx, cfg, lms, w0);
}

CancellerWeights wiener_solution(const ComplexSignal& x_ref,
                                 const ComplexSignal& y,
                                 const CancellerConfig& cfg) {
    const std::size_t n = x_ref.size();
    if (y.size() != n) throw std::invalid_argument("signal length mismatch");
    const std::size_t nb = cfg.n_taps();
    if (nb == 0) throw std::invalid_argument("canceller needs at least one tap");

    double max_delay = 0.0;
    for (double d : cfg.tap_delays_s) max_delay = std::max(max_delay, d);
    const std::size_t margin =
        kDelayFilterLength +
        static_cast<std::size_t>(std::ceil(max_delay * x_ref.sample_rate_hz));
    if (n < 2 * margin + 100 * nb) throw std::invalid_argument("record too short");

    std::vector<ComplexSignal> xd;
    xd.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b)
        xd.push_back(fractional_delay(x_ref, cfg.tap_delays_s[b]));

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(nb, nb);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nb);
    for (std::size_t i = margin; i < n - margin; ++i) {
        for (std::size_t a = 0; a < nb; ++a) {
            const cdouble xa = xd[a].samples[i];
            rhs(a) += std::conj(xa) * y.samples[i];
            for (std::size_t b = a; b < nb; ++b)
                gram(a, b) += std::conj(xa) * xd[b].samples[i];
        }
    }
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t b = 0; b < a; ++b) gram(a, b) = std::conj(gram(b, a));

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e10)
        throw std::runtime_error("ill-conditioned reference covariance");

    const Eigen::VectorXcd sol = gram.ldlt().solve(rhs);
    CancellerWeights w;
    w.w.assign(sol.data(), sol.data() + nb);
    return w;
}

}  // namespace sicsim
