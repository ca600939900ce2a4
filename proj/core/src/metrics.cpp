#include "sicsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sicsim/fft.hpp"
#include "sicsim/spectral.hpp"

namespace sicsim {
namespace {

ComplexSignal steady_slice(const ComplexSignal& s, double start_frac) {
    if (!(start_frac >= 0.0 && start_frac < 1.0))
        throw std::invalid_argument("invalid steady-state fraction");
    const std::size_t first = static_cast<std::size_t>(
        std::floor(static_cast<double>(s.size()) * start_frac));
    ComplexSignal out;
    out.sample_rate_hz = s.sample_rate_hz;
    out.start_time_s = s.start_time_s + static_cast<double>(first) * s.dt();
    out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(first),
                       s.samples.end());
    return out;
}

}  // namespace

CancellationReport cancellation_report(const ComplexSignal& tx,
                                       const ComplexSignal& y,
                                       const ComplexSignal& z, double f_lo_hz,
                                       double f_hi_hz, double steady_state_start) {
    if (tx.sample_rate_hz != y.sample_rate_hz || y.sample_rate_hz != z.sample_rate_hz)
        throw std::invalid_argument("sample rate mismatch");
    CancellationReport r;
    r.f_lo_hz = f_lo_hz;
    r.f_hi_hz = f_hi_hz;
    r.p_tx_dbm = power_dbm(steady_slice(tx, steady_state_start), f_lo_hz, f_hi_hz);
    r.p_y_dbm = power_dbm(steady_slice(y, steady_state_start), f_lo_hz, f_hi_hz);
    r.p_z_dbm = power_dbm(steady_slice(z, steady_state_start), f_lo_hz, f_hi_hz);
    r.intrinsic_db = r.p_tx_dbm - r.p_y_dbm;
    r.active_db = r.p_y_dbm - r.p_z_dbm;
    r.total_db = r.intrinsic_db + r.active_db;
    return r;
}

double convergence_time(const LmsTrace& trace, double settle_margin_db) {
    const auto& r = trace.residual_power_dbm;
    if (r.empty() || trace.times_s.size() != r.size())
        throw std::invalid_argument("empty trace");
    const std::size_t tail = std::max<std::size_t>(1, r.size() / 5);
    std::vector<double> last(r.end() - static_cast<std::ptrdiff_t>(tail), r.end());
    std::nth_element(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(tail / 2),
                     last.end());
    const double median = last[tail / 2];

    // One-sided test: a residual estimate dipping below the settled level is
    // still settled; only excursions above median + margin count as unsettled.
    std::size_t first_ok = r.size();  // first index from which all stay in band
    for (std::size_t i = r.size(); i-- > 0;) {
        if (r[i] - median <= settle_margin_db)
            first_ok = i;
        else
            break;
    }
    if (first_ok == r.size()) return kNotConverged;
    return trace.times_s[first_ok];
}

SoiFidelity soi_fidelity(const ComplexSignal& soi_in, const ComplexSignal& z,
                         double f_lo_hz, double f_hi_hz,
                         double steady_state_start) {
    if (soi_in.sample_rate_hz != z.sample_rate_hz)
        throw std::invalid_argument("sample rate mismatch");
    if (soi_in.size() != z.size()) throw std::invalid_argument("signal length mismatch");

    const ComplexSignal soi_ss = steady_slice(soi_in, steady_state_start);
    const ComplexSignal z_ss = steady_slice(z, steady_state_start);

    SoiFidelity out;
    out.power_delta_db =
        power_dbm(z_ss, f_lo_hz, f_hi_hz) - power_dbm(soi_ss, f_lo_hz, f_hi_hz);

    // Brick-wall filter z to the band, then one-tap least-squares alignment.
    const std::size_t n = z_ss.size();
    std::vector<cdouble> zf = z_ss.samples;
    fft::forward_inplace(zf);
    const double df = z_ss.sample_rate_hz / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = (i <= n / 2) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(n);
        const double f = k * df;
        if (f < f_lo_hz || f > f_hi_hz) zf[i] = cdouble{0.0, 0.0};
    }
    fft::inverse_inplace(zf);

    cdouble num{0.0, 0.0};
    double den = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += std::conj(zf[i]) * soi_ss.samples[i];
        den += std::norm(zf[i]);
        ref += std::norm(soi_ss.samples[i]);
    }
    if (ref == 0.0) throw std::invalid_argument("empty signal");
    const cdouble c = den > 0.0 ? num / den : cdouble{0.0, 0.0};
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += std::norm(c * zf[i] - soi_ss.samples[i]);
    const double rel = err / ref;
    out.evm_db = rel < 1e-26 ? kNegInfDb : 10.0 * std::log10(rel);
    return out;
}

}  // namespace sicsim
