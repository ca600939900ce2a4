#include "sicsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sicsim/fft.hpp"

namespace sicsim {
namespace {

std::vector<double> make_window(Window w, std::size_t n) {
    std::vector<double> win(n, 1.0);
    if (w == Window::hann) {
        // Periodic Hann, the spectral-estimation convention.
        for (std::size_t i = 0; i < n; ++i) {
            win[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                           static_cast<double>(i) /
                                           static_cast<double>(n)));
        }
    }
    return win;
}

}  // namespace

double PsdEstimate::integrate_dbm(double f_lo, double f_hi) const {
    if (!(f_lo < f_hi)) throw std::invalid_argument("invalid band");
    double acc_mw = 0.0;
    const double half = bin_spacing_hz / 2.0;
    const double nyq = bin_spacing_hz * static_cast<double>(freqs_hz.size()) / 2.0;
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        double b_lo = freqs_hz[i] - half;
        const double b_hi = freqs_hz[i] + half;
        double ov = 0.0;
        if (b_lo < -nyq) {
            // The bin centered on -fs/2 straddles the Nyquist wrap: its lower
            // half describes content just below +fs/2.
            ov += std::max(0.0, std::min(nyq, f_hi) -
                                    std::max(b_lo + 2.0 * nyq, f_lo));
            b_lo = -nyq;
        }
        ov += std::max(0.0, std::min(b_hi, f_hi) - std::max(b_lo, f_lo));
        if (ov <= 0.0) continue;
        acc_mw += mw_from_dbm(psd_dbm_per_hz[i]) * ov;
    }
    return dbm_from_mw(acc_mw);
}

double PsdEstimate::total_power_dbm() const {
    double acc_mw = 0.0;
    for (double v : psd_dbm_per_hz) acc_mw += mw_from_dbm(v) * bin_spacing_hz;
    return dbm_from_mw(acc_mw);
}

double PsdEstimate::line_power_dbm(double f0_hz, double half_width_hz) const {
    return integrate_dbm(f0_hz - half_width_hz, f0_hz + half_width_hz);
}

PsdEstimate psd_welch(const ComplexSignal& s, std::size_t seg_len,
                      double overlap_frac, Window window) {
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("empty signal");
    if (seg_len == 0 || seg_len > n)
        throw std::invalid_argument("segment length exceeds signal length");
    if (!(overlap_frac >= 0.0 && overlap_frac < 1.0))
        throw std::invalid_argument("invalid overlap fraction");
    if (!(s.sample_rate_hz > 0.0))
        throw std::invalid_argument("invalid sample rate");

    const double fs = s.sample_rate_hz;
    const auto win = make_window(window, seg_len);
    double win_pow = 0.0;
    for (double w : win) win_pow += w * w;

    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(static_cast<double>(seg_len) * (1.0 - overlap_frac))));

    std::vector<double> acc(seg_len, 0.0);
    std::vector<cdouble> seg(seg_len);
    std::size_t n_segs = 0;
    for (std::size_t start = 0; start + seg_len <= n; start += hop) {
        for (std::size_t i = 0; i < seg_len; ++i) seg[i] = s.samples[start + i] * win[i];
        fft::forward_inplace(seg);
        for (std::size_t i = 0; i < seg_len; ++i) acc[i] += std::norm(seg[i]);
        ++n_segs;
    }

    // One-shot scale: average over segments, then the standard Welch
    // normalization |X_k|^2 / (fs * sum(w^2)), giving mW/Hz.
    const double scale = 1.0 / (static_cast<double>(n_segs) * fs * win_pow);

    PsdEstimate psd;
    psd.bin_spacing_hz = fs / static_cast<double>(seg_len);
    psd.rbw_hz = psd.bin_spacing_hz;
    psd.freqs_hz.resize(seg_len);
    psd.psd_dbm_per_hz.resize(seg_len);
    const std::ptrdiff_t lo = -static_cast<std::ptrdiff_t>(seg_len / 2);
    for (std::size_t i = 0; i < seg_len; ++i) {
        const std::ptrdiff_t k = lo + static_cast<std::ptrdiff_t>(i);
        const std::size_t raw =
            static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(seg_len)) %
                                     static_cast<std::ptrdiff_t>(seg_len));
        psd.freqs_hz[i] = static_cast<double>(k) * psd.bin_spacing_hz;
        psd.psd_dbm_per_hz[i] = dbm_from_mw(acc[raw] * scale);
    }
    return psd;
}

double power_dbm(const ComplexSignal& s, double f_lo_hz, double f_hi_hz) {
    if (s.samples.empty()) throw std::invalid_argument("empty signal");
    const double nyq = s.sample_rate_hz / 2.0;
    if (!(f_lo_hz < f_hi_hz) || f_lo_hz < -nyq || f_hi_hz > nyq)
        throw std::invalid_argument("invalid band");
    const std::size_t seg = std::min<std::size_t>(kDefaultSegLen, s.size());
    return psd_welch(s, seg).integrate_dbm(f_lo_hz, f_hi_hz);
}

}  // namespace sicsim
