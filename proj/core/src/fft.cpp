#include "sicsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace sicsim::fft {
namespace {

// FFTW's planner is not thread-safe; plans are cached per (size, sign) and
// executed via the new-array interface. FFTW_UNALIGNED keeps a plan valid
// for any std::vector buffer; FFTW_ESTIMATE keeps planning deterministic.
std::mutex g_plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(key, p);
    return p;
}

void execute(std::vector<std::complex<double>>& v, int sign) {
    if (v.empty()) return;
    fftw_plan p = plan_for(v.size(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(p, buf, buf);
}

}  // namespace

void forward_inplace(std::vector<std::complex<double>>& v) {
    execute(v, FFTW_FORWARD);
}

void inverse_inplace(std::vector<std::complex<double>>& v) {
    execute(v, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(v.size());
    for (auto& x : v) x *= scale;
}

}  // namespace sicsim::fft
