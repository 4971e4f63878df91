#include "epns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace epns {
namespace fft {

namespace {

struct PlanKey {
    int rank, n, sign;
    bool operator<(const PlanKey& o) const {
        if (rank != o.rank) return rank < o.rank;
        if (n != o.n) return n < o.n;
        return sign < o.sign;
    }
};

// FFTW planning is not thread-safe; new-array execution on distinct buffers is.
std::mutex plan_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(int rank, int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    PlanKey key{rank, n, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t total = 1;
    int dims[2] = {n, n};
    for (int d = 0; d < rank; ++d) total *= static_cast<std::size_t>(n);
    fftw_complex* buf = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(rank, dims, buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    cache.emplace(key, p);
    return p;
}

} // namespace

void transform(int rank, int n, cplx* data, int sign) {
    fftw_plan p = get_plan(rank, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

std::vector<cplx> forward(const TorusGrid& g, const std::vector<double>& real_values) {
    std::vector<cplx> c(real_values.begin(), real_values.end());
    transform(g.dim, g.n, c.data(), -1);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& z : c) z *= scale;
    return c;
}

std::vector<double> inverse_real(const TorusGrid& g, std::vector<cplx> coeffs) {
    transform(g.dim, g.n, coeffs.data(), +1);
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = coeffs[i].real();
    return out;
}

void line_forward(int n, cplx* data) {
    transform(1, n, data, -1);
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) data[i] *= scale;
}

void line_backward(int n, cplx* data) { transform(1, n, data, +1); }

} // namespace fft
} // namespace epns
