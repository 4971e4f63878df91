#include "epns/spectral_ops.hpp"

#include <cmath>

namespace epns {

namespace {

constexpr cplx kImag{0.0, 1.0};

// Iterate FFT bins of a [n]^dim array, exposing the signed wavenumber tuple.
template <typename F>
void for_each_mode(const TorusGrid& g, F&& fn) {
    const int n = g.n;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            int k[2] = {wavenumber(i, n), 0};
            fn(static_cast<std::size_t>(i), k);
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            int k0 = wavenumber(i, n);
            for (int j = 0; j < n; ++j, ++idx) {
                int k[2] = {k0, wavenumber(j, n)};
                fn(idx, k);
            }
        }
    }
}

bool has_nyquist(const int* k, const TorusGrid& g) {
    for (int d = 0; d < g.dim; ++d)
        if (k[d] == -g.n / 2) return true;
    return false;
}

double ksq(const int* k, const TorusGrid& g) {
    double s = 0.0;
    for (int d = 0; d < g.dim; ++d) s += static_cast<double>(k[d]) * k[d];
    return s;
}

} // namespace

SpectralScalar solve_poisson(const SpectralScalar& rho) {
    if (rho.grid.n < 8) throw ConfigError("solve_poisson: degenerate grid");
    if (mean(rho) <= 0.0) throw ContractViolation("solve_poisson: background mean(rho) must be positive");
    auto c = rho.coeffs();
    for_each_mode(rho.grid, [&](std::size_t i, const int* k) {
        double k2 = ksq(k, rho.grid);
        c[i] = (k2 == 0.0) ? cplx{0.0, 0.0} : c[i] / k2;
    });
    return SpectralScalar::from_coeffs(rho.grid, std::move(c));
}

SpectralScalar convolve_kernel(const SpectralScalar& h, KernelKind kind, double eps_k) {
    const TorusGrid& g = h.grid;
    if (std::abs(mean(h)) > 1e-10 * (1.0 + field_max_abs(h)))
        throw ContractViolation("convolve_kernel: source must be mean-zero");

    if (kind == KernelKind::exact) {
        auto c = h.coeffs();
        for_each_mode(g, [&](std::size_t i, const int* k) {
            double k2 = ksq(k, g);
            c[i] = (k2 == 0.0) ? cplx{0.0, 0.0} : c[i] / k2;
        });
        return SpectralScalar::from_coeffs(g, std::move(c));
    }

    // Mollified kernel, d=2 only. The smooth correction G0 is realized
    // implicitly through the exact spectral Green's function: the kernel is
    // split as K^eps = K + M_eps with M_eps = -(c0/2) log(1 + eps/|x|^2) the
    // mollification of the singular part alone. M_eps is sampled with periodic
    // distance (origin cell smoothed at quadrature scale), mean-shifted to
    // zero, and applied by Fourier multiplication.
    if (g.dim != 2) throw ConfigError("convolve_kernel: regularized kernel implemented for d=2 only");
    if (eps_k <= 0.0) throw ConfigError("convolve_kernel: regularization parameter must be positive");
    const double c0 = 1.0 / kTwoPi;  // leading-order match with the torus Green's function
    const double r0sq = 0.25 * g.dx() * g.dx();
    SpectralScalar kern(g);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        double x0 = g.node(i);
        if (x0 >= kTwoPi / 2) x0 -= kTwoPi;
        for (int j = 0; j < g.n; ++j, ++idx) {
            double x1 = g.node(j);
            if (x1 >= kTwoPi / 2) x1 -= kTwoPi;
            kern[idx] = -0.5 * c0 * std::log1p(eps_k / (x0 * x0 + x1 * x1 + r0sq));
        }
    }
    double kmean = mean(kern);
    for (auto& v : kern.values) v -= kmean;

    auto kc = kern.coeffs();
    auto hc = h.coeffs();
    const double vol = g.volume();
    for_each_mode(g, [&](std::size_t i, const int* k) {
        double k2 = ksq(k, g);
        cplx green = (k2 == 0.0) ? cplx{0.0, 0.0} : hc[i] / k2;
        hc[i] = green + vol * kc[i] * hc[i];
    });
    return SpectralScalar::from_coeffs(g, std::move(hc));
}

SpectralVector gradient(const SpectralScalar& f) {
    SpectralVector out(f.grid);
    auto c = f.coeffs();
    for (int d = 0; d < f.grid.dim; ++d) {
        auto cd = c;
        for_each_mode(f.grid, [&](std::size_t i, const int* k) {
            cd[i] = has_nyquist(k, f.grid) ? cplx{0.0, 0.0} : kImag * static_cast<double>(k[d]) * c[i];
        });
        out[d] = SpectralScalar::from_coeffs(f.grid, std::move(cd));
    }
    return out;
}

SpectralScalar divergence(const SpectralVector& v) {
    std::vector<cplx> acc(v.grid.size(), cplx{0.0, 0.0});
    for (int d = 0; d < v.dim(); ++d) {
        auto c = v[d].coeffs();
        for_each_mode(v.grid, [&](std::size_t i, const int* k) {
            if (!has_nyquist(k, v.grid)) acc[i] += kImag * static_cast<double>(k[d]) * c[i];
        });
    }
    return SpectralScalar::from_coeffs(v.grid, std::move(acc));
}

SpectralScalar laplacian(const SpectralScalar& f) {
    auto c = f.coeffs();
    for_each_mode(f.grid, [&](std::size_t i, const int* k) {
        c[i] = has_nyquist(k, f.grid) ? cplx{0.0, 0.0} : -ksq(k, f.grid) * c[i];
    });
    return SpectralScalar::from_coeffs(f.grid, std::move(c));
}

void dealias(std::vector<cplx>& coeffs, const TorusGrid& g) {
    const int kmax = g.n / 3;
    for_each_mode(g, [&](std::size_t i, const int* k) {
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(k[d]) > kmax) {
                coeffs[i] = cplx{0.0, 0.0};
                return;
            }
    });
}

SpectralScalar dealias(const SpectralScalar& f) {
    auto c = f.coeffs();
    dealias(c, f.grid);
    return SpectralScalar::from_coeffs(f.grid, std::move(c));
}

SpectralScalar dealiased_product(const SpectralScalar& a, const SpectralScalar& b) {
    SpectralScalar ta = dealias(a);
    SpectralScalar tb = dealias(b);
    SpectralScalar r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ta[i] * tb[i];
    return dealias(r);
}

SpectralVector leray_project(const SpectralVector& v) {
    if (v.dim() != 2) throw ContractViolation("leray_project: requires dim == 2");
    auto c0 = v[0].coeffs();
    auto c1 = v[1].coeffs();
    for_each_mode(v.grid, [&](std::size_t i, const int* k) {
        // Nyquist modes carry no usable direction on a real grid; dropping
        // them keeps the projection idempotent and symmetric (the derivative
        // operators ignore them anyway).
        if (has_nyquist(k, v.grid)) {
            c0[i] = c1[i] = cplx{0.0, 0.0};
            return;
        }
        double k2 = ksq(k, v.grid);
        if (k2 == 0.0) return;
        cplx kd = (static_cast<double>(k[0]) * c0[i] + static_cast<double>(k[1]) * c1[i]) / k2;
        c0[i] -= static_cast<double>(k[0]) * kd;
        c1[i] -= static_cast<double>(k[1]) * kd;
    });
    SpectralVector out(v.grid);
    out[0] = SpectralScalar::from_coeffs(v.grid, std::move(c0));
    out[1] = SpectralScalar::from_coeffs(v.grid, std::move(c1));
    return out;
}

double h_minus1_norm(const SpectralScalar& h) {
    if (std::abs(mean(h)) > 1e-10 * (1.0 + field_max_abs(h)))
        throw ContractViolation("h_minus1_norm: field must be mean-zero");
    auto c = h.coeffs();
    double s = 0.0;
    for_each_mode(h.grid, [&](std::size_t i, const int* k) {
        double k2 = ksq(k, h.grid);
        if (k2 > 0.0) s += std::norm(c[i]) / k2;
    });
    return std::sqrt(s * h.grid.volume());
}

double sobolev_norm(const SpectralScalar& f, double s) {
    auto c = f.coeffs();
    double acc = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, const int* k) {
        acc += std::pow(1.0 + ksq(k, f.grid), s) * std::norm(c[i]);
    });
    return std::sqrt(acc * f.grid.volume());
}

double sobolev_norm(const SpectralVector& v, double s) {
    double acc = 0.0;
    for (int c = 0; c < v.dim(); ++c) {
        double n = sobolev_norm(v[c], s);
        acc += n * n;
    }
    return std::sqrt(acc);
}

SpectralScalar translate(const SpectralScalar& f, const double* shift) {
    auto c = f.coeffs();
    for_each_mode(f.grid, [&](std::size_t i, const int* k) {
        double phase = 0.0;
        for (int d = 0; d < f.grid.dim; ++d) phase -= k[d] * shift[d];
        c[i] *= std::polar(1.0, phase);
    });
    return SpectralScalar::from_coeffs(f.grid, std::move(c));
}

} // namespace epns
