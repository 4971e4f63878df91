#pragma once

#include <vector>

#include "epns/fft.hpp"
#include "epns/grid.hpp"

namespace epns {

// Real scalar field on the spatial torus, stored at grid nodes in row-major
// order. Fourier access goes through fft::forward/inverse_real.
struct SpectralScalar {
    TorusGrid grid;
    std::vector<double> values;

    SpectralScalar() = default;
    explicit SpectralScalar(const TorusGrid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}
    SpectralScalar(const TorusGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size()) throw ContractViolation("SpectralScalar: size mismatch");
    }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    std::vector<cplx> coeffs() const { return fft::forward(grid, values); }
    static SpectralScalar from_coeffs(const TorusGrid& g, std::vector<cplx> c) {
        return SpectralScalar(g, fft::inverse_real(g, std::move(c)));
    }
};

// d-component vector field; all components share one grid.
struct SpectralVector {
    TorusGrid grid;
    std::vector<SpectralScalar> comps;

    SpectralVector() = default;
    explicit SpectralVector(const TorusGrid& g) : grid(g), comps(g.dim, SpectralScalar(g)) {}

    SpectralScalar& operator[](int c) { return comps[c]; }
    const SpectralScalar& operator[](int c) const { return comps[c]; }
    int dim() const { return grid.dim; }
};

// Pointwise arithmetic (same grid assumed).
SpectralScalar operator+(const SpectralScalar& a, const SpectralScalar& b);
SpectralScalar operator-(const SpectralScalar& a, const SpectralScalar& b);
SpectralScalar operator*(double s, const SpectralScalar& a);
SpectralVector operator+(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator-(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator*(double s, const SpectralVector& a);

double field_min(const SpectralScalar& f);
double field_max_abs(const SpectralScalar& f);
double field_max_abs(const SpectralVector& v);

// Plain and mean-removing integrals with the fixed-order node quadrature.
double integral(const SpectralScalar& f);
double mean(const SpectralScalar& f);
double inner(const SpectralScalar& a, const SpectralScalar& b);  // integral of a*b
double inner(const SpectralVector& a, const SpectralVector& b);
double l2_norm(const SpectralScalar& f);
double l2_norm(const SpectralVector& v);

} // namespace epns
