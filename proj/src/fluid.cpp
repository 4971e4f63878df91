#include "epns/fluid.hpp"

#include <cmath>

namespace epns {

SpectralVector drag_source(const KineticMoments& m, const SpectralVector& v) {
    SpectralVector s(v.grid);
    for (int c = 0; c < v.dim(); ++c)
        for (std::size_t i = 0; i < v[c].size(); ++i)
            s[c][i] = m.momentum[c][i] - m.rho[i] * v[c][i];
    return s;
}

namespace {

// Dealiased -(v.grad)v + source, Leray-projected, in spectral coefficients.
std::vector<std::vector<cplx>> projected_tendency(const SpectralVector& v,
                                                  const SpectralVector& source) {
    const TorusGrid& g = v.grid;
    SpectralVector n(g);
    for (int c = 0; c < 2; ++c) {
        auto grad_c = gradient(v[c]);
        SpectralScalar adv = dealiased_product(v[0], grad_c[0]) +
                             dealiased_product(v[1], grad_c[1]);
        for (std::size_t i = 0; i < adv.size(); ++i) n[c][i] = source[c][i] - adv[i];
    }
    n = leray_project(n);
    return {n[0].coeffs(), n[1].coeffs()};
}

} // namespace

void ns_step(FluidState& state, const SpectralVector& source, double dt) {
    const TorusGrid& g = state.v.grid;
    if (g.dim != 2) throw ConfigError("ns_step: fluid solver is 2D");
    double cfl = dt * field_max_abs(state.v) * g.n / kTwoPi;
    if (cfl > 0.5 + 1e-12) throw StepSizeError("ns_step: advective CFL violated");

    // Williamson (2N) RK3 on the integrating-factor transformed velocity.
    static constexpr double A[3] = {0.0, -5.0 / 9.0, -153.0 / 128.0};
    static constexpr double B[3] = {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};
    // decay intervals between the stage times (0, 1/3, 3/4, 1)
    static constexpr double D[3] = {1.0 / 3.0, 5.0 / 12.0, 1.0 / 4.0};

    const std::size_t sz = g.size();
    std::vector<std::vector<cplx>> vc = {state.v[0].coeffs(), state.v[1].coeffs()};
    std::vector<std::vector<cplx>> q = {std::vector<cplx>(sz), std::vector<cplx>(sz)};

    std::vector<double> k2(sz);
    {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i) {
            double a = wavenumber(i, g.n);
            for (int j = 0; j < g.n; ++j, ++idx) {
                double b = wavenumber(j, g.n);
                k2[idx] = a * a + b * b;
            }
        }
    }

    SpectralVector vcur = state.v;
    for (int s = 0; s < 3; ++s) {
        auto n = projected_tendency(vcur, source);
        for (int c = 0; c < 2; ++c) {
            for (std::size_t i = 0; i < sz; ++i) {
                cplx qi = (s == 0) ? cplx{0.0, 0.0} : A[s] * q[c][i];
                qi += dt * n[c][i];
                cplx vi = vc[c][i] + B[s] * qi;
                // advance the diffusion frame to the next stage time
                double decay = std::exp(-state.nu * k2[i] * D[s] * dt);
                q[c][i] = qi * decay;
                vc[c][i] = vi * decay;
            }
        }
        if (s < 2) {
            vcur[0] = SpectralScalar::from_coeffs(g, vc[0]);
            vcur[1] = SpectralScalar::from_coeffs(g, vc[1]);
        }
    }
    state.v[0] = SpectralScalar::from_coeffs(g, std::move(vc[0]));
    state.v[1] = SpectralScalar::from_coeffs(g, std::move(vc[1]));
}

} // namespace epns
