#include "epns/macro.hpp"

#include <cmath>

namespace epns {

namespace {

SpectralScalar mean_zero(const SpectralScalar& f) {
    SpectralScalar r = f;
    double m = mean(f);
    for (auto& v : r.values) v -= m;
    return r;
}

// u . grad(f), dealiased.
SpectralScalar advect(const SpectralVector& u, const SpectralScalar& f) {
    auto gf = gradient(f);
    SpectralScalar r = dealiased_product(u[0], gf[0]);
    if (u.dim() == 2) r = r + dealiased_product(u[1], gf[1]);
    return r;
}

} // namespace

MacroState epns_rhs(const MacroState& state) {
    const TorusGrid& g = state.density_var.grid;
    MacroState out = state;
    SpectralScalar rho = state.rho();

    // Coulomb force from the actual fluctuation (background = current mean).
    SpectralScalar force_pot = convolve_kernel(mean_zero(rho), KernelKind::exact);
    SpectralVector coulomb = gradient(force_pot);

    if (state.variant == MacroVariant::isothermal) {
        // dg = -u.grad(g) - div(u)
        out.density_var = -1.0 * (advect(state.u, state.density_var) + divergence(state.u));
    } else {
        // dh = -div((1+h) u), conservative form
        SpectralVector flux(g);
        for (int c = 0; c < g.dim; ++c) flux[c] = dealiased_product(rho, state.u[c]);
        out.density_var = -1.0 * divergence(flux);
    }

    // du = -(u.grad)u - sigma grad(g) - (u - v + grad K * (rho-1))
    SpectralVector grad_p = (state.variant == MacroVariant::isothermal)
                                ? gradient(state.density_var)
                                : SpectralVector(g);
    for (int c = 0; c < g.dim; ++c) {
        SpectralScalar adv = advect(state.u, state.u[c]);
        for (std::size_t i = 0; i < adv.size(); ++i)
            out.u[c][i] = -adv[i] - state.sigma * grad_p[c][i] -
                          (state.u[c][i] - state.v[c][i] + coulomb[c][i]);
    }

    // dv = P[-(v.grad)v + Lap v + rho (u - v)]
    SpectralVector nv(g);
    for (int c = 0; c < g.dim; ++c) {
        SpectralScalar adv = advect(state.v, state.v[c]);
        SpectralScalar lap = laplacian(state.v[c]);
        SpectralScalar slip(g);
        for (std::size_t i = 0; i < slip.size(); ++i) slip[i] = state.u[c][i] - state.v[c][i];
        SpectralScalar drag = dealiased_product(rho, slip);
        for (std::size_t i = 0; i < adv.size(); ++i) nv[c][i] = -adv[i] + lap[i] + drag[i];
    }
    out.v = (g.dim == 2) ? leray_project(nv) : nv;
    return out;
}

namespace {

// v-tendency without the viscous term (handled by the integrating factor).
SpectralVector fluid_tendency_inviscid(const MacroState& state, const SpectralScalar& rho) {
    const TorusGrid& g = state.density_var.grid;
    SpectralVector nv(g);
    for (int c = 0; c < g.dim; ++c) {
        SpectralScalar adv = advect(state.v, state.v[c]);
        SpectralScalar slip(g);
        for (std::size_t i = 0; i < slip.size(); ++i) slip[i] = state.u[c][i] - state.v[c][i];
        SpectralScalar drag = dealiased_product(rho, slip);
        for (std::size_t i = 0; i < adv.size(); ++i) nv[c][i] = drag[i] - adv[i];
    }
    return (g.dim == 2) ? leray_project(nv) : nv;
}

struct Tendency {
    SpectralScalar q;
    SpectralVector u;
    std::vector<std::vector<cplx>> v;  // spectral, in the frame of its stage
};

Tendency eval_rhs(const MacroState& state) {
    const TorusGrid& g = state.density_var.grid;
    SpectralScalar rho = state.rho();
    if (state.variant == MacroVariant::pressureless && field_min(rho) <= 0.0)
        throw SolverAbort("pressureless density lost positivity", 0.0);

    MacroState full = epns_rhs(state);  // reuses q/u parts
    Tendency t;
    t.q = std::move(full.density_var);
    t.u = std::move(full.u);
    SpectralVector nv = fluid_tendency_inviscid(state, rho);
    t.v = {nv[0].coeffs(), g.dim == 2 ? nv[1].coeffs() : std::vector<cplx>()};
    return t;
}

} // namespace

double epns_step(MacroState& state, double dt, double t_now) {
    const TorusGrid& g = state.density_var.grid;
    const double umax = std::max(field_max_abs(state.u), field_max_abs(state.v));
    if (dt * umax * g.n / kTwoPi > 0.5 + 1e-12)
        throw StepSizeError("epns_step: advective CFL violated");
    if (state.sigma > 0.0 && dt * std::sqrt(state.sigma) * g.n > 1.0 + 1e-12)
        throw StepSizeError("epns_step: acoustic guard violated");
    {
        SpectralScalar rho = state.rho();
        if (state.variant == MacroVariant::pressureless && field_min(rho) <= 0.0)
            throw SolverAbort("pressureless density lost positivity", t_now);
    }

    const std::size_t sz = g.size();
    std::vector<double> k2(sz);
    {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i) {
            double a = wavenumber(i, g.n);
            for (int j = 0; j < (g.dim == 2 ? g.n : 1); ++j, ++idx) {
                double b = (g.dim == 2) ? wavenumber(j, g.n) : 0.0;
                k2[idx] = a * a + b * b;
            }
        }
    }
    auto decay = [&](std::vector<cplx>& c, double tau) {
        for (std::size_t i = 0; i < sz; ++i) c[i] *= std::exp(-k2[i] * tau);
    };
    auto to_real = [&](const std::vector<std::vector<cplx>>& vc) {
        SpectralVector v(g);
        for (int c = 0; c < g.dim; ++c) v[c] = SpectralScalar::from_coeffs(g, vc[c]);
        return v;
    };

    std::vector<std::vector<cplx>> v0 = {state.v[0].coeffs(),
                                         g.dim == 2 ? state.v[1].coeffs() : std::vector<cplx>()};
    const double h = dt;

    try {
        Tendency k1 = eval_rhs(state);

        MacroState ya = state;
        std::vector<std::vector<cplx>> va(g.dim);
        for (std::size_t i = 0; i < ya.density_var.size(); ++i) {
            ya.density_var[i] = state.density_var[i] + 0.5 * h * k1.q[i];
            for (int c = 0; c < g.dim; ++c) ya.u[c][i] = state.u[c][i] + 0.5 * h * k1.u[c][i];
        }
        for (int c = 0; c < g.dim; ++c) {
            va[c].resize(sz);
            for (std::size_t i = 0; i < sz; ++i) va[c][i] = v0[c][i] + 0.5 * h * k1.v[c][i];
            decay(va[c], 0.5 * h);
        }
        ya.v = to_real(va);
        Tendency k2t = eval_rhs(ya);

        MacroState yb = state;
        std::vector<std::vector<cplx>> vb(g.dim);
        for (std::size_t i = 0; i < yb.density_var.size(); ++i) {
            yb.density_var[i] = state.density_var[i] + 0.5 * h * k2t.q[i];
            for (int c = 0; c < g.dim; ++c) yb.u[c][i] = state.u[c][i] + 0.5 * h * k2t.u[c][i];
        }
        for (int c = 0; c < g.dim; ++c) {
            vb[c].resize(sz);
            for (std::size_t i = 0; i < sz; ++i) vb[c][i] = v0[c][i];
            decay(vb[c], 0.5 * h);
            for (std::size_t i = 0; i < sz; ++i) vb[c][i] += 0.5 * h * k2t.v[c][i];
        }
        yb.v = to_real(vb);
        Tendency k3 = eval_rhs(yb);

        MacroState yc = state;
        std::vector<std::vector<cplx>> vcs(g.dim);
        for (std::size_t i = 0; i < yc.density_var.size(); ++i) {
            yc.density_var[i] = state.density_var[i] + h * k3.q[i];
            for (int c = 0; c < g.dim; ++c) yc.u[c][i] = state.u[c][i] + h * k3.u[c][i];
        }
        for (int c = 0; c < g.dim; ++c) {
            vcs[c].resize(sz);
            for (std::size_t i = 0; i < sz; ++i) vcs[c][i] = v0[c][i];
            decay(vcs[c], h);
            std::vector<cplx> k3s = k3.v[c];
            decay(k3s, 0.5 * h);
            for (std::size_t i = 0; i < sz; ++i) vcs[c][i] += h * k3s[i];
        }
        yc.v = to_real(vcs);
        Tendency k4 = eval_rhs(yc);

        // combine
        for (std::size_t i = 0; i < state.density_var.size(); ++i) {
            state.density_var[i] +=
                h / 6.0 * (k1.q[i] + 2.0 * k2t.q[i] + 2.0 * k3.q[i] + k4.q[i]);
            for (int c = 0; c < g.dim; ++c)
                state.u[c][i] +=
                    h / 6.0 * (k1.u[c][i] + 2.0 * k2t.u[c][i] + 2.0 * k3.u[c][i] + k4.u[c][i]);
        }
        for (int c = 0; c < g.dim; ++c) {
            std::vector<cplx> acc = v0[c];
            decay(acc, h);
            std::vector<cplx> k1s = k1.v[c];
            decay(k1s, h);
            std::vector<cplx> k23(sz);
            for (std::size_t i = 0; i < sz; ++i) k23[i] = 2.0 * k2t.v[c][i] + 2.0 * k3.v[c][i];
            decay(k23, 0.5 * h);
            for (std::size_t i = 0; i < sz; ++i)
                acc[i] += h / 6.0 * (k1s[i] + k23[i] + k4.v[c][i]);
            state.v[c] = SpectralScalar::from_coeffs(g, std::move(acc));
        }
    } catch (SolverAbort& e) {
        throw SolverAbort(e.what(), t_now);
    }

    // Mass projection: renormalize mean(rho) to 1, return the logged drift.
    double drift;
    if (state.variant == MacroVariant::isothermal) {
        SpectralScalar rho = state.rho();
        double m = mean(rho);
        if (m <= 0.0) throw SolverAbort("isothermal mean density lost positivity", t_now);
        drift = m - 1.0;
        double corr = std::log(m);
        for (auto& gv : state.density_var.values) gv -= corr;
    } else {
        drift = mean(state.density_var);
        for (auto& hv : state.density_var.values) hv -= drift;
        SpectralScalar rho = state.rho();
        if (field_min(rho) <= 0.0)
            throw SolverAbort("pressureless density lost positivity", t_now + dt);
    }
    return drift;
}

EnergyReport energy_report(const MacroState& state) {
    EnergyReport r;
    SpectralScalar rho = state.rho();
    const std::size_t sz = rho.size();
    double kin = 0.0, drag = 0.0, ent = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        double usq = 0.0, slip = 0.0;
        for (int c = 0; c < rho.grid.dim; ++c) {
            usq += state.u[c][i] * state.u[c][i];
            double d = state.u[c][i] - state.v[c][i];
            slip += d * d;
        }
        kin += rho[i] * usq;
        drag += rho[i] * slip;
        if (state.sigma > 0.0 && rho[i] > 0.0) ent += rho[i] * std::log(rho[i]);
    }
    const double w = rho.grid.cell_volume();
    r.kinetic = 0.5 * kin * w;
    r.dissipation_drag = drag * w;
    r.entropy = state.sigma * ent * w;

    SpectralScalar pot = convolve_kernel(mean_zero(rho), KernelKind::exact);
    r.coulomb = 0.5 * std::pow(l2_norm(gradient(pot)), 2);
    r.fluid = 0.5 * inner(state.v, state.v);
    double dv = 0.0;
    for (int c = 0; c < rho.grid.dim; ++c) {
        auto gc = gradient(state.v[c]);
        dv += inner(gc, gc);
    }
    r.dissipation_v = dv;
    return r;
}

std::pair<double, double> coulomb_ibp_check(const SpectralScalar& h, const SpectralVector& u) {
    SpectralScalar pot = convolve_kernel(h, KernelKind::exact);
    auto grad_pot = gradient(pot);
    double lhs = 0.0;
    for (int c = 0; c < h.grid.dim; ++c) {
        auto hess_row = gradient(grad_pot[c]);
        auto grad_u = gradient(u[c]);
        lhs += inner(hess_row, grad_u);
    }
    double rhs = -inner(h, divergence(u));
    return {lhs, rhs};
}

double norm_tracker(const MacroState& state, double s) {
    double sq = (state.variant == MacroVariant::isothermal)
                    ? std::pow(sobolev_norm(state.density_var, s), 2)
                    : std::pow(sobolev_norm(state.density_var, s - 1.0), 2);
    sq += std::pow(sobolev_norm(state.u, s), 2);
    sq += std::pow(sobolev_norm(state.v, s), 2);
    return sq;
}

} // namespace epns
