#include "epns/initdata.hpp"

#include <cmath>

#include "epns/diagnostics.hpp"
#include "epns/rng.hpp"

namespace epns {

SpectralScalar random_trig_field(const TorusGrid& grid, std::uint64_t seed, int mode_cutoff) {
    Rng rng(seed);
    SpectralScalar f(grid);
    const int kc = mode_cutoff;
    for (int kx = -kc; kx <= kc; ++kx) {
        for (int ky = (grid.dim == 2 ? -kc : 0); ky <= (grid.dim == 2 ? kc : 0); ++ky) {
            if (kx == 0 && ky == 0) continue;
            double a = rng.normal(), b = rng.normal();
            std::size_t idx = 0;
            for (int i = 0; i < grid.n; ++i) {
                double x0 = grid.node(i);
                for (int j = 0; j < (grid.dim == 2 ? grid.n : 1); ++j, ++idx) {
                    double ph = kx * x0 + ky * (grid.dim == 2 ? grid.node(j) : 0.0);
                    f[idx] += a * std::cos(ph) + b * std::sin(ph);
                }
            }
        }
    }
    double sup = field_max_abs(f);
    if (sup > 0.0)
        for (auto& v : f.values) v /= sup;
    return f;
}

LimitData smooth_profiles(const TorusGrid& grid, std::uint64_t seed, double amplitude,
                          int mode_cutoff) {
    if (amplitude < 0.0 || amplitude >= 0.5)
        throw ConfigError("smooth_profiles: amplitude must lie in [0, 0.5)");
    LimitData d;
    d.rho0 = SpectralScalar(grid, 1.0);
    SpectralScalar w = random_trig_field(grid, seed, mode_cutoff);
    for (std::size_t i = 0; i < w.size(); ++i) d.rho0[i] += amplitude * w[i];

    d.u0 = SpectralVector(grid);
    d.v0 = SpectralVector(grid);
    for (int c = 0; c < grid.dim; ++c) {
        d.u0[c] = amplitude * random_trig_field(grid, seed * 2654435761u + 17 + c, mode_cutoff);
        d.v0[c] = amplitude * random_trig_field(grid, seed * 2654435761u + 101 + c, mode_cutoff);
    }
    if (grid.dim == 2) d.v0 = leray_project(d.v0);
    return d;
}

namespace {

// Kinetic-side free energy of the initial data (no Coulomb term): the
// |xi|^2/2 part plus, for sigma > 0, the entropy part with the Maxwellian
// normalization constant absorbed.
double kinetic_energy_side(const DistributionFunction& f) {
    const int d = f.grid.dim, nv = f.vbox.n;
    std::vector<double> nodes(nv);
    for (int i = 0; i < nv; ++i) nodes[i] = f.vbox.node(i);
    double acc = 0.0;
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        const double* col = f.column(x);
        if (d == 1) {
            for (int i = 0; i < nv; ++i) {
                double fv = col[i];
                acc += 0.5 * nodes[i] * nodes[i] * fv;
                if (f.sigma > 0.0 && fv > 0.0) acc += f.sigma * fv * std::log(fv);
            }
        } else {
            std::size_t idx = 0;
            for (int i = 0; i < nv; ++i)
                for (int j = 0; j < nv; ++j, ++idx) {
                    double fv = col[idx];
                    acc += 0.5 * (nodes[i] * nodes[i] + nodes[j] * nodes[j]) * fv;
                    if (f.sigma > 0.0 && fv > 0.0) acc += f.sigma * fv * std::log(fv);
                }
        }
    }
    acc *= f.cell_volume();
    if (f.sigma > 0.0)
        acc += 0.5 * d * f.sigma * std::log(2.0 * M_PI * f.sigma) * f.mass();
    return acc;
}

} // namespace

PreparedFamily well_prepared_family(const LimitData& limit, double sigma, double epsilon,
                                    const VelocityBox& vbox, bool misprepare,
                                    std::uint64_t misprepare_seed) {
    if (sigma < 0.0) throw ConfigError("well_prepared_family: sigma must be >= 0");
    if (epsilon <= 0.0) throw ConfigError("well_prepared_family: epsilon must be > 0");
    const TorusGrid& grid = limit.rho0.grid;
    const int d = grid.dim;

    SpectralVector u_eps = limit.u0;
    if (misprepare) {
        double root_eps = std::sqrt(epsilon);
        for (int c = 0; c < d; ++c) {
            auto w = random_trig_field(grid, misprepare_seed + 7 * c, 3);
            for (std::size_t i = 0; i < w.size(); ++i) u_eps[c][i] += root_eps * w[i];
        }
    }

    PreparedFamily fam;
    if (sigma > 0.0) {
        fam.f0 = maxwellian(limit.rho0, u_eps, sigma, vbox, epsilon);
    } else {
        double umax = field_max_abs(u_eps);
        if (vbox.vmax - umax < 6.8 * std::sqrt(epsilon))
            throw ConfigError("well_prepared_family: velocity box too small for variance eps");
        fam.f0 = maxwellian(limit.rho0, u_eps, epsilon, vbox, epsilon);
        fam.f0.sigma = 0.0;  // Gaussian of variance eps, but a sigma=0 run
    }
    fam.v0_eps = limit.v0;

    // (H1): initial total energies, mean-normalized spatial measure.
    const double vol = grid.volume();
    double kin_side = kinetic_energy_side(fam.f0) + 0.5 * inner(fam.v0_eps, fam.v0_eps);
    double macro_side = 0.5 * inner(limit.v0, limit.v0);
    {
        const std::size_t sz = limit.rho0.size();
        double acc = 0.0;
        for (std::size_t i = 0; i < sz; ++i) {
            double usq = 0.0;
            for (int c = 0; c < d; ++c) usq += limit.u0[c][i] * limit.u0[c][i];
            acc += 0.5 * limit.rho0[i] * usq;
            if (sigma > 0.0 && limit.rho0[i] > 0.0)
                acc += sigma * limit.rho0[i] * std::log(limit.rho0[i]);
        }
        macro_side += acc * grid.cell_volume();
    }
    fam.h1_gap = (kin_side - macro_side) / vol;

    // (H2): initial modulated energies.
    auto m = compute_moments(fam.f0);
    auto u_meas = regularized_velocity(m, 1e-8);
    double udiff = 0.0, vdiff = 0.0, hterm = 0.0;
    for (std::size_t i = 0; i < m.rho.size(); ++i) {
        for (int c = 0; c < d; ++c) {
            double du = u_meas[c][i] - limit.u0[c][i];
            double dv = fam.v0_eps[c][i] - limit.v0[c][i];
            udiff += m.rho[i] * du * du;
            vdiff += dv * dv;
        }
        if (sigma > 0.0 && m.rho[i] > 0.0 && limit.rho0[i] > 0.0)
            hterm += relative_entropy_scalar(m.rho[i], limit.rho0[i]);
    }
    double w = grid.cell_volume();
    SpectralScalar diff = m.rho - limit.rho0;
    double dm = mean(diff);
    for (auto& x : diff.values) x -= dm;
    double coul = std::pow(h_minus1_norm(diff), 2);
    fam.h2_gap = (udiff * w + vdiff * w + sigma * hterm * w + coul) / vol;
    return fam;
}

} // namespace epns
