#include "epns/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace epns {

namespace {

constexpr double kFloorRatio = 1e-30;  // 1/f mask threshold, relative to max f

double max_value(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

SpectralScalar mean_zero(const SpectralScalar& f) {
    SpectralScalar r = f;
    double m = mean(f);
    for (auto& v : r.values) v -= m;
    return r;
}

} // namespace

double relative_entropy_scalar(double x, double y) {
    if (x <= 0.0 || y <= 0.0) throw ContractViolation("relative_entropy_scalar: inputs must be positive");
    // Bregman form y*chi(x/y), chi(z) = z log z - z + 1 >= 0.
    double z = x / y;
    return y * (z * std::log(z) - z + 1.0);
}

double free_energy(const DistributionFunction& f, const SpectralVector& v) {
    const int d = f.grid.dim, nv = f.vbox.n;
    std::vector<double> nodes(nv);
    for (int i = 0; i < nv; ++i) nodes[i] = f.vbox.node(i);

    double acc = 0.0;
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        const double* col = f.column(x);
        if (d == 1) {
            for (int i = 0; i < nv; ++i) {
                double fv = col[i];
                double e = 0.5 * nodes[i] * nodes[i];
                acc += e * fv;
                if (f.sigma > 0.0 && fv > 0.0) acc += f.sigma * fv * std::log(fv);
            }
        } else {
            std::size_t idx = 0;
            for (int i = 0; i < nv; ++i)
                for (int j = 0; j < nv; ++j, ++idx) {
                    double fv = col[idx];
                    double e = 0.5 * (nodes[i] * nodes[i] + nodes[j] * nodes[j]);
                    acc += e * fv;
                    if (f.sigma > 0.0 && fv > 0.0) acc += f.sigma * fv * std::log(fv);
                }
        }
    }
    acc *= f.cell_volume();

    auto m = compute_moments(f);
    SpectralScalar pot = convolve_kernel(mean_zero(m.rho), KernelKind::exact);
    acc += 0.5 * std::pow(l2_norm(gradient(pot)), 2);
    acc += 0.5 * inner(v, v);
    return acc;
}

namespace {

// Per-column sum of f * (sigma dlogf - (u - xi))^2 along one velocity
// dimension, with centered differences of log f and floor masking.
double d1_line_term(const double* line, int n, int stride, double dxi, double u_c,
                    const VelocityBox& box, double sigma, double floor,
                    std::vector<double>& logf) {
    logf.resize(n);
    for (int i = 0; i < n; ++i) {
        double v = line[static_cast<std::size_t>(i) * stride];
        logf[i] = (v > floor) ? std::log(v) : 0.0;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double fv = line[static_cast<std::size_t>(i) * stride];
        if (fv <= floor) continue;
        int im = std::max(0, i - 1), ip = std::min(n - 1, i + 1);
        double fm = line[static_cast<std::size_t>(im) * stride];
        double fp = line[static_cast<std::size_t>(ip) * stride];
        if (fm <= floor || fp <= floor || ip == im) continue;  // masked neighbor
        double dlog = (logf[ip] - logf[im]) / ((ip - im) * dxi);
        double r = sigma * dlog - (u_c - box.node(i));
        acc += fv * r * r;
    }
    return acc;
}

} // namespace

double dissipation_d1(const DistributionFunction& f, const SpectralVector& u_loc) {
    const int d = f.grid.dim, nv = f.vbox.n;
    const double dxi = f.vbox.dxi();
    const double floor = kFloorRatio * max_value(f.values);

    std::vector<double> logf;
    double acc = 0.0;
    if (f.sigma == 0.0) {
        // degenerate alignment form: int |u - xi|^2 f
        std::vector<double> nodes(nv);
        for (int i = 0; i < nv; ++i) nodes[i] = f.vbox.node(i);
        for (std::size_t x = 0; x < f.xsize(); ++x) {
            const double* col = f.column(x);
            if (d == 1) {
                for (int i = 0; i < nv; ++i) {
                    double r = u_loc[0][x] - nodes[i];
                    acc += col[i] * r * r;
                }
            } else {
                std::size_t idx = 0;
                for (int i = 0; i < nv; ++i)
                    for (int j = 0; j < nv; ++j, ++idx) {
                        double r0 = u_loc[0][x] - nodes[i];
                        double r1 = u_loc[1][x] - nodes[j];
                        acc += col[idx] * (r0 * r0 + r1 * r1);
                    }
            }
        }
        return acc * f.cell_volume();
    }

    for (std::size_t x = 0; x < f.xsize(); ++x) {
        const double* col = f.column(x);
        if (d == 1) {
            acc += d1_line_term(col, nv, 1, dxi, u_loc[0][x], f.vbox, f.sigma, floor, logf);
        } else {
            for (int j = 0; j < nv; ++j)  // lines along dim 0
                acc += d1_line_term(col + j, nv, nv, dxi, u_loc[0][x], f.vbox, f.sigma, floor,
                                    logf);
            for (int i = 0; i < nv; ++i)  // lines along dim 1
                acc += d1_line_term(col + static_cast<std::size_t>(i) * nv, nv, 1, dxi,
                                    u_loc[1][x], f.vbox, f.sigma, floor, logf);
        }
    }
    return acc * f.cell_volume();
}

double dissipation_d2(const DistributionFunction& f, const SpectralVector& v) {
    const int d = f.grid.dim, nv = f.vbox.n;
    std::vector<double> nodes(nv);
    for (int i = 0; i < nv; ++i) nodes[i] = f.vbox.node(i);

    double acc = 0.0;
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        const double* col = f.column(x);
        if (d == 1) {
            for (int i = 0; i < nv; ++i) {
                double r = v[0][x] - nodes[i];
                acc += col[i] * r * r;
            }
        } else {
            std::size_t idx = 0;
            for (int i = 0; i < nv; ++i)
                for (int j = 0; j < nv; ++j, ++idx) {
                    double r0 = v[0][x] - nodes[i];
                    double r1 = v[1][x] - nodes[j];
                    acc += col[idx] * (r0 * r0 + r1 * r1);
                }
        }
    }
    acc *= f.cell_volume();
    for (int c = 0; c < d; ++c) {
        auto gc = gradient(v[c]);
        acc += inner(gc, gc);
    }
    return acc;
}

double entropy_inequality_residual(const std::vector<DiagnosticsRecord>& records, double epsilon,
                                   double mass_unnormalized, double sigma, int dim) {
    if (records.size() < 3) throw ContractViolation("entropy_inequality_residual: need >= 3 records");
    double worst = -1e300;
    double int_d1 = 0.0, int_d2 = 0.0;
    const double f0 = records.front().free_energy;
    for (std::size_t i = 1; i < records.size(); ++i) {
        double dt = records[i].t - records[i - 1].t;
        int_d1 += 0.5 * dt * (records[i].d1 + records[i - 1].d1);
        int_d2 += 0.5 * dt * (records[i].d2 + records[i - 1].d2);
        double lhs = records[i].free_energy + int_d1 / epsilon + int_d2;
        double rhs = f0 + sigma * dim * records[i].t * mass_unnormalized;
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

ModulatedEnergy modulated_energy(const KineticMoments& m, const SpectralVector& v_eps,
                                 const MacroState& limit, double delta_floor) {
    if (m.rho.grid != limit.density_var.grid)
        throw ContractViolation("modulated_energy: grid mismatch");
    ModulatedEnergy r;
    SpectralScalar rho_lim = limit.rho();
    SpectralVector u_eps = regularized_velocity(m, delta_floor);

    const double w = m.rho.grid.cell_volume();
    double udiff = 0.0, vdiff = 0.0, hterm = 0.0;
    for (std::size_t i = 0; i < m.rho.size(); ++i) {
        double du2 = 0.0, dv2 = 0.0;
        for (int c = 0; c < m.rho.grid.dim; ++c) {
            double du = u_eps[c][i] - limit.u[c][i];
            double dv = v_eps[c][i] - limit.v[c][i];
            du2 += du * du;
            dv2 += dv * dv;
        }
        udiff += m.rho[i] * du2;
        vdiff += dv2;
        if (limit.sigma > 0.0 && rho_lim[i] > 0.0)
            hterm += (m.rho[i] > 0.0) ? relative_entropy_scalar(m.rho[i], rho_lim[i])
                                      : rho_lim[i];  // chi(0) = 1
    }
    r.l2_u_diff = udiff * w;
    r.l2_v_diff = vdiff * w;

    SpectralScalar diff = m.rho - rho_lim;
    double dm = mean(diff);
    for (auto& v : diff.values) v -= dm;  // quadrature-level mean removal
    double hm1 = h_minus1_norm(diff);
    r.coulomb_mod = hm1 * hm1;
    r.mod_energy = r.l2_u_diff + r.l2_v_diff + limit.sigma * hterm * w;
    return r;
}

double rel_entropy_to_maxwellian(const DistributionFunction& f, const DistributionFunction& M) {
    if (f.values.size() != M.values.size())
        throw ContractViolation("rel_entropy_to_maxwellian: shape mismatch");
    const double floor = kFloorRatio * max_value(f.values);
    double acc = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double fv = f.values[i], mv = M.values[i];
        l1 += std::abs(fv - mv);
        if (mv <= 0.0) continue;
        if (fv <= floor) {
            acc += mv;  // chi(0) = 1
            continue;
        }
        double z = fv / mv;
        acc += mv * (z * std::log(z) - z + 1.0);
    }
    acc *= f.cell_volume();
    l1 *= f.cell_volume();
    // Csiszar-Kullback control, checked with the mean-normalized measure.
    double vol = f.grid.volume();
    if ((l1 / vol) * (l1 / vol) > 4.0 * acc / vol + 1e-9)
        throw ContractViolation("rel_entropy_to_maxwellian: L1 control violated");
    return acc;
}

double stress_defect(const KineticMoments& m, const MacroState& limit, double sigma) {
    SpectralScalar rho_lim = limit.rho();
    const int d = m.rho.grid.dim;
    double acc = 0.0;
    for (std::size_t x = 0; x < m.rho.size(); ++x) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double target = rho_lim[x] * limit.u[i][x] * limit.u[j][x];
                if (i == j) target += sigma * rho_lim[x];
                acc += std::abs(m.stress_at(i, j)[x] - target);
            }
    }
    return acc * m.rho.grid.cell_volume();
}

} // namespace epns
