#include "epns/distribution.hpp"

#include <cmath>

namespace epns {

KineticMoments compute_moments(const DistributionFunction& f) {
    const int d = f.grid.dim;
    const int nv = f.vbox.n;
    const double w = f.vbox.cell_volume();

    KineticMoments m;
    m.rho = SpectralScalar(f.grid);
    m.momentum = SpectralVector(f.grid);
    m.stress.assign(d * d, SpectralScalar(f.grid));

    std::vector<double> nodes(nv);
    for (int i = 0; i < nv; ++i) nodes[i] = f.vbox.node(i);

    double energy = 0.0;
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        const double* col = f.column(x);
        double rho = 0.0, mom[2] = {0.0, 0.0}, st[4] = {0.0, 0.0, 0.0, 0.0}, en = 0.0;
        if (d == 1) {
            for (int i = 0; i < nv; ++i) {
                double v = col[i], xi = nodes[i];
                rho += v;
                mom[0] += xi * v;
                st[0] += xi * xi * v;
                en += 0.5 * xi * xi * v;
            }
        } else {
            std::size_t idx = 0;
            for (int i = 0; i < nv; ++i) {
                double xi0 = nodes[i];
                for (int j = 0; j < nv; ++j, ++idx) {
                    double v = col[idx], xi1 = nodes[j];
                    rho += v;
                    mom[0] += xi0 * v;
                    mom[1] += xi1 * v;
                    st[0] += xi0 * xi0 * v;
                    st[1] += xi0 * xi1 * v;
                    st[3] += xi1 * xi1 * v;
                    en += 0.5 * (xi0 * xi0 + xi1 * xi1) * v;
                }
            }
            st[2] = st[1];
        }
        m.rho[x] = rho * w;
        for (int c = 0; c < d; ++c) m.momentum[c][x] = mom[c] * w;
        for (int c = 0; c < d * d; ++c) m.stress[c][x] = st[c] * w;
        energy += en;
    }
    m.energy = energy * f.cell_volume();
    return m;
}

SpectralVector regularized_velocity(const KineticMoments& m, double delta) {
    if (delta <= 0.0) throw ContractViolation("regularized_velocity: delta must be > 0");
    SpectralVector u(m.rho.grid);
    for (int c = 0; c < m.rho.grid.dim; ++c)
        for (std::size_t i = 0; i < m.rho.size(); ++i)
            u[c][i] = m.momentum[c][i] / (m.rho[i] + delta);
    return u;
}

DistributionFunction maxwellian(const SpectralScalar& rho, const SpectralVector& u, double sigma,
                                const VelocityBox& vbox, double epsilon) {
    if (sigma <= 0.0) throw ConfigError("maxwellian: sigma must be positive");
    if (rho.grid.dim != vbox.dim) throw ConfigError("maxwellian: dim mismatch");
    double umax = field_max_abs(u);
    if (vbox.vmax - umax < 6.8 * std::sqrt(sigma))
        throw ConfigError("maxwellian: velocity box too small for the leakage budget");

    const int d = vbox.dim;
    const int nv = vbox.n;
    DistributionFunction f(rho.grid, vbox, sigma, epsilon);
    const double norm = std::pow(2.0 * M_PI * sigma, -0.5 * d);
    const double inv2s = 1.0 / (2.0 * sigma);

    std::vector<double> nodes(nv);
    for (int i = 0; i < nv; ++i) nodes[i] = vbox.node(i);

    std::vector<double> g0(nv), g1(nv);
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        double r = rho[x];
        for (int i = 0; i < nv; ++i) {
            double z = nodes[i] - u[0][x];
            g0[i] = std::exp(-z * z * inv2s);
        }
        double* col = f.column(x);
        if (d == 1) {
            for (int i = 0; i < nv; ++i) col[i] = r * norm * g0[i];
        } else {
            for (int i = 0; i < nv; ++i) {
                double z = nodes[i] - u[1][x];
                g1[i] = std::exp(-z * z * inv2s);
            }
            std::size_t idx = 0;
            for (int i = 0; i < nv; ++i)
                for (int j = 0; j < nv; ++j, ++idx) col[idx] = r * norm * g0[i] * g1[j];
        }
    }
    f.seal_ledger();
    return f;
}

} // namespace epns
