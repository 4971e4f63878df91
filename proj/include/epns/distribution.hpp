#pragma once

#include <vector>

#include "epns/field.hpp"
#include "epns/velocity.hpp"

namespace epns {

// Running mass bookkeeping for a kinetic solve: the box outflow and the
// clamped negative mass explain any departure of the total mass from its
// initial value.
struct MassLedger {
    double reference = 0.0;  // mass at construction (unnormalized)
    double outflow = 0.0;    // lost through |xi| = V
    double clamped = 0.0;    // added by clamping negatives to zero
};

// Phase-space density on the tensor grid torus x velocity box.
// Layout: values[x * vbox.size() + xi], xi row-major over velocity dims.
struct DistributionFunction {
    TorusGrid grid;
    VelocityBox vbox;
    double sigma = 1.0;    // diffusion coefficient, >= 0
    double epsilon = 1.0;  // relaxation parameter, > 0
    std::vector<double> values;
    MassLedger ledger;

    DistributionFunction() = default;
    DistributionFunction(const TorusGrid& g, const VelocityBox& vb, double sigma_, double eps_)
        : grid(g), vbox(vb), sigma(sigma_), epsilon(eps_),
          values(g.size() * vb.size(), 0.0) {
        if (g.dim != vb.dim) throw ConfigError("DistributionFunction: dim mismatch");
        if (sigma < 0.0) throw ConfigError("DistributionFunction: sigma must be >= 0");
        if (epsilon <= 0.0) throw ConfigError("DistributionFunction: epsilon must be > 0");
    }

    std::size_t xsize() const { return grid.size(); }
    std::size_t vsize() const { return vbox.size(); }
    double* column(std::size_t x) { return values.data() + x * vsize(); }
    const double* column(std::size_t x) const { return values.data() + x * vsize(); }
    double cell_volume() const { return grid.cell_volume() * vbox.cell_volume(); }

    double mass() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * cell_volume();
    }
    // Mass against the mean-normalized spatial measure; 1 for mean-one density.
    double mass_normalized() const { return mass() / grid.volume(); }

    void seal_ledger() { ledger = MassLedger{mass(), 0.0, 0.0}; }
};

// Velocity moments on the spatial grid.
struct KineticMoments {
    SpectralScalar rho;
    SpectralVector momentum;
    std::vector<SpectralScalar> stress;  // d*d, row-major
    double energy = 0.0;                 // (1/2) integral of |xi|^2 f

    const SpectralScalar& stress_at(int i, int j) const { return stress[i * rho.grid.dim + j]; }
};

// Midpoint-rule quadrature over the velocity box.
KineticMoments compute_moments(const DistributionFunction& f);

// u_delta = momentum / (rho + delta), pointwise.
SpectralVector regularized_velocity(const KineticMoments& m, double delta);

// Local Maxwellian rho(x) (2 pi sigma)^{-d/2} exp(-|u(x)-xi|^2 / (2 sigma)).
// Requires sigma > 0 and a box wide enough that the Gaussian tail mass outside
// it stays below the 1e-10 leakage budget.
DistributionFunction maxwellian(const SpectralScalar& rho, const SpectralVector& u, double sigma,
                                const VelocityBox& vbox, double epsilon = 1.0);

} // namespace epns
