#pragma once

#include <vector>

#include "epns/distribution.hpp"
#include "epns/macro.hpp"

namespace epns {

// One time slice of the tracked functionals (vpns runs).
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;  // normalized: mean density
    double free_energy = 0.0;
    double d1 = 0.0;  // sigma=0 runs carry the degenerate alignment form
    double d2 = 0.0;
    double entropy_residual = 0.0;
    double mod_energy = 0.0;
    double coulomb_mod = 0.0;
    double l2_u_diff = 0.0;
    double l2_v_diff = 0.0;
    double rel_entropy_maxwellian = 0.0;
    double hminus1_rho = 0.0;
    double stress_defect = 0.0;
};

// Scalar relative entropy H(x|y) = x log x - y log y - (1+log y)(x-y).
double relative_entropy_scalar(double x, double y);

// F(f,v) = int (|xi|^2/2 + sigma log f) f + (1/2)|grad K*(rho-1)|^2_{L2}
//        + (1/2)|v|^2_{L2}.   (0 log 0 = 0.)
double free_energy(const DistributionFunction& f, const SpectralVector& v);

// D1 = int (1/f) |sigma grad_xi f - (u-xi) f|^2, assembled as f |...|^2 with
// the velocity log-derivative taken by centered differences (exact on
// Maxwellians). For sigma = 0 this degenerates to int |u-xi|^2 f.
double dissipation_d1(const DistributionFunction& f, const SpectralVector& u_loc);

// D2 = int |v-xi|^2 f + int |grad v|^2.
double dissipation_d2(const DistributionFunction& f, const SpectralVector& v);

// Max over t of  [F(t) + (1/eps) int_0^t D1 + int_0^t D2] - [F(0) + sigma d t M]
// with trapezoid time quadrature at the record cadence; the entropy
// inequality predicts this stays <= 0 up to discretization.
double entropy_inequality_residual(const std::vector<DiagnosticsRecord>& records, double epsilon,
                                   double mass_unnormalized, double sigma, int dim);

struct ModulatedEnergy {
    double mod_energy = 0.0;   // rho|u_eps-u|^2 + |v_eps-v|^2 + sigma H(rho_eps|rho)
    double coulomb_mod = 0.0;  // |grad K * (rho_eps - rho)|^2
    double l2_u_diff = 0.0;
    double l2_v_diff = 0.0;
};

ModulatedEnergy modulated_energy(const KineticMoments& m, const SpectralVector& v_eps,
                                 const MacroState& limit, double delta_floor = 1e-8);

// int int [ f log(f/M) - (f - M) ], assembled from the pointwise-nonnegative
// Bregman integrand. Checks the L1 control |f-M|_1^2 <= 4 (2pi)^d H on every
// call (throws ContractViolation if violated).
double rel_entropy_to_maxwellian(const DistributionFunction& f, const DistributionFunction& M);

// L1 norm (entrywise) of the matrix defect  int f xi (x) xi - (rho u (x) u + sigma rho I).
double stress_defect(const KineticMoments& m, const MacroState& limit, double sigma);

} // namespace epns
