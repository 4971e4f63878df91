#pragma once

#include <cstdint>

#include "epns/distribution.hpp"
#include "epns/macro.hpp"

namespace epns {

struct LimitData {
    SpectralScalar rho0;
    SpectralVector u0;
    SpectralVector v0;  // divergence-free
};

// Random low-mode limit-system data, deterministic in the seed:
// rho0 = 1 + amplitude * w (sup|w| <= 1, mean 0), u0 and v0 amplitude-scaled
// low-mode fields, v0 Leray-projected. Requires amplitude < 0.5.
LimitData smooth_profiles(const TorusGrid& grid, std::uint64_t seed, double amplitude,
                          int mode_cutoff);

// A single random low-mode scalar (exposed for tests).
SpectralScalar random_trig_field(const TorusGrid& grid, std::uint64_t seed, int mode_cutoff);

struct PreparedFamily {
    DistributionFunction f0;
    SpectralVector v0_eps;
    // measured certificates (mean-normalized spatial measure)
    double h1_gap = 0.0;
    double h2_gap = 0.0;
};

// Well-prepared kinetic data for a given limit state:
//   sigma > 0: f0 = local Maxwellian of (rho0, u0), v0_eps = v0;
//   sigma = 0: f0 = rho0 x Gaussian(u0, eps I), v0_eps = v0.
// The returned gaps are the measured discrepancies of the initial total
// energies (Maxwellian normalization constant absorbed) and of the initial
// modulated energies. `misprepare` adds a sqrt(eps)-size velocity offset to
// probe sharpness.
PreparedFamily well_prepared_family(const LimitData& limit, double sigma, double epsilon,
                                    const VelocityBox& vbox, bool misprepare = false,
                                    std::uint64_t misprepare_seed = 1);

} // namespace epns
