#pragma once

#include "epns/distribution.hpp"
#include "epns/spectral_ops.hpp"

namespace epns {

// Per-step accounting handed back by vpns_step.
struct StepReport {
    double min_f = 0.0;       // most negative value seen before clamping
    double outflow = 0.0;     // unnormalized mass lost through the box this step
    double clamped = 0.0;     // unnormalized mass added by clamping this step
    double mass_drift = 0.0;  // |mass - (reference - outflow + clamped)|, unnormalized
    int fluid_substeps = 0;   // filled by the coupled driver
};

// Free-streaming x-advection, exact per velocity slice (Fourier phase shift).
// Conserves mass and the L2 norm to roundoff; may leave Gibbs-level negatives.
void transport_step(DistributionFunction& f, double dt);

// Pure velocity shift f(x, xi) -> f(x, xi - F(x) dt) by a monotone conservative
// remap per column line; zero inflow at the box boundary, outflow ledgered.
// Throws StepSizeError when dt * max|F| >= vmax / 4.
void force_step(DistributionFunction& f, const SpectralVector& force, double dt);

// Exact relaxation of velocities toward center(x) at unit rate (the drag part
// of the force stage): OU step with zero diffusion.
void drag_relax_step(DistributionFunction& f, const SpectralVector& center, double dt);

// Exact Ornstein-Uhlenbeck / local-alignment step at rate 1/epsilon toward
// u_loc(x) with diffusion sigma/epsilon, per spatial column. Unconditionally
// stable in epsilon; mass is conserved (sigma>0 branches renormalize per
// column, the pure-contraction branch is conservative by construction).
void stiff_ou_step(DistributionFunction& f, const SpectralVector& u_loc, double dt);

// Strang composition: half stiff, half force (self-consistent Coulomb force,
// then drag toward v_fluid), full transport, mirrored force half, half stiff.
// Moments and the potential are refreshed between stages. Returns the final
// moments through `out_moments` when non-null.
StepReport vpns_step(DistributionFunction& f, const SpectralVector& v_fluid, double dt,
                     double delta_floor = 1e-8, KineticMoments* out_moments = nullptr);

} // namespace epns
