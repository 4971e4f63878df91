#pragma once

#include "epns/distribution.hpp"
#include "epns/spectral_ops.hpp"

namespace epns {

// Incompressible fluid phase on the 2D torus.
struct FluidState {
    SpectralVector v;  // divergence-free
    double nu = 1.0;

    FluidState() = default;
    explicit FluidState(const TorusGrid& g, double nu_ = 1.0) : v(g), nu(nu_) {}
};

// Momentum exchange with the kinetic phase: rho u - rho v, pointwise.
SpectralVector drag_source(const KineticMoments& m, const SpectralVector& v);

// One step: exact integrating-factor diffusion, Williamson low-storage RK3
// for the dealiased advection and the (frozen) source, Leray projection of
// every stage tendency. Enforces the advective CFL dt * max|v| * n/(2pi) <= 0.5.
void ns_step(FluidState& state, const SpectralVector& source, double dt);

} // namespace epns
