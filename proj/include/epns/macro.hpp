#pragma once

#include <utility>

#include "epns/spectral_ops.hpp"

namespace epns {

enum class MacroVariant { isothermal, pressureless };

// Limit-system state in symmetrized variables: g = log(rho) for the
// isothermal case, h = rho - 1 for the pressureless one.
struct MacroState {
    MacroVariant variant = MacroVariant::isothermal;
    SpectralScalar density_var;  // g or h
    SpectralVector u;
    SpectralVector v;  // divergence-free
    double sigma = 1.0;

    MacroState() = default;
    MacroState(MacroVariant var, const TorusGrid& g, double sigma_)
        : variant(var), density_var(g), u(g), v(g), sigma(sigma_) {
        if (var == MacroVariant::isothermal && sigma <= 0.0)
            throw ConfigError("MacroState: isothermal variant needs sigma > 0");
        if (var == MacroVariant::pressureless && sigma != 0.0)
            throw ConfigError("MacroState: pressureless variant needs sigma == 0");
    }

    SpectralScalar rho() const {
        SpectralScalar r(density_var.grid);
        if (variant == MacroVariant::isothermal)
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::exp(density_var[i]);
        else
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 + density_var[i];
        return r;
    }
};

// Tendency of the full system, same shape as the state (viscous term included,
// v-tendency Leray-projected, products dealiased).
MacroState epns_rhs(const MacroState& state);

// One classical RK4 step with exact integrating-factor diffusion on v, then a
// mass projection renormalizing mean(rho) to 1. Returns the logged drift.
// Throws StepSizeError on CFL/acoustic guard violations and SolverAbort when
// the pressureless density loses positivity (t_now is carried in the abort).
double epns_step(MacroState& state, double dt, double t_now = 0.0);

struct EnergyReport {
    double kinetic = 0.0;           // (1/2) int rho |u|^2
    double coulomb = 0.0;           // (1/2) int |grad K * (rho-1)|^2
    double fluid = 0.0;             // (1/2) int |v|^2
    double entropy = 0.0;           // sigma int rho log rho
    double dissipation_v = 0.0;     // int |grad v|^2
    double dissipation_drag = 0.0;  // int rho |u-v|^2
    double total() const { return kinetic + coulomb + fluid + entropy; }
};

EnergyReport energy_report(const MacroState& state);

// Both sides of the identity  int Hess(K*h) : grad u dx = - int h div(u) dx,
// computed by independent routes.
std::pair<double, double> coulomb_ibp_check(const SpectralScalar& h, const SpectralVector& u);

// Squared Sobolev tracker: isothermal |g|_{H^s}^2 + |u|_{H^s}^2 + |v|_{H^s}^2;
// pressureless |h|_{H^{s-1}}^2 + |u|_{H^s}^2 + |v|_{H^s}^2.
double norm_tracker(const MacroState& state, double s);

} // namespace epns
