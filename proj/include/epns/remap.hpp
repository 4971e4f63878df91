#pragma once

#include <vector>

#include "epns/fft.hpp"
#include "epns/velocity.hpp"

namespace epns {

// Reusable scratch buffers for per-line velocity-space operations.
struct LineWorkspace {
    std::vector<double> cum;     // cumulative mass at edges
    std::vector<double> slope;   // limited primitive slopes
    std::vector<cplx> modes;     // line DFT
    std::vector<cplx> phase;     // per-mode prefactors
    std::vector<double> kernel;  // dense Mehler matrix (n x n)
    std::vector<double> tmp;
    std::vector<double> pre2;  // corrected preimage for moment-fixed remaps
};

// Conservative monotone remap of one line of n cell values with spacing dxi
// and left edge xi_min. Output cell i receives the reconstructed mass over
// [pre[i], pre[i+1]] (clamped to the box, zero inflow from outside).
// The reconstruction is a monotonicity-limited cubic Hermite interpolant of
// the cumulative mass. Returns the total mass after the remap (times dxi).
double pchip_remap_line(const double* f, int n, double dxi, double xi_min,
                        const double* pre, double* out, LineWorkspace& ws);

// Conservative monotone shift remap on a PERIODIC line of n cells with
// spacing dx (used by the x-transport of under-resolved monokinetic states).
// Mass is conserved exactly; values stay nonnegative.
void pchip_shift_periodic(const double* f, int n, double dx, double delta, double* out,
                          LineWorkspace& ws);

// Preimage edge builders for the two flow maps used by the solver.
// Shift by delta: pre[i] = edge(i) - delta.
void shift_preimage(const VelocityBox& box, double delta, double* pre);
// Contraction toward `center` by factor a in (0,1]: pre[i] = center + (edge(i)-center)/a.
void contract_preimage(const VelocityBox& box, double center, double a, double* pre);

// Conservative remap with an exact first moment: applies the base preimage,
// then iterates a small additive shift until the remapped line's mean hits
// `target_mean` (clamped into the box). Used by the sigma = 0 velocity
// operations, where the distribution is a sub-cell spike and the plain
// monotone reconstruction would snap its mean to the nearest node.
// Returns the mass after the remap.
double remap_line_mean_fixed(const double* f, int n, double dxi, double xi_min,
                             const double* base_pre, double target_mean, double* out,
                             LineWorkspace& ws);

// Exact Ornstein-Uhlenbeck step of one line through the trigonometric
// interpolant: push-forward xi -> center + a*(xi-center) followed by Gaussian
// blur of variance var (both exact on the interpolant, evaluated at nodes).
// Valid for moderate contraction (a not far below 1). Does not exactly
// conserve mass; the caller renormalizes per column. f and out may alias.
void spectral_ou_line(const double* f, const VelocityBox& box, double center,
                      double a, double var, double* out, LineWorkspace& ws);

// Dense Mehler kernel for strong contraction: out_i = dxi * sum_j K(i,j) f_j
// with K columns the exact OU transition density, integrated over output
// cells when the blur width is under-resolved. Column mass deficits are the
// box outflow. Build once per (x, dimension), apply to every line.
void mehler_dense_matrix(const VelocityBox& box, double center, double a, double var,
                         LineWorkspace& ws);
void mehler_dense_apply(const double* f, const VelocityBox& box, const double* kernel,
                        double* out);

} // namespace epns
