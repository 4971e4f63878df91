#include "epns/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "epns/remap.hpp"

namespace epns {

namespace {

// Contraction factor below which the stretched-frequency evaluation of the
// Mehler step is replaced by the dense transition kernel.
constexpr double kSpectralBranchMinA = 0.5;

// Apply a 1D line operation along each velocity dimension of one column.
// Lines along dim 0 have stride nv (d=2); lines along the last dim are
// contiguous.
template <typename LineFn>
void for_each_line(double* col, int dim, int nv, int line_dim, std::vector<double>& scratch,
                   LineFn&& fn) {
    if (dim == 1) {
        fn(col);
        return;
    }
    if (line_dim == 1) {
        for (int i = 0; i < nv; ++i) fn(col + static_cast<std::size_t>(i) * nv);
    } else {
        scratch.resize(nv);
        for (int j = 0; j < nv; ++j) {
            for (int i = 0; i < nv; ++i) scratch[i] = col[static_cast<std::size_t>(i) * nv + j];
            fn(scratch.data());
            for (int i = 0; i < nv; ++i) col[static_cast<std::size_t>(i) * nv + j] = scratch[i];
        }
    }
}

double column_sum(const double* col, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += col[i];
    return s;
}

// Zero out negatives; returns the (positive) mass that was added, in raw units.
double clamp_column(double* col, std::size_t n, double* min_seen) {
    double added = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (col[i] < 0.0) {
            *min_seen = std::min(*min_seen, col[i]);
            added -= col[i];
            col[i] = 0.0;
        }
    }
    return added;
}

} // namespace

namespace {

// Conservative monotone x-advection, used for sigma = 0 runs where the
// concentrated distribution makes the per-velocity slices too sharp in x for
// trigonometric interpolation (Gibbs negatives would feed the clamp ledger).
void transport_step_monotone(DistributionFunction& f, double dt) {
    const int d = f.grid.dim;
    const int n = f.grid.n;
    const int nv = f.vbox.n;
    const std::size_t xs = f.xsize();
    const std::size_t vs = f.vsize();
    const double dx = f.grid.dx();

    LineWorkspace ws;
    std::vector<double> slice(xs), line(n), out(n);
    for (std::size_t xi = 0; xi < vs; ++xi) {
        double xi0 = f.vbox.node(d == 1 ? static_cast<int>(xi) : static_cast<int>(xi) / nv);
        for (std::size_t x = 0; x < xs; ++x) slice[x] = f.values[x * vs + xi];
        if (d == 1) {
            pchip_shift_periodic(slice.data(), n, dx, xi0 * dt, out.data(), ws);
            for (int x = 0; x < n; ++x) f.values[static_cast<std::size_t>(x) * vs + xi] = out[x];
            continue;
        }
        double xi1 = f.vbox.node(static_cast<int>(xi) % nv);
        // pass along x0 (stride n), then along x1 (contiguous)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) line[i] = slice[static_cast<std::size_t>(i) * n + j];
            pchip_shift_periodic(line.data(), n, dx, xi0 * dt, out.data(), ws);
            for (int i = 0; i < n; ++i) slice[static_cast<std::size_t>(i) * n + j] = out[i];
        }
        for (int i = 0; i < n; ++i) {
            double* row = slice.data() + static_cast<std::size_t>(i) * n;
            pchip_shift_periodic(row, n, dx, xi1 * dt, out.data(), ws);
            std::copy(out.begin(), out.end(), row);
        }
        for (std::size_t x = 0; x < xs; ++x) f.values[x * vs + xi] = slice[x];
    }
}

} // namespace

void transport_step(DistributionFunction& f, double dt) {
    if (dt == 0.0) return;
    if (f.sigma == 0.0) {
        transport_step_monotone(f, dt);
        return;
    }
    const int d = f.grid.dim;
    const int n = f.grid.n;
    const int nv = f.vbox.n;
    const std::size_t xs = f.xsize();
    const std::size_t vs = f.vsize();

    // Phase tables e^{-i k xi dt} per dimension, with the inverse-FFT
    // normalization folded into the first one.
    std::vector<std::vector<cplx>> phase(d);
    const double scale = 1.0 / static_cast<double>(xs);
    for (int dd = 0; dd < d; ++dd) {
        phase[dd].resize(static_cast<std::size_t>(n) * nv);
        for (int ki = 0; ki < n; ++ki) {
            double k = wavenumber(ki, n);
            for (int vi = 0; vi < nv; ++vi)
                phase[dd][static_cast<std::size_t>(ki) * nv + vi] =
                    std::polar(dd == 0 ? scale : 1.0, -k * f.vbox.node(vi) * dt);
        }
    }

    std::vector<cplx> slice(xs);
    std::vector<int> vidx(d);
    for (std::size_t xi = 0; xi < vs; ++xi) {
        if (d == 1) {
            vidx[0] = static_cast<int>(xi);
        } else {
            vidx[0] = static_cast<int>(xi) / nv;
            vidx[1] = static_cast<int>(xi) % nv;
        }
        for (std::size_t x = 0; x < xs; ++x) slice[x] = f.values[x * vs + xi];
        fft::transform(d, n, slice.data(), -1);
        if (d == 1) {
            for (int ki = 0; ki < n; ++ki)
                slice[ki] *= phase[0][static_cast<std::size_t>(ki) * nv + vidx[0]];
        } else {
            std::size_t idx = 0;
            for (int k0 = 0; k0 < n; ++k0) {
                cplx p0 = phase[0][static_cast<std::size_t>(k0) * nv + vidx[0]];
                for (int k1 = 0; k1 < n; ++k1, ++idx)
                    slice[idx] *= p0 * phase[1][static_cast<std::size_t>(k1) * nv + vidx[1]];
            }
        }
        fft::transform(d, n, slice.data(), +1);
        for (std::size_t x = 0; x < xs; ++x) f.values[x * vs + xi] = slice[x].real();
    }
}

void force_step(DistributionFunction& f, const SpectralVector& force, double dt) {
    if (dt == 0.0) return;
    const int d = f.grid.dim;
    const int nv = f.vbox.n;
    const double guard = f.vbox.vmax / 4.0;
    if (std::abs(dt) * field_max_abs(force) >= guard)
        throw StepSizeError("force_step: displacement guard dt*max|F| < V/4 violated");

    LineWorkspace ws;
    std::vector<double> pre(nv + 1), out(nv), scratch;
    double lost_raw = 0.0;
    const bool mean_fixed = (f.sigma == 0.0);
    for (std::size_t x = 0; x < f.xsize(); ++x) {
        double* col = f.column(x);
        double before = column_sum(col, f.vsize());
        for (int dd = 0; dd < d; ++dd) {
            double delta = force[dd][x] * dt;
            if (delta == 0.0) continue;
            shift_preimage(f.vbox, delta, pre.data());
            for_each_line(col, d, nv, dd, scratch, [&](double* line) {
                if (mean_fixed) {
                    double m0 = 0.0, m1 = 0.0;
                    for (int i = 0; i < nv; ++i) {
                        m0 += line[i];
                        m1 += f.vbox.node(i) * line[i];
                    }
                    if (m0 <= 0.0) return;
                    remap_line_mean_fixed(line, nv, f.vbox.dxi(), -f.vbox.vmax, pre.data(),
                                          m1 / m0 + delta, out.data(), ws);
                } else {
                    pchip_remap_line(line, nv, f.vbox.dxi(), -f.vbox.vmax, pre.data(), out.data(),
                                     ws);
                }
                std::copy(out.begin(), out.end(), line);
            });
        }
        lost_raw += before - column_sum(col, f.vsize());
    }
    f.ledger.outflow += lost_raw * f.cell_volume();
}

namespace {

// Batched exact Mehler step for the moderate-contraction regime: the mode
// transform D, the stretched-frequency node evaluation G, and the circulant
// blur B are fixed matrices; only a unit phase rotation depends on the
// column's relaxation center. All inner loops are real GEMMs over the n_v
// lines of one column.
struct OuBatch {
    int n, half, nlines;
    double a, inv_a, vmax, dxi, var;
    std::vector<double> Dre, Dim;  // half x n
    std::vector<double> Gre, Gim;  // n x half
    std::vector<double> B;         // n x n (empty when var == 0)
    // workspaces
    std::vector<double> F, Mre, Mim, Sre, Sim, Q, O;

    OuBatch(const VelocityBox& box, double a_, double var_)
        : n(box.n), half(box.n / 2), nlines(box.n), a(a_), inv_a(1.0 / a_),
          vmax(box.vmax), dxi(box.dxi()), var(var_) {
        Dre.resize(static_cast<std::size_t>(half) * n);
        Dim.resize(static_cast<std::size_t>(half) * n);
        for (int m = 0; m < half; ++m)
            for (int j = 0; j < n; ++j) {
                double ang = -kTwoPi * m * (j + 0.5) / n;  // -eta_m (xi_j + V)
                Dre[static_cast<std::size_t>(m) * n + j] = std::cos(ang) / n;
                Dim[static_cast<std::size_t>(m) * n + j] = std::sin(ang) / n;
            }
        const double eta1 = M_PI / vmax;
        Gre.resize(static_cast<std::size_t>(n) * half);
        Gim.resize(static_cast<std::size_t>(n) * half);
        for (int i = 0; i < n; ++i) {
            double base = eta1 * inv_a * box.node(i);
            for (int m = 0; m < half; ++m) {
                Gre[static_cast<std::size_t>(i) * half + m] = std::cos(base * m);
                Gim[static_cast<std::size_t>(i) * half + m] = std::sin(base * m);
            }
        }
        if (var > 0.0) {
            B.assign(static_cast<std::size_t>(n) * n, 0.0);
            std::vector<double> damp(n);
            for (int m = 0; m < n; ++m) {
                double eta = eta1 * std::abs(wavenumber(m, n));
                damp[m] = std::exp(-0.5 * var * eta * eta);
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < n; ++m)
                        acc += damp[m] * std::cos(kTwoPi * m * (i - j) / n);
                    B[static_cast<std::size_t>(i) * n + j] = acc / n;
                }
        }
        std::size_t sz = static_cast<std::size_t>(n) * nlines;
        F.resize(sz);
        Q.resize(sz);
        O.resize(sz);
        Mre.resize(static_cast<std::size_t>(half) * nlines);
        Mim.resize(static_cast<std::size_t>(half) * nlines);
        Sre.resize(static_cast<std::size_t>(half) * nlines);
        Sim.resize(static_cast<std::size_t>(half) * nlines);
    }

    // C = A * B, (rows x mid) * (mid x cols), row-major, accumulate fresh.
    static void gemm(const double* A, const double* Bm, double* C, int rows, int mid, int cols) {
        for (int r = 0; r < rows; ++r) {
            double* crow = C + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c) crow[c] = 0.0;
            const double* arow = A + static_cast<std::size_t>(r) * mid;
            for (int k = 0; k < mid; ++k) {
                double av = arow[k];
                if (av == 0.0) continue;
                const double* brow = Bm + static_cast<std::size_t>(k) * cols;
                for (int c = 0; c < cols; ++c) crow[c] += av * brow[c];
            }
        }
    }

    // Apply to one column along `line_dim`; lines are the n_v parallel 1D
    // sections. The column matrix col is n x n (row index = velocity dim 0).
    void apply(double* col, int dim, int line_dim, double center) {
        const int L = (dim == 1) ? 1 : nlines;
        // gather lines into F[n][L]: element i of line l
        if (dim == 1) {
            for (int i = 0; i < n; ++i) F[i] = col[i];
        } else if (line_dim == 0) {
            std::copy(col, col + static_cast<std::size_t>(n) * n, F.begin());
        } else {
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) F[static_cast<std::size_t>(i) * n + l] =
                    col[static_cast<std::size_t>(l) * n + i];
        }

        gemm(Dre.data(), F.data(), Mre.data(), half, n, L);
        gemm(Dim.data(), F.data(), Mim.data(), half, n, L);

        // rotate mode m by exp(i m delta), delta = eta_1 (V + c(1 - 1/a));
        // halve m = 0 so the real-part pairing gives c0 + 2 sum_{m>0}.
        const double delta = (M_PI / vmax) * (vmax + center * (1.0 - inv_a));
        double cr = 1.0, ci = 0.0;
        const double dc = std::cos(delta), ds = std::sin(delta);
        for (int m = 0; m < half; ++m) {
            double* sre = Sre.data() + static_cast<std::size_t>(m) * L;
            double* sim = Sim.data() + static_cast<std::size_t>(m) * L;
            const double* mre = Mre.data() + static_cast<std::size_t>(m) * L;
            const double* mim = Mim.data() + static_cast<std::size_t>(m) * L;
            double wr = (m == 0) ? 0.5 : cr, wi = (m == 0) ? 0.0 : ci;
            for (int l = 0; l < L; ++l) {
                sre[l] = wr * mre[l] - wi * mim[l];
                sim[l] = wr * mim[l] + wi * mre[l];
            }
            double nr = cr * dc - ci * ds;
            ci = cr * ds + ci * dc;
            cr = nr;
        }

        // Q = (2/a) (Gre * Sre - Gim * Sim), then mask out-of-box preimages
        gemm(Gre.data(), Sre.data(), Q.data(), n, half, L);
        gemm(Gim.data(), Sim.data(), O.data(), n, half, L);
        const double scale = 2.0 * inv_a;
        for (int i = 0; i < n; ++i) {
            double zeta = center + (node(i) - center) * inv_a;
            double* qrow = Q.data() + static_cast<std::size_t>(i) * L;
            const double* orow = O.data() + static_cast<std::size_t>(i) * L;
            if (zeta < -vmax || zeta >= vmax) {
                for (int l = 0; l < L; ++l) qrow[l] = 0.0;
            } else {
                for (int l = 0; l < L; ++l) qrow[l] = scale * (qrow[l] - orow[l]);
            }
        }

        const double* result = Q.data();
        if (var > 0.0) {
            gemm(B.data(), Q.data(), O.data(), n, n, L);
            result = O.data();
        }

        // scatter back
        if (dim == 1) {
            for (int i = 0; i < n; ++i) col[i] = result[i];
        } else if (line_dim == 0) {
            std::copy(result, result + static_cast<std::size_t>(n) * n, col);
        } else {
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    col[static_cast<std::size_t>(l) * n + i] =
                        result[static_cast<std::size_t>(i) * n + l];
        }
    }

    double node(int i) const { return -vmax + (i + 0.5) * dxi; }
};

// Shared implementation of the exact OU step (rate, center field, diffusion).
// Mass per column is preserved exactly: the sigma>0 branches renormalize, the
// pure contraction is conservative. `rate_dt` is (elapsed time) * (rate).
void ou_relax(DistributionFunction& f, const SpectralVector& center, double rate_dt,
              double diffusion_var_total, bool force_contract = false) {
    const int d = f.grid.dim;
    const int nv = f.vbox.n;
    const double a = std::exp(-rate_dt);
    const double var = diffusion_var_total;  // per-component blur variance

    LineWorkspace ws;
    std::vector<double> pre(nv + 1), out(nv), scratch;
    double lost_raw = 0.0;

    const bool contract_only = force_contract || (var == 0.0 && f.sigma == 0.0);
    const bool spectral = !contract_only && a >= kSpectralBranchMinA;
    OuBatch* batch = nullptr;
    static thread_local std::unique_ptr<OuBatch> batch_cache;
    if (spectral) {
        if (!batch_cache || batch_cache->n != nv || batch_cache->a != a ||
            batch_cache->var != var || batch_cache->vmax != f.vbox.vmax)
            batch_cache = std::make_unique<OuBatch>(f.vbox, a, var);
        batch = batch_cache.get();
    }

    for (std::size_t x = 0; x < f.xsize(); ++x) {
        double* col = f.column(x);
        double before = column_sum(col, f.vsize());
        if (before <= 0.0) continue;
        for (int dd = 0; dd < d; ++dd) {
            double c = center[dd][x];
            if (contract_only) {
                // sub-cell spikes: pin the line mean to the exact relaxation law
                contract_preimage(f.vbox, c, a, pre.data());
                for_each_line(col, d, nv, dd, scratch, [&](double* line) {
                    double m0 = 0.0, m1 = 0.0;
                    for (int i = 0; i < nv; ++i) {
                        m0 += line[i];
                        m1 += f.vbox.node(i) * line[i];
                    }
                    if (m0 <= 0.0) return;
                    double target = c + a * (m1 / m0 - c);
                    remap_line_mean_fixed(line, nv, f.vbox.dxi(), -f.vbox.vmax, pre.data(),
                                          target, out.data(), ws);
                    std::copy(out.begin(), out.end(), line);
                });
            } else if (spectral) {
                batch->apply(col, d, dd, c);
            } else {
                mehler_dense_matrix(f.vbox, c, a, var, ws);
                for_each_line(col, d, nv, dd, scratch, [&](double* line) {
                    mehler_dense_apply(line, f.vbox, ws.kernel.data(), out.data());
                    std::copy(out.begin(), out.end(), line);
                });
            }
        }
        if (spectral) {
            // Clamp evaluation dust, then restore the exact column mass.
            double dummy = 0.0;
            clamp_column(col, f.vsize(), &dummy);
            double after = column_sum(col, f.vsize());
            if (after > 0.0) {
                double r = before / after;
                for (std::size_t i = 0; i < f.vsize(); ++i) col[i] *= r;
            }
        } else {
            double after = column_sum(col, f.vsize());
            lost_raw += std::max(0.0, before - after);
        }
    }
    if (lost_raw > 0.0) f.ledger.outflow += lost_raw * f.cell_volume();
}

} // namespace

void drag_relax_step(DistributionFunction& f, const SpectralVector& center, double dt) {
    if (dt == 0.0) return;
    ou_relax(f, center, dt, 0.0);
}

void stiff_ou_step(DistributionFunction& f, const SpectralVector& u_loc, double dt) {
    if (dt <= 0.0) {
        if (dt == 0.0) return;
        throw ContractViolation("stiff_ou_step: dt must be >= 0");
    }
    const double rate_dt = dt / f.epsilon;
    const double a = std::exp(-rate_dt);
    const double var = f.sigma * (1.0 - a * a);
    ou_relax(f, u_loc, rate_dt, var);
}

StepReport vpns_step(DistributionFunction& f, const SpectralVector& v_fluid, double dt,
                     double delta_floor, KineticMoments* out_moments) {
    StepReport rep;
    if (f.grid.dim == 2) {
        double dv = field_max_abs(divergence(v_fluid));
        if (dv > 1e-6 * (1.0 + field_max_abs(v_fluid)))
            throw ContractViolation("vpns_step: v_fluid must be divergence-free");
    }
    const double out0 = f.ledger.outflow;
    const double cl0 = f.ledger.clamped;

    auto clamp_all = [&](const char* /*stage*/) {
        double added = 0.0;
        for (std::size_t x = 0; x < f.xsize(); ++x)
            added += clamp_column(f.column(x), f.vsize(), &rep.min_f);
        f.ledger.clamped += added * f.cell_volume();
    };

    KineticMoments m = compute_moments(f);
    SpectralVector u_loc = regularized_velocity(m, delta_floor);
    stiff_ou_step(f, u_loc, 0.5 * dt);

    SpectralScalar U = solve_poisson(m.rho);
    force_step(f, -1.0 * gradient(U), 0.5 * dt);
    drag_relax_step(f, v_fluid, 0.5 * dt);

    transport_step(f, dt);
    clamp_all("transport");

    m = compute_moments(f);
    U = solve_poisson(m.rho);
    drag_relax_step(f, v_fluid, 0.5 * dt);
    force_step(f, -1.0 * gradient(U), 0.5 * dt);

    m = compute_moments(f);
    u_loc = regularized_velocity(m, delta_floor);
    stiff_ou_step(f, u_loc, 0.5 * dt);

    m = compute_moments(f);
    if (out_moments) *out_moments = m;

    rep.outflow = f.ledger.outflow - out0;
    rep.clamped = f.ledger.clamped - cl0;
    rep.mass_drift =
        std::abs(f.mass() - (f.ledger.reference - f.ledger.outflow + f.ledger.clamped));
    return rep;
}

} // namespace epns
