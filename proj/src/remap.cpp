#include "epns/remap.hpp"

#include <algorithm>
#include <cmath>

namespace epns {

namespace {

// Hermite cubic on [0,1] with values (f0,f1) and end slopes (d0,d1).
inline double hermite(double f0, double f1, double d0, double d1, double t) {
    double t2 = t * t, t3 = t2 * t;
    return f0 * (2 * t3 - 3 * t2 + 1) + d0 * (t3 - 2 * t2 + t) + f1 * (-2 * t3 + 3 * t2) +
           d1 * (t3 - t2);
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

} // namespace

double pchip_remap_line(const double* f, int n, double dxi, double xi_min,
                        const double* pre, double* out, LineWorkspace& ws) {
    ws.cum.resize(n + 1);
    ws.slope.resize(n + 1);
    ws.tmp.resize(n);

    // Cumulative mass; secants of the primitive are the (clipped) cell values.
    ws.cum[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        ws.tmp[i] = std::max(f[i], 0.0);
        ws.cum[i + 1] = ws.cum[i] + ws.tmp[i] * dxi;
    }
    const double total = ws.cum[n];

    // Primitive slopes: fourth-order edge estimate from the cell values,
    // clipped into [0, 3 min(adjacent values)] which keeps the cubic on each
    // cell monotone (so the remapped values stay nonnegative).
    ws.slope[0] = ws.tmp[0];
    ws.slope[n] = ws.tmp[n - 1];
    for (int i = 1; i < n; ++i) {
        double a = ws.tmp[i - 1], b = ws.tmp[i];
        double est;
        if (i >= 2 && i <= n - 2)
            est = (7.0 * (a + b) - (ws.tmp[i - 2] + ws.tmp[i + 1])) / 12.0;
        else
            est = 0.5 * (a + b);
        ws.slope[i] = std::clamp(est, 0.0, 3.0 * std::min(a, b));
    }

    auto primitive = [&](double z) -> double {
        double rel = (z - xi_min) / dxi;
        if (rel <= 0.0) return 0.0;
        if (rel >= n) return total;
        int cell = std::min(n - 1, static_cast<int>(rel));
        double t = rel - cell;
        return hermite(ws.cum[cell], ws.cum[cell + 1], ws.slope[cell] * dxi,
                       ws.slope[cell + 1] * dxi, t);
    };

    double left = primitive(pre[0]);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        double right = primitive(pre[i + 1]);
        out[i] = (right - left) / dxi;
        mass += right - left;
        left = right;
    }
    return mass;
}

void pchip_shift_periodic(const double* f, int n, double dx, double delta, double* out,
                          LineWorkspace& ws) {
    ws.cum.resize(n + 1);
    ws.slope.resize(n + 1);
    ws.tmp.resize(n);

    ws.cum[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        ws.tmp[i] = std::max(f[i], 0.0);
        ws.cum[i + 1] = ws.cum[i] + ws.tmp[i] * dx;
    }
    const double total = ws.cum[n];

    // periodic fourth-order edge slopes, clipped to the monotone box
    auto cell = [&](int i) { return ws.tmp[((i % n) + n) % n]; };
    for (int i = 0; i <= n; ++i) {
        double a = cell(i - 1), b = cell(i);
        double est = (7.0 * (a + b) - (cell(i - 2) + cell(i + 1))) / 12.0;
        ws.slope[i] = std::clamp(est, 0.0, 3.0 * std::min(a, b));
    }

    auto primitive = [&](double z) -> double {
        double rel = z / dx;
        double wind = std::floor(rel / n);
        rel -= wind * n;
        int c = std::min(n - 1, static_cast<int>(rel));
        double t = rel - c;
        return wind * total +
               hermite(ws.cum[c], ws.cum[c + 1], ws.slope[c] * dx, ws.slope[c + 1] * dx, t);
    };

    double left = primitive(0.0 - delta);
    for (int i = 0; i < n; ++i) {
        double right = primitive((i + 1) * dx - delta);
        out[i] = (right - left) / dx;
        left = right;
    }
}

void shift_preimage(const VelocityBox& box, double delta, double* pre) {
    for (int i = 0; i <= box.n; ++i) pre[i] = box.edge(i) - delta;
}

void contract_preimage(const VelocityBox& box, double center, double a, double* pre) {
    // Guard the deep-contraction limit against overflow; clamping in the
    // primitive makes any sufficiently large preimage equivalent.
    const double inv_a = (a > 1e-300) ? 1.0 / a : 1e300;
    const double big = 1e12 * box.vmax;
    for (int i = 0; i <= box.n; ++i) {
        double z = (box.edge(i) - center) * inv_a;
        z = std::clamp(z, -big, big);
        pre[i] = center + z;
    }
}

double remap_line_mean_fixed(const double* f, int n, double dxi, double xi_min,
                             const double* base_pre, double target_mean, double* out,
                             LineWorkspace& ws) {
    double mass = pchip_remap_line(f, n, dxi, xi_min, base_pre, out, ws);
    if (mass <= 0.0) return mass;

    // The mean is linear in the cell masses: bounded transfers between
    // adjacent cells pin it exactly, preserving mass and positivity.
    const double lo = xi_min + 0.5 * dxi, hi = xi_min + (n - 0.5) * dxi;
    const double target = std::clamp(target_mean, lo, hi);
    const double m0 = mass / dxi;  // sum of cell values
    for (int round = 0; round < 8; ++round) {
        double m1 = 0.0;
        for (int i = 0; i < n; ++i) m1 += (xi_min + (i + 0.5) * dxi) * out[i];
        double err = target - m1 / m0;
        if (std::abs(err) < 1e-14 * (1.0 + std::abs(target))) break;

        // heaviest donor that has an in-bounds receiver in the err direction
        const int dir = err > 0.0 ? 1 : -1;
        const int first = dir > 0 ? 0 : 1, last = dir > 0 ? n - 2 : n - 1;
        int donor = -1;
        for (int i = first; i <= last; ++i)
            if (donor < 0 || out[i] > out[donor]) donor = i;
        if (donor < 0 || out[donor] <= 0.0) break;
        double give = std::min(std::abs(err) * m0 / dxi, out[donor]);
        out[donor] -= give;
        out[donor + dir] += give;
    }
    return mass;
}

void spectral_ou_line(const double* f, const VelocityBox& box, double center,
                      double a, double var, double* out, LineWorkspace& ws) {
    const int n = box.n;
    const double vmax = box.vmax;
    ws.modes.resize(n);
    ws.phase.resize(n / 2);
    ws.tmp.resize(n);

    for (int i = 0; i < n; ++i) ws.modes[i] = f[i];
    fft::line_forward(n, ws.modes.data());

    // Mode m of the node interpolant carries frequency eta_m = pi*m/vmax and a
    // half-cell phase from the cell-centered nodes.
    const double eta1 = M_PI / vmax;
    for (int m = 1; m < n / 2; ++m)
        ws.phase[m] = ws.modes[m] * std::polar(1.0, -M_PI * m / n);
    const double c0 = ws.modes[0].real();

    // Push-forward: evaluate the interpolant at the contraction preimages.
    // Points that fall outside the box read zero (truncation semantics);
    // evaluating the periodic extension there would alias the far tail in.
    const double inv_a = 1.0 / a;
    for (int i = 0; i < n; ++i) {
        double zeta = center + (box.node(i) - center) * inv_a;
        if (zeta < -vmax || zeta >= vmax) {
            ws.tmp[i] = 0.0;
            continue;
        }
        const cplx w = std::polar(1.0, eta1 * (zeta + vmax));
        cplx z = w;
        double acc = c0;
        for (int m = 1; m < n / 2; ++m) {
            acc += 2.0 * (ws.phase[m] * z).real();
            z *= w;
        }
        ws.tmp[i] = acc * inv_a;
    }

    // Gaussian blur as a grid-frequency multiplier (wrapped-Gaussian kernel).
    if (var > 0.0) {
        for (int i = 0; i < n; ++i) ws.modes[i] = ws.tmp[i];
        fft::line_forward(n, ws.modes.data());
        for (int m = 0; m < n; ++m) {
            double eta = eta1 * std::abs(wavenumber(m, n));
            ws.modes[m] *= std::exp(-0.5 * var * eta * eta);
        }
        fft::line_backward(n, ws.modes.data());
        for (int i = 0; i < n; ++i) out[i] = ws.modes[i].real();
    } else {
        std::copy(ws.tmp.begin(), ws.tmp.end(), out);
    }
}

void mehler_dense_matrix(const VelocityBox& box, double center, double a, double var,
                         LineWorkspace& ws) {
    const int n = box.n;
    const double s = std::sqrt(std::max(var, 0.0));
    ws.kernel.assign(static_cast<std::size_t>(n) * n, 0.0);

    if (s >= 1.5 * box.dxi()) {
        // Resolved transition density: sample at output nodes.
        const double norm = 1.0 / (s * std::sqrt(2.0 * M_PI));
        for (int j = 0; j < n; ++j) {
            double cj = center + a * (box.node(j) - center);
            for (int i = 0; i < n; ++i) {
                double z = (box.node(i) - cj) / s;
                ws.kernel[static_cast<std::size_t>(i) * n + j] = norm * std::exp(-0.5 * z * z);
            }
        }
    } else if (s > 0.0) {
        // Under-resolved blur: integrate the density over output cells.
        for (int j = 0; j < n; ++j) {
            double cj = center + a * (box.node(j) - center);
            double lo = std_normal_cdf((box.edge(0) - cj) / s);
            for (int i = 0; i < n; ++i) {
                double hi = std_normal_cdf((box.edge(i + 1) - cj) / s);
                ws.kernel[static_cast<std::size_t>(i) * n + j] = (hi - lo) / box.dxi();
                lo = hi;
            }
        }
    } else {
        // Pure concentration: each source cell lands in the cell containing its image.
        for (int j = 0; j < n; ++j) {
            double cj = center + a * (box.node(j) - center);
            int i = static_cast<int>(std::floor((cj + box.vmax) / box.dxi()));
            if (i >= 0 && i < n) ws.kernel[static_cast<std::size_t>(i) * n + j] = 1.0 / box.dxi();
        }
    }
}

void mehler_dense_apply(const double* f, const VelocityBox& box, const double* kernel,
                        double* out) {
    const int n = box.n;
    const double dxi = box.dxi();
    for (int i = 0; i < n; ++i) {
        const double* row = kernel + static_cast<std::size_t>(i) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += row[j] * f[j];
        out[i] = acc * dxi;
    }
}

} // namespace epns
