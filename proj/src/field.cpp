#include "epns/field.hpp"

#include <algorithm>
#include <cmath>

namespace epns {

namespace {
void check_same(const TorusGrid& a, const TorusGrid& b) {
    if (a != b) throw ContractViolation("field op: grid mismatch");
}
} // namespace

SpectralScalar operator+(const SpectralScalar& a, const SpectralScalar& b) {
    check_same(a.grid, b.grid);
    SpectralScalar r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

SpectralScalar operator-(const SpectralScalar& a, const SpectralScalar& b) {
    check_same(a.grid, b.grid);
    SpectralScalar r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

SpectralScalar operator*(double s, const SpectralScalar& a) {
    SpectralScalar r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * a[i];
    return r;
}

SpectralVector operator+(const SpectralVector& a, const SpectralVector& b) {
    SpectralVector r(a.grid);
    for (int c = 0; c < a.dim(); ++c) r[c] = a[c] + b[c];
    return r;
}

SpectralVector operator-(const SpectralVector& a, const SpectralVector& b) {
    SpectralVector r(a.grid);
    for (int c = 0; c < a.dim(); ++c) r[c] = a[c] - b[c];
    return r;
}

SpectralVector operator*(double s, const SpectralVector& a) {
    SpectralVector r(a.grid);
    for (int c = 0; c < a.dim(); ++c) r[c] = s * a[c];
    return r;
}

double field_min(const SpectralScalar& f) {
    double m = f.values.empty() ? 0.0 : f[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

double field_max_abs(const SpectralScalar& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double field_max_abs(const SpectralVector& v) {
    double m = 0.0;
    for (int c = 0; c < v.dim(); ++c) m = std::max(m, field_max_abs(v[c]));
    return m;
}

double integral(const SpectralScalar& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.cell_volume();
}

double mean(const SpectralScalar& f) { return integral(f) / f.grid.volume(); }

double inner(const SpectralScalar& a, const SpectralScalar& b) {
    check_same(a.grid, b.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid.cell_volume();
}

double inner(const SpectralVector& a, const SpectralVector& b) {
    double s = 0.0;
    for (int c = 0; c < a.dim(); ++c) s += inner(a[c], b[c]);
    return s;
}

double l2_norm(const SpectralScalar& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double l2_norm(const SpectralVector& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

} // namespace epns
