#pragma once

#include <cmath>
#include <cstddef>

#include "epns/errors.hpp"

namespace epns {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform periodic grid on [0, 2pi)^dim with the same number of points per
// dimension. Nodes are x_j = 2*pi*j/n.
struct TorusGrid {
    int dim = 2;
    int n = 0;

    TorusGrid() = default;
    TorusGrid(int dim_, int n_) : dim(dim_), n(n_) {
        if (dim < 1 || dim > 2) throw ConfigError("TorusGrid: dim must be 1 or 2");
        if (n < 8 || n % 2 != 0) throw ConfigError("TorusGrid: n must be even and >= 8");
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }
    double dx() const { return kTwoPi / n; }
    double node(int j) const { return kTwoPi * j / n; }
    // Cell volume of the trapezoid/midpoint quadrature on the torus.
    double cell_volume() const { return std::pow(dx(), dim); }
    double volume() const { return std::pow(kTwoPi, dim); }

    bool operator==(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

// Signed wavenumber for FFT bin `idx` of an n-point transform.
inline int wavenumber(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

} // namespace epns
