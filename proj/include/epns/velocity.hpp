#pragma once

#include <cmath>
#include <cstddef>

#include "epns/errors.hpp"

namespace epns {

// Uniform velocity grid on [-vmax, vmax)^dim, cell-centered nodes.
struct VelocityBox {
    int dim = 2;
    int n = 0;
    double vmax = 0.0;

    VelocityBox() = default;
    VelocityBox(int dim_, int n_, double vmax_) : dim(dim_), n(n_), vmax(vmax_) {
        if (dim < 1 || dim > 2) throw ConfigError("VelocityBox: dim must be 1 or 2");
        if (n < 4 || n % 2 != 0) throw ConfigError("VelocityBox: n must be even and >= 4");
        if (vmax <= 0.0) throw ConfigError("VelocityBox: vmax must be positive");
    }

    double dxi() const { return 2.0 * vmax / n; }
    double node(int i) const { return -vmax + (i + 0.5) * dxi(); }
    double edge(int i) const { return -vmax + i * dxi(); }
    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }
    double cell_volume() const { return std::pow(dxi(), dim); }

    bool operator==(const VelocityBox& o) const {
        return dim == o.dim && n == o.n && vmax == o.vmax;
    }
};

} // namespace epns
