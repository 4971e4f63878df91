#include "epns/bl_distance.hpp"

#include <cmath>

#include "epns/grid.hpp"
#include "epns/lp.hpp"

namespace epns {

double torus_distance(const std::array<double, 2>& a, const std::array<double, 2>& b, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        double diff = std::fmod(std::abs(a[d] - b[d]), kTwoPi);
        diff = std::min(diff, kTwoPi - diff);
        s += diff * diff;
    }
    return std::sqrt(s);
}

double bl_distance_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim != nu.dim) throw ContractViolation("bl_distance_lp: dimension mismatch");

    // Merge supports; the test function lives on the union.
    std::vector<std::array<double, 2>> pts = mu.points;
    std::vector<double> sig(mu.weights);
    for (std::size_t i = 0; i < nu.points.size(); ++i) {
        pts.push_back(nu.points[i]);
        sig.push_back(-nu.weights[i]);
    }
    // coalesce coincident points
    std::vector<std::array<double, 2>> upts;
    std::vector<double> usig;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool merged = false;
        for (std::size_t j = 0; j < upts.size(); ++j)
            if (torus_distance(pts[i], upts[j], mu.dim) < 1e-14) {
                usig[j] += sig[i];
                merged = true;
                break;
            }
        if (!merged) {
            upts.push_back(pts[i]);
            usig.push_back(sig[i]);
        }
    }
    const int n = static_cast<int>(upts.size());
    if (n > 64) throw ConfigError("bl_distance_lp: support too large (oracle scale is <= 64 points)");
    if (n == 0) return 0.0;

    // Variables y_i = phi_i + 1 in [0,2]; maximize sum sig_i y_i - sum sig_i.
    // Constraints: y_i <= 2 and y_i - y_j <= d_ij for distinct pairs with
    // d_ij < 2 (wider pairs are implied by the box bound).
    std::vector<double> c(usig);
    std::vector<std::vector<double>> rows;
    std::vector<double> b;
    for (int i = 0; i < n; ++i) {
        std::vector<double> r(n, 0.0);
        r[i] = 1.0;
        rows.push_back(std::move(r));
        b.push_back(2.0);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = torus_distance(upts[i], upts[j], mu.dim);
            if (d >= 2.0) continue;
            std::vector<double> r(n, 0.0);
            r[i] = 1.0;
            r[j] = -1.0;
            rows.push_back(std::move(r));
            b.push_back(d);
        }

    auto res = solve_lp(c, rows, b);
    if (!res.optimal) throw std::runtime_error("bl_distance_lp: simplex failed");
    double offset = 0.0;
    for (double s : usig) offset += s;
    return res.value - offset;
}

} // namespace epns
