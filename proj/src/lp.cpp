#include "epns/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace epns {

LpResult solve_lp(const std::vector<double>& c, const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& b, int max_iter) {
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(c.size());
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("solve_lp: requires b >= 0");

    // tableau: m rows x (n + m + 1) columns, slack basis start
    const int cols = n + m + 1;
    std::vector<double> t(static_cast<std::size_t>(m) * cols, 0.0);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i) * cols + j] = rows[i][j];
        t[static_cast<std::size_t>(i) * cols + n + i] = 1.0;
        t[static_cast<std::size_t>(i) * cols + cols - 1] = b[i];
        basis[i] = n + i;
    }
    std::vector<double> z(cols, 0.0);  // reduced costs row (for max problem)
    for (int j = 0; j < n; ++j) z[j] = -c[j];

    const double eps = 1e-11;
    for (int iter = 0; iter < max_iter; ++iter) {
        // Bland: smallest index with negative reduced cost
        int pivot_col = -1;
        for (int j = 0; j < cols - 1; ++j)
            if (z[j] < -eps) {
                pivot_col = j;
                break;
            }
        if (pivot_col < 0) {
            LpResult r;
            r.optimal = true;
            r.value = z[cols - 1];
            r.x.assign(n, 0.0);
            for (int i = 0; i < m; ++i)
                if (basis[i] < n) r.x[basis[i]] = t[static_cast<std::size_t>(i) * cols + cols - 1];
            return r;
        }
        // ratio test, Bland tie-break on basis index
        int pivot_row = -1;
        double best = 0.0;
        for (int i = 0; i < m; ++i) {
            double a = t[static_cast<std::size_t>(i) * cols + pivot_col];
            if (a > eps) {
                double ratio = t[static_cast<std::size_t>(i) * cols + cols - 1] / a;
                if (pivot_row < 0 || ratio < best - eps ||
                    (ratio < best + eps && basis[i] < basis[pivot_row])) {
                    pivot_row = i;
                    best = ratio;
                }
            }
        }
        if (pivot_row < 0) return LpResult{};  // unbounded

        // pivot
        double* prow = &t[static_cast<std::size_t>(pivot_row) * cols];
        double pa = prow[pivot_col];
        for (int j = 0; j < cols; ++j) prow[j] /= pa;
        for (int i = 0; i < m; ++i) {
            if (i == pivot_row) continue;
            double* row = &t[static_cast<std::size_t>(i) * cols];
            double a = row[pivot_col];
            if (a != 0.0)
                for (int j = 0; j < cols; ++j) row[j] -= a * prow[j];
        }
        double zc = z[pivot_col];
        if (zc != 0.0)
            for (int j = 0; j < cols; ++j) z[j] -= zc * prow[j];
        basis[pivot_row] = pivot_col;
    }
    return LpResult{};  // iteration cap
}

} // namespace epns
