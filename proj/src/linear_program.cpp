#include "evgap/linear_program.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace evgap {

LpSolution maximize(const LinearProgram& lp) {
    const std::size_t n = lp.objective.size();
    const std::size_t m = lp.constraints.size();
    if (lp.bounds.size() != m) throw std::invalid_argument("LP: bounds/constraints size mismatch");
    for (const auto& row : lp.constraints) {
        if (row.size() != n) throw std::invalid_argument("LP: ragged constraint matrix");
    }
    for (double b : lp.bounds) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("LP: bounds must be finite and >= 0");
    }

    // columns: n structural, m slack, 1 rhs
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        double scale = 0.0;
        for (double a : lp.constraints[i]) scale = std::max(scale, std::abs(a));
        if (scale == 0.0) scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = lp.constraints[i][j] / scale;
        t[i][n + i] = 1.0;
        t[i][cols - 1] = lp.bounds[i] / scale;
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -lp.objective[j];

    constexpr double eps = 1e-12;
    LpSolution sol;
    const std::size_t max_pivots = 50 * (n + m + 1);
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (t[m][j] < -eps) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > eps) {
                const double r = t[i][cols - 1] / t[i][enter];
                const double tie = 1e-15 * std::max(1.0, std::abs(best));
                if (leave == m || r < best - tie || (std::abs(r - best) <= tie && basis[i] < basis[leave])) {
                    best = r;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }

        const double p = t[leave][enter];
        for (double& v : t[leave]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
        if (++sol.pivots > max_pivots) throw std::runtime_error("LP: pivot limit exceeded");
    }

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) sol.x[basis[i]] = std::max(0.0, t[i][cols - 1]);
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
    return sol;
}

}  // namespace evgap
