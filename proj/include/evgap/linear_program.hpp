#pragma once

#include <cstddef>
#include <vector>

namespace evgap {

// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
struct LinearProgram {
    std::vector<double> objective;                 // c, length n
    std::vector<std::vector<double>> constraints;  // A, m rows of length n
    std::vector<double> bounds;                    // b, length m
};

enum class LpStatus { Optimal, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    std::vector<double> x;
    double objective = 0.0;
    std::size_t pivots = 0;
};

// Dense tableau simplex with Bland's rule; the origin is the starting vertex.
LpSolution maximize(const LinearProgram& lp);

}  // namespace evgap
