#pragma once

#include "deleg/rational.hpp"

#include <vector>

namespace deleg {

/// maximize c.x  subject to  A x <= b, x >= 0.
struct LinearProgram {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::vector<Rat> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status;
    Rat objective;        // defined when Optimal
    std::vector<Rat> x;   // defined when Optimal
};

/// Dense two-phase primal simplex over exact rationals with Bland's rule,
/// so degenerate ties cannot cycle and feasibility at the boundary is exact.
/// Intended for small systems (tens of rows); no sparsity, no scaling.
LpSolution solveLp(const LinearProgram& lp);

}  // namespace deleg
