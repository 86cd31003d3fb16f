#include "deleg/simplex.hpp"

#include <limits>
#include <stdexcept>

namespace deleg {

namespace {

// Dictionary tableau. Row i (i < m) encodes
//   x_{B[i]} = rhs_i - sum_j T[i][j] * x_{N[j]}
// and row m encodes the objective z = objConst - sum_j T[m][j] * x_{N[j]}.
// Column layout: n structural columns, then one artificial column, then rhs.
class Tableau {
public:
    explicit Tableau(const LinearProgram& lp)
        : m_(lp.b.size()), n_(lp.c.size()), artificialId_(n_ + m_) {
        T_.assign(m_ + 2, std::vector<Rat>(n_ + 2, Rat(0)));
        N_.resize(n_ + 1);
        B_.resize(m_);
        for (size_t i = 0; i < m_; ++i) {
            if (lp.A[i].size() != n_) throw std::invalid_argument("ragged constraint matrix");
            for (size_t j = 0; j < n_; ++j) T_[i][j] = lp.A[i][j];
            T_[i][n_] = -1;  // artificial column
            T_[i][rhs()] = lp.b[i];
            B_[i] = n_ + i;  // slack ids
        }
        for (size_t j = 0; j < n_; ++j) {
            N_[j] = j;
            T_[m_][j] = -lp.c[j];
        }
        N_[n_] = artificialId_;
        T_[m_ + 1][n_] = 1;  // phase-1 objective: maximize -x0
    }

    LpSolution solve() {
        size_t r = 0;
        for (size_t i = 1; i < m_; ++i) {
            if (T_[i][rhs()] < T_[r][rhs()]) r = i;
        }
        if (m_ > 0 && T_[r][rhs()] < 0) {
            pivot(r, n_);  // brings x0 in; all rhs become >= 0
            if (!run(/*phaseOne=*/true) || T_[m_ + 1][rhs()] < 0) {
                return {LpStatus::Infeasible, Rat(0), {}};
            }
            for (size_t i = 0; i < m_; ++i) {
                if (B_[i] != artificialId_) continue;
                // x0 basic at value 0; pivot it out through any usable column.
                size_t s = n_ + 1;
                for (size_t j = 0; j <= n_; ++j) {
                    if (T_[i][j] == 0) continue;
                    if (s == n_ + 1 || N_[j] < N_[s]) s = j;
                }
                if (s == n_ + 1) throw std::logic_error("degenerate artificial row");
                pivot(i, s);
            }
        }
        if (!run(/*phaseOne=*/false)) return {LpStatus::Unbounded, Rat(0), {}};

        LpSolution out{LpStatus::Optimal, T_[m_][rhs()], std::vector<Rat>(n_, Rat(0))};
        for (size_t i = 0; i < m_; ++i) {
            if (B_[i] < n_) out.x[B_[i]] = T_[i][rhs()];
        }
        return out;
    }

private:
    size_t rhs() const { return n_ + 1; }

    void pivot(size_t r, size_t s) {
        const Rat p = T_[r][s];
        if (p == 0) throw std::logic_error("pivot on zero element");
        const Rat inv = Rat(1) / p;
        for (size_t j = 0; j <= rhs(); ++j) {
            if (j != s) T_[r][j] *= inv;
        }
        T_[r][s] = inv;
        for (size_t i = 0; i < m_ + 2; ++i) {
            if (i == r || T_[i][s] == 0) continue;
            const Rat factor = T_[i][s];
            for (size_t j = 0; j <= rhs(); ++j) {
                if (j != s) T_[i][j] -= factor * T_[r][j];
            }
            T_[i][s] = -factor * inv;
        }
        std::swap(B_[r], N_[s]);
    }

    // Bland's rule on both ends: entering = lowest-id improving variable,
    // leaving = lowest-id among minimal ratios. Returns false when unbounded.
    bool run(bool phaseOne) {
        const size_t objRow = phaseOne ? m_ + 1 : m_;
        for (long guard = 0; guard < kMaxPivots; ++guard) {
            size_t s = n_ + 1;
            for (size_t j = 0; j <= n_; ++j) {
                if (!phaseOne && N_[j] == artificialId_) continue;
                if (T_[objRow][j] < 0 && (s == n_ + 1 || N_[j] < N_[s])) s = j;
            }
            if (s == n_ + 1) return true;

            size_t r = m_;
            for (size_t i = 0; i < m_; ++i) {
                if (T_[i][s] <= 0) continue;
                if (r == m_) {
                    r = i;
                    continue;
                }
                const Rat lhs = T_[i][rhs()] * T_[r][s];
                const Rat cur = T_[r][rhs()] * T_[i][s];
                if (lhs < cur || (lhs == cur && B_[i] < B_[r])) r = i;
            }
            if (r == m_) return false;
            pivot(r, s);
        }
        throw std::logic_error("simplex pivot limit exceeded");
    }

    static constexpr long kMaxPivots = 200000;

    size_t m_, n_;
    size_t artificialId_;
    std::vector<std::vector<Rat>> T_;
    std::vector<size_t> N_;  // nonbasic variable ids per column
    std::vector<size_t> B_;  // basic variable ids per row
};

}  // namespace

LpSolution solveLp(const LinearProgram& lp) {
    if (lp.A.size() != lp.b.size()) throw std::invalid_argument("A and b sizes differ");
    return Tableau(lp).solve();
}

}  // namespace deleg
