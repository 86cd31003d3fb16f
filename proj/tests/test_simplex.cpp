#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deleg/simplex.hpp"

#include <random>

using namespace deleg;

TEST_CASE("one-variable maximum") {
    LinearProgram lp;
    lp.A = {{Rat(1)}};
    lp.b = {Rat(5)};
    lp.c = {Rat(1)};
    const LpSolution sol = solveLp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 5);
    CHECK(sol.x[0] == 5);
}

TEST_CASE("classic two-variable program") {
    // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18.
    LinearProgram lp;
    lp.A = {{Rat(1), Rat(0)}, {Rat(0), Rat(2)}, {Rat(3), Rat(2)}};
    lp.b = {Rat(4), Rat(12), Rat(18)};
    lp.c = {Rat(3), Rat(5)};
    const LpSolution sol = solveLp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 36);
    CHECK(sol.x[0] == 2);
    CHECK(sol.x[1] == 6);
}

TEST_CASE("negative right-hand side forces the feasibility phase") {
    // max -x - y st -x - y <= -3, x <= 5, y <= 5. Optimum -3 on the boundary.
    LinearProgram lp;
    lp.A = {{Rat(-1), Rat(-1)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    lp.b = {Rat(-3), Rat(5), Rat(5)};
    lp.c = {Rat(-1), Rat(-1)};
    const LpSolution sol = solveLp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == -3);
    CHECK(sol.x[0] + sol.x[1] == 3);
}

TEST_CASE("infeasible system is detected") {
    // x <= 1 and -x <= -2 cannot both hold.
    LinearProgram lp;
    lp.A = {{Rat(1)}, {Rat(-1)}};
    lp.b = {Rat(1), Rat(-2)};
    lp.c = {Rat(1)};
    CHECK(solveLp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded objective is detected") {
    LinearProgram lp;
    lp.A = {{Rat(-1)}};
    lp.b = {Rat(0)};
    lp.c = {Rat(1)};
    CHECK(solveLp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("exact rational data stays exact") {
    // max x + y st x/3 + y/7 <= 1/11, y <= 1/13.
    LinearProgram lp;
    lp.A = {{Rat(1, 3), Rat(1, 7)}, {Rat(0), Rat(1)}};
    lp.b = {Rat(1, 11), Rat(1, 13)};
    lp.c = {Rat(1), Rat(1)};
    const LpSolution sol = solveLp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    // y at its bound, x = 3 * (1/11 - 1/(7*13)).
    CHECK(sol.x[1] == Rat(1, 13));
    CHECK(sol.x[0] == Rat(3) * (Rat(1, 11) - Rat(1, 91)));
    CHECK(sol.objective == sol.x[0] + sol.x[1]);
}

TEST_CASE("random feasible programs satisfy their constraints") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 150; ++round) {
        const size_t n = 1 + rng() % 4;
        const size_t m = 1 + rng() % 5;
        LinearProgram lp;
        for (size_t i = 0; i < m; ++i) {
            std::vector<Rat> row;
            for (size_t j = 0; j < n; ++j) {
                row.push_back(Rat(static_cast<long>(rng() % 11) - 5,
                                  1 + static_cast<long>(rng() % 3)));
            }
            lp.A.push_back(row);
            lp.b.push_back(Rat(static_cast<long>(rng() % 13) - 3));
        }
        // Box rows keep every program bounded.
        for (size_t j = 0; j < n; ++j) {
            std::vector<Rat> row(n, Rat(0));
            row[j] = 1;
            lp.A.push_back(row);
            lp.b.push_back(Rat(6));
        }
        for (size_t j = 0; j < n; ++j) {
            lp.c.push_back(Rat(static_cast<long>(rng() % 9) - 4));
        }

        const LpSolution sol = solveLp(lp);
        if (sol.status != LpStatus::Optimal) {
            CHECK(sol.status == LpStatus::Infeasible);
            continue;
        }
        for (size_t j = 0; j < n; ++j) CHECK(sol.x[j] >= 0);
        Rat objective = 0;
        for (size_t j = 0; j < n; ++j) objective += lp.c[j] * sol.x[j];
        CHECK(objective == sol.objective);
        for (size_t i = 0; i < lp.A.size(); ++i) {
            Rat lhs = 0;
            for (size_t j = 0; j < n; ++j) lhs += lp.A[i][j] * sol.x[j];
            CHECK(lhs <= lp.b[i]);
        }
    }
}
