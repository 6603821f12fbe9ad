#include "fraisse/ratlp.hpp"

#include "fraisse/errors.hpp"

#include "doctest.h"

using namespace fraisse;

TEST_SUITE("ratlp") {
    TEST_CASE("two-variable maximization with exact fractional optimum") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        const int y = lp.add_variable("y", Rational(0), std::nullopt);
        lp.add_constraint({{x, Rational(2)}, {y, Rational(1)}}, Relation::LessEq, Rational(4));
        lp.add_constraint({{x, Rational(1)}, {y, Rational(3)}}, Relation::LessEq, Rational(6));
        lp.set_objective(Direction::Maximize, {{x, Rational(1)}, {y, Rational(1)}});
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        CHECK(out.optimum == Rational(14, 5));
        CHECK(out.assignment[static_cast<std::size_t>(x)] == Rational(6, 5));
        CHECK(out.assignment[static_cast<std::size_t>(y)] == Rational(8, 5));
        CHECK(satisfies(lp, out.assignment));
        CHECK(objective_value(lp, out.assignment) == out.optimum);
    }

    TEST_CASE("equality constraints and free variables") {
        LinearProgram lp;
        const int x = lp.add_variable("x");  // free
        const int y = lp.add_variable("y", Rational(0), Rational(10));
        lp.add_constraint({{x, Rational(1)}, {y, Rational(1)}}, Relation::Equal, Rational(3));
        lp.set_objective(Direction::Minimize, {{x, Rational(1)}});
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        CHECK(out.optimum == Rational(-7));  // y at its cap
        CHECK(out.assignment[static_cast<std::size_t>(y)] == Rational(10));
    }

    TEST_CASE("infeasible system is reported") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        lp.add_constraint({{x, Rational(1)}}, Relation::GreaterEq, Rational(5));
        lp.add_constraint({{x, Rational(1)}}, Relation::LessEq, Rational(4));
        CHECK(solve(lp).status == LPStatus::Infeasible);
        CHECK(feasible(lp).status == LPStatus::Infeasible);
    }

    TEST_CASE("unbounded objective is reported") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        lp.set_objective(Direction::Maximize, {{x, Rational(1)}});
        CHECK(solve(lp).status == LPStatus::Unbounded);
    }

    TEST_CASE("feasibility-only call finds a point") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        const int y = lp.add_variable("y", Rational(0), std::nullopt);
        lp.add_constraint({{x, Rational(1)}, {y, Rational(1)}}, Relation::GreaterEq, Rational(1));
        const LPOutcome out = feasible(lp);
        REQUIRE(out.optimal());
        CHECK(satisfies(lp, out.assignment));
    }

    TEST_CASE("degenerate cycling-prone instance terminates at the optimum") {
        // Beale's classic cycling example; Bland's rule must terminate.
        LinearProgram lp;
        const int x1 = lp.add_variable("x1", Rational(0), std::nullopt);
        const int x2 = lp.add_variable("x2", Rational(0), std::nullopt);
        const int x3 = lp.add_variable("x3", Rational(0), std::nullopt);
        const int x4 = lp.add_variable("x4", Rational(0), std::nullopt);
        lp.add_constraint({{x1, Rational(1, 4)}, {x2, Rational(-8)}, {x3, Rational(-1)}, {x4, Rational(9)}},
                          Relation::LessEq, Rational(0));
        lp.add_constraint({{x1, Rational(1, 2)}, {x2, Rational(-12)}, {x3, Rational(-1, 2)}, {x4, Rational(3)}},
                          Relation::LessEq, Rational(0));
        lp.add_constraint({{x3, Rational(1)}}, Relation::LessEq, Rational(1));
        lp.set_objective(Direction::Maximize, {{x1, Rational(3, 4)}, {x2, Rational(-150)}, {x3, Rational(1, 50)}, {x4, Rational(-6)}});
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        // Optimal at x1 = x3 = 1: dual certificate y = (0, 3/2, 77/100).
        CHECK(out.optimum == Rational(77, 100));
        CHECK(satisfies(lp, out.assignment));
    }

    TEST_CASE("duplicate terms in a form are merged") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        lp.add_constraint({{x, Rational(1)}, {x, Rational(2)}}, Relation::LessEq, Rational(6));
        lp.set_objective(Direction::Maximize, {{x, Rational(1)}});
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        CHECK(out.optimum == Rational(2));
    }

    TEST_CASE("negative lower bounds and two-sided bounds work") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(-3), Rational(-1));
        lp.set_objective(Direction::Minimize, {{x, Rational(1)}});
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        CHECK(out.optimum == Rational(-3));
        lp.set_objective(Direction::Maximize, {{x, Rational(1)}});
        CHECK(solve(lp).optimum == Rational(-1));
    }

    TEST_CASE("contradictory bounds are infeasible") {
        LinearProgram lp;
        lp.add_variable("x", Rational(2), Rational(1));
        CHECK(solve(lp).status == LPStatus::Infeasible);
    }

    TEST_CASE("invalid variable index is rejected") {
        LinearProgram lp;
        lp.add_variable("x");
        CHECK_THROWS_AS(lp.add_constraint({{5, Rational(1)}}, Relation::LessEq, Rational(1)), DomainError);
        CHECK_THROWS_AS(lp.add_variable("x"), DomainError);  // duplicate name
    }

    TEST_CASE("solver is deterministic") {
        LinearProgram lp;
        const int x = lp.add_variable("x", Rational(0), std::nullopt);
        const int y = lp.add_variable("y", Rational(0), std::nullopt);
        const int z = lp.add_variable("z", Rational(0), std::nullopt);
        lp.add_constraint({{x, Rational(1)}, {y, Rational(1)}, {z, Rational(1)}}, Relation::Equal, Rational(1));
        lp.set_objective(Direction::Maximize, {{x, Rational(1)}, {y, Rational(1)}, {z, Rational(1)}});
        const LPOutcome a = solve(lp);
        const LPOutcome b = solve(lp);
        REQUIRE(a.optimal());
        CHECK(a.assignment == b.assignment);  // degenerate optimum, same vertex every run
        CHECK(a.optimum == 1);
    }

    TEST_CASE("larger transportation-style instance solves exactly") {
        // min sum c_ij x_ij, rows supply 3 + 5, columns demand 2 + 2 + 4.
        LinearProgram lp;
        int v[2][3];
        const Rational cost[2][3] = {{Rational(4), Rational(6), Rational(9)}, {Rational(5), Rational(3), Rational(8)}};
        LinearForm obj;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                v[i][j] = lp.add_variable("x" + std::to_string(i) + std::to_string(j), Rational(0), std::nullopt);
                obj.push_back({v[i][j], cost[i][j]});
            }
        const Rational supply[2] = {Rational(3), Rational(5)};
        const Rational demand[3] = {Rational(2), Rational(2), Rational(4)};
        for (int i = 0; i < 2; ++i)
            lp.add_constraint({{v[i][0], Rational(1)}, {v[i][1], Rational(1)}, {v[i][2], Rational(1)}}, Relation::Equal,
                              supply[i]);
        for (int j = 0; j < 3; ++j)
            lp.add_constraint({{v[0][j], Rational(1)}, {v[1][j], Rational(1)}}, Relation::Equal, demand[j]);
        lp.set_objective(Direction::Minimize, obj);
        const LPOutcome out = solve(lp);
        REQUIRE(out.optimal());
        // x00=2, x02=1, x11=2, x12=3: 8 + 9 + 6 + 24 = 47.
        CHECK(out.optimum == Rational(47));
        CHECK(satisfies(lp, out.assignment));
    }
}
