#pragma once

#include "fraisse/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraisse {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Direction { Minimize, Maximize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LinTerm {
    int variable;
    Rational coefficient;
};

using LinearForm = std::vector<LinTerm>;

// Exact-rational linear program. Variables are free unless bounds are given;
// duplicate variables inside one form are summed. All data is rational and
// the solver never rounds.
class LinearProgram {
  public:
    // Returns the variable index. Name must be unique and nonempty.
    int add_variable(std::string name);
    int add_variable(std::string name, std::optional<Rational> lower, std::optional<Rational> upper);

    void set_lower_bound(int variable, Rational lower);
    void set_upper_bound(int variable, Rational upper);

    void add_constraint(LinearForm form, Relation relation, Rational rhs);

    // Default objective: minimize 0 (pure feasibility).
    void set_objective(Direction direction, LinearForm form);

    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::string& variable_name(int v) const { return names_[v]; }
    int variable_index(std::string_view name) const;  // -1 when absent
    const std::optional<Rational>& lower_bound(int v) const { return lower_[v]; }
    const std::optional<Rational>& upper_bound(int v) const { return upper_[v]; }

    struct Constraint {
        LinearForm form;
        Relation relation;
        Rational rhs;
    };
    const std::vector<Constraint>& constraints() const { return constraints_; }
    Direction direction() const { return direction_; }
    const LinearForm& objective() const { return objective_; }

  private:
    LinearForm normalize(LinearForm form) const;  // validates indices, merges duplicates

    std::vector<std::string> names_;
    std::vector<std::optional<Rational>> lower_;
    std::vector<std::optional<Rational>> upper_;
    std::vector<Constraint> constraints_;
    Direction direction_ = Direction::Minimize;
    LinearForm objective_;
};

struct LPOutcome {
    LPStatus status = LPStatus::Infeasible;
    Rational optimum;                  // meaningful iff status == Optimal
    std::vector<Rational> assignment;  // by variable index, iff status == Optimal

    bool optimal() const { return status == LPStatus::Optimal; }
};

// Two-phase primal simplex with exact rational pivots and Bland's rule
// (lowest submitted index enters; ties on the ratio test break toward the
// lowest basic index). Deterministic. Every optimal outcome is re-checked
// against the original constraints before being returned.
LPOutcome solve(const LinearProgram& lp);

// Phase one only: a feasible point (optimum reported as 0) or infeasibility.
LPOutcome feasible(const LinearProgram& lp);

// Exact check of an assignment against all constraints and bounds.
bool satisfies(const LinearProgram& lp, const std::vector<Rational>& assignment);

// Exact objective value of an assignment.
Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& assignment);

}  // namespace fraisse
