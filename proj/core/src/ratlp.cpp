#include "fraisse/ratlp.hpp"

#include "fraisse/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace fraisse {

int LinearProgram::add_variable(std::string name) { return add_variable(std::move(name), std::nullopt, std::nullopt); }

int LinearProgram::add_variable(std::string name, std::optional<Rational> lower, std::optional<Rational> upper) {
    if (name.empty()) throw DomainError("lp: variable name must be nonempty");
    if (variable_index(name) >= 0) throw DomainError("lp: duplicate variable name '" + name + "'");
    names_.push_back(std::move(name));
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return static_cast<int>(names_.size()) - 1;
}

void LinearProgram::set_lower_bound(int variable, Rational lower) {
    if (variable < 0 || variable >= variable_count()) throw DomainError("lp: unknown variable index");
    lower_[variable] = std::move(lower);
}

void LinearProgram::set_upper_bound(int variable, Rational upper) {
    if (variable < 0 || variable >= variable_count()) throw DomainError("lp: unknown variable index");
    upper_[variable] = std::move(upper);
}

int LinearProgram::variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

LinearForm LinearProgram::normalize(LinearForm form) const {
    for (const LinTerm& t : form) {
        if (t.variable < 0 || t.variable >= variable_count())
            throw DomainError("lp: form references undeclared variable index " + std::to_string(t.variable));
    }
    std::stable_sort(form.begin(), form.end(), [](const LinTerm& a, const LinTerm& b) { return a.variable < b.variable; });
    LinearForm merged;
    for (LinTerm& t : form) {
        if (!merged.empty() && merged.back().variable == t.variable)
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const LinTerm& t) { return t.coefficient == 0; });
    return merged;
}

void LinearProgram::add_constraint(LinearForm form, Relation relation, Rational rhs) {
    constraints_.push_back({normalize(std::move(form)), relation, std::move(rhs)});
}

void LinearProgram::set_objective(Direction direction, LinearForm form) {
    direction_ = direction;
    objective_ = normalize(std::move(form));
}

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(lp.variable_count())) return false;
    for (int v = 0; v < lp.variable_count(); ++v) {
        if (lp.lower_bound(v) && assignment[v] < *lp.lower_bound(v)) return false;
        if (lp.upper_bound(v) && assignment[v] > *lp.upper_bound(v)) return false;
    }
    for (const LinearProgram::Constraint& c : lp.constraints()) {
        Rational lhs = 0;
        for (const LinTerm& t : c.form) lhs += t.coefficient * assignment[t.variable];
        switch (c.relation) {
            case Relation::LessEq:
                if (lhs > c.rhs) return false;
                break;
            case Relation::Equal:
                if (lhs != c.rhs) return false;
                break;
            case Relation::GreaterEq:
                if (lhs < c.rhs) return false;
                break;
        }
    }
    return true;
}

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& assignment) {
    Rational v = 0;
    for (const LinTerm& t : lp.objective()) v += t.coefficient * assignment[t.variable];
    return v;
}

namespace {

// Standard-form tableau: minimize c.y over A y = rhs, y >= 0. Column order:
// per-variable columns in submission order, then row slacks, then artificials
// (Bland's rule scans in this order, which keeps runs deterministic).
//
// Each row is held as integer numerators over a single positive denominator
// (entry i,j = nums[i][j] / den[i], right-hand side = rhs_num[i] / den[i]).
// Pivots then cost two integer multiplies per entry plus one gcd sweep per
// row, instead of a gcd-normalizing rational operation per entry. Only the
// reduced-cost row stays rational; it is one row and off the hot path.
class Simplex {
  public:
    std::vector<std::vector<Integer>> nums;  // m x n coefficient numerators
    std::vector<Integer> rhs_num;            // m, nonnegative (den > 0)
    std::vector<Integer> den;                // m, positive row denominators
    std::vector<int> basic;                  // m, standard column index
    std::vector<Rational> z;                 // n reduced costs
    Rational z_value;                        // current objective (minimization)
    int ncols = 0;

    int columns() const { return ncols; }
    std::size_t row_count() const { return nums.size(); }

    Rational cell(std::size_t i, int j) const { return Rational(nums[i][j], den[i]); }
    Rational rhs(std::size_t i) const { return Rational(rhs_num[i], den[i]); }

    void append_row(const std::vector<Rational>& row, const Rational& b) {
        Integer scale = 1;
        for (const Rational& x : row) {
            if (x != 0) scale = boost::multiprecision::lcm(scale, denominator(x));
        }
        if (b != 0) scale = boost::multiprecision::lcm(scale, denominator(b));
        std::vector<Integer> n;
        n.reserve(row.size());
        for (const Rational& x : row) n.push_back(numerator(x) * (scale / denominator(x)));
        nums.push_back(std::move(n));
        rhs_num.push_back(numerator(b) * (scale / denominator(b)));
        den.push_back(std::move(scale));
    }

    void erase_row(std::size_t i) {
        nums.erase(nums.begin() + static_cast<long>(i));
        rhs_num.erase(rhs_num.begin() + static_cast<long>(i));
        den.erase(den.begin() + static_cast<long>(i));
        basic.erase(basic.begin() + static_cast<long>(i));
    }

    // Divide the row by its content so entries stay in lowest terms; the gcd
    // loop usually exits at 1 after a few entries.
    void normalize_row(std::size_t i) {
        Integer g = den[i];
        for (const Integer& v : nums[i]) {
            if (v != 0) {
                g = boost::multiprecision::gcd(g, v);
                if (g == 1) return;
            }
        }
        if (rhs_num[i] != 0) {
            g = boost::multiprecision::gcd(g, rhs_num[i]);
            if (g == 1) return;
        }
        for (Integer& v : nums[i]) v /= g;
        rhs_num[i] /= g;
        den[i] /= g;
    }

    void install_objective(const std::vector<Rational>& cost) {
        z.assign(cost.begin(), cost.end());
        z_value = 0;
        for (std::size_t i = 0; i < row_count(); ++i) {
            const Rational& cb = cost[basic[i]];
            if (cb == 0) continue;
            for (int j = 0; j < columns(); ++j) {
                if (nums[i][j] != 0) z[j] -= cb * cell(i, j);
            }
            z_value += cb * rhs(i);
        }
    }

    void pivot(int r, int c) {
        // Row r := row r / pivot is a denominator swap: new den is the pivot
        // numerator (made positive; it can be negative only when driving an
        // artificial out of a degenerate row).
        if (nums[r][c] < 0) {
            for (Integer& v : nums[r]) v = -v;
            rhs_num[r] = -rhs_num[r];
        }
        den[r] = nums[r][c];
        normalize_row(r);
        const Integer& q = den[r];
        for (std::size_t i = 0; i < row_count(); ++i) {
            if (static_cast<int>(i) == r || nums[i][c] == 0) continue;
            const Integer fc = nums[i][c];
            std::vector<Integer>& ri = nums[i];
            const std::vector<Integer>& rr = nums[r];
            for (int j = 0; j < columns(); ++j) {
                ri[j] *= q;
                if (rr[j] != 0) ri[j] -= fc * rr[j];
            }
            rhs_num[i] *= q;
            if (rhs_num[r] != 0) rhs_num[i] -= fc * rhs_num[r];
            den[i] *= q;
            normalize_row(i);
        }
        if (z[c] != 0) {
            Rational f = z[c];
            for (int j = 0; j < columns(); ++j) {
                if (nums[r][j] != 0) z[j] -= f * cell(r, j);
            }
            z_value += f * rhs(r);
        }
        basic[r] = c;
    }

    // Dantzig pricing (most negative reduced cost, lowest submitted index on
    // ties) with a switch to Bland's rule after a run of degenerate pivots;
    // Bland's rule cannot cycle, and any strict improvement resets the run.
    // Deterministic either way. Returns Optimal or Unbounded.
    LPStatus iterate(int first_banned_column) {
        constexpr long kPivotCap = 2'000'000;
        constexpr int kStallLimit = 12;
        const int limit = std::min(first_banned_column, columns());
        int stalled = 0;
        for (long step = 0; step < kPivotCap; ++step) {
            int enter = -1;
            if (stalled < kStallLimit) {
                for (int j = 0; j < limit; ++j) {
                    if (z[j] < 0 && (enter < 0 || z[j] < z[enter])) enter = j;
                }
            } else {
                for (int j = 0; j < limit; ++j) {
                    if (z[j] < 0) {
                        enter = j;
                        break;
                    }
                }
            }
            if (enter < 0) return LPStatus::Optimal;
            // Ratio test: rhs_i / entry_i with the row denominators cancelling,
            // so candidates compare by integer cross-multiplication.
            int leave = -1;
            Integer best_num, best_den;
            for (std::size_t i = 0; i < row_count(); ++i) {
                if (nums[i][enter] <= 0) continue;
                const Integer& rn = rhs_num[i];
                const Integer& rd = nums[i][enter];
                if (leave >= 0) {
                    Integer lhs = rn * best_den;
                    Integer rhs_cmp = best_num * rd;
                    if (lhs > rhs_cmp) continue;
                    if (lhs == rhs_cmp && basic[i] >= basic[leave]) continue;
                }
                leave = static_cast<int>(i);
                best_num = rn;
                best_den = rd;
            }
            if (leave < 0) return LPStatus::Unbounded;
            const bool degenerate = rhs_num[leave] == 0;
            pivot(leave, enter);
            stalled = degenerate ? stalled + 1 : 0;
        }
        throw std::logic_error("lp: pivot cap exceeded, anti-cycling rule failed");
    }
};

// x_original = shift + sign * y[col] (- y[neg] when free).
struct VarMap {
    int col = -1;
    int neg = -1;
    Rational shift;
    int sign = 1;
};

struct Row {
    LinearForm form;  // over standard y columns
    Relation relation;
    Rational rhs;
};

}  // namespace

static LPOutcome run_simplex(const LinearProgram& lp, bool phase_one_only) {
    const int nvars = lp.variable_count();

    // Inconsistent bounds decide immediately.
    for (int v = 0; v < nvars; ++v) {
        if (lp.lower_bound(v) && lp.upper_bound(v) && *lp.lower_bound(v) > *lp.upper_bound(v))
            return {LPStatus::Infeasible, Rational(0), {}};
    }

    std::vector<VarMap> vmap(nvars);
    int ncols = 0;
    std::vector<Row> bound_rows;
    for (int v = 0; v < nvars; ++v) {
        const auto& lo = lp.lower_bound(v);
        const auto& hi = lp.upper_bound(v);
        VarMap& m = vmap[v];
        m.col = ncols++;
        if (lo) {
            m.shift = *lo;
            if (hi) bound_rows.push_back({{{m.col, Rational(1)}}, Relation::LessEq, *hi - *lo});
        } else if (hi) {
            m.shift = *hi;
            m.sign = -1;
        } else {
            m.neg = ncols++;
        }
    }

    // Rewrite constraints over the standard columns.
    std::vector<Row> rows;
    for (const LinearProgram::Constraint& c : lp.constraints()) {
        Row row;
        row.relation = c.relation;
        row.rhs = c.rhs;
        for (const LinTerm& t : c.form) {
            const VarMap& m = vmap[t.variable];
            row.rhs -= t.coefficient * m.shift;
            row.form.push_back({m.col, m.sign > 0 ? t.coefficient : -t.coefficient});
            if (m.neg >= 0) row.form.push_back({m.neg, -t.coefficient});
        }
        if (row.form.empty()) {
            bool ok = (c.relation == Relation::LessEq && 0 <= row.rhs) ||
                      (c.relation == Relation::Equal && 0 == row.rhs) ||
                      (c.relation == Relation::GreaterEq && 0 >= row.rhs);
            if (!ok) return {LPStatus::Infeasible, Rational(0), {}};
            continue;
        }
        rows.push_back(std::move(row));
    }
    for (Row& r : bound_rows) rows.push_back(std::move(r));

    // Slack columns, then sign-normalize, then artificial columns.
    std::vector<int> slack_col(rows.size(), -1);
    std::vector<Rational> slack_coef(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].relation != Relation::Equal) {
            slack_col[i] = ncols++;
            slack_coef[i] = rows[i].relation == Relation::LessEq ? 1 : -1;
        }
    }

    Simplex sx;
    std::vector<int> artificial_rows;
    int total_cols = ncols;  // artificials appended below
    std::vector<std::vector<Rational>> dense;
    std::vector<Rational> dense_rhs;
    dense.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Rational> r(ncols, Rational(0));
        for (const LinTerm& t : rows[i].form) r[t.variable] += t.coefficient;
        if (slack_col[i] >= 0) r[slack_col[i]] = slack_coef[i];
        Rational b = rows[i].rhs;
        if (b < 0) {
            for (Rational& x : r) {
                if (x != 0) x = -x;
            }
            b = -b;
        }
        if (slack_col[i] >= 0 && r[slack_col[i]] == 1) {
            sx.basic.push_back(slack_col[i]);
        } else {
            artificial_rows.push_back(static_cast<int>(i));
            sx.basic.push_back(-1);  // patched once artificial columns exist
        }
        dense.push_back(std::move(r));
        dense_rhs.push_back(std::move(b));
    }
    const int first_artificial = total_cols;
    total_cols += static_cast<int>(artificial_rows.size());
    for (std::size_t i = 0; i < dense.size(); ++i) dense[i].resize(total_cols, Rational(0));
    for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
        int r = artificial_rows[k];
        dense[r][first_artificial + static_cast<int>(k)] = 1;
        sx.basic[r] = first_artificial + static_cast<int>(k);
    }
    for (std::size_t i = 0; i < dense.size(); ++i) sx.append_row(dense[i], dense_rhs[i]);
    sx.ncols = total_cols;

    // Phase one: minimize the artificial sum.
    if (!artificial_rows.empty()) {
        std::vector<Rational> phase1(total_cols, Rational(0));
        for (int j = first_artificial; j < total_cols; ++j) phase1[j] = 1;
        sx.install_objective(phase1);
        LPStatus st = sx.iterate(total_cols);
        if (st != LPStatus::Optimal) throw std::logic_error("lp: phase one cannot be unbounded");
        if (sx.z_value != 0) return {LPStatus::Infeasible, Rational(0), {}};
        // Drive leftover artificials out of the basis or drop redundant rows.
        for (std::size_t i = 0; i < sx.row_count();) {
            if (sx.basic[i] < first_artificial) {
                ++i;
                continue;
            }
            int col = -1;
            for (int j = 0; j < first_artificial && col < 0; ++j) {
                if (sx.nums[i][j] != 0) col = j;
            }
            if (col >= 0) {
                sx.pivot(static_cast<int>(i), col);
                ++i;
            } else {
                sx.erase_row(i);
            }
        }
    }
    for (std::vector<Integer>& r : sx.nums) r.resize(first_artificial);
    sx.ncols = first_artificial;

    Rational objective_shift = 0;
    if (!phase_one_only) {
        std::vector<Rational> cost(first_artificial, Rational(0));
        const bool maximize = lp.direction() == Direction::Maximize;
        for (const LinTerm& t : lp.objective()) {
            const VarMap& m = vmap[t.variable];
            Rational c = maximize ? -t.coefficient : t.coefficient;
            objective_shift += c * m.shift;
            cost[m.col] += m.sign > 0 ? c : -c;
            if (m.neg >= 0) cost[m.neg] -= c;
        }
        sx.install_objective(cost);
        if (sx.iterate(first_artificial) == LPStatus::Unbounded) return {LPStatus::Unbounded, Rational(0), {}};
    } else {
        sx.install_objective(std::vector<Rational>(first_artificial, Rational(0)));
    }

    // Read the basic solution back through the variable maps.
    std::vector<Rational> y(first_artificial, Rational(0));
    for (std::size_t i = 0; i < sx.row_count(); ++i) y[sx.basic[i]] = sx.rhs(i);
    LPOutcome out;
    out.status = LPStatus::Optimal;
    out.assignment.reserve(nvars);
    for (int v = 0; v < nvars; ++v) {
        const VarMap& m = vmap[v];
        Rational x = m.shift;
        x += m.sign > 0 ? y[m.col] : -y[m.col];
        if (m.neg >= 0) x -= y[m.neg];
        out.assignment.push_back(std::move(x));
    }
    if (phase_one_only) {
        out.optimum = 0;
    } else {
        Rational value = sx.z_value + objective_shift;
        out.optimum = lp.direction() == Direction::Maximize ? -value : value;
        Rational recomputed = objective_value(lp, out.assignment);
        if (recomputed != out.optimum) throw std::logic_error("lp: objective mismatch on exact re-evaluation");
    }
    if (!satisfies(lp, out.assignment)) throw std::logic_error("lp: returned point fails exact re-evaluation");
    return out;
}

LPOutcome solve(const LinearProgram& lp) { return run_simplex(lp, false); }

LPOutcome feasible(const LinearProgram& lp) { return run_simplex(lp, true); }

}  // namespace fraisse
