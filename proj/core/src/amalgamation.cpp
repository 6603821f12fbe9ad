#include "fraisse/amalgamation.hpp"

#include "fraisse/errors.hpp"
#include "fraisse/ratlp.hpp"

#include <algorithm>

namespace fraisse {

namespace {

std::string fresh_label(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += '\'';
    return base;
}

void require_generated(const PointedStructure& p, const char* who) {
    if (!p.structure) throw DomainError(std::string(who) + ": null structure");
    const MetricStructure& s = *p.structure;
    std::vector<char> covered(s.size(), 0);
    for (int g : p.tuple) {
        if (g < 0 || g >= s.size()) throw DomainError(std::string(who) + ": tuple entry out of range");
        covered[g] = 1;
    }
    for (int c : s.constant_points) covered[c] = 1;
    for (int i = 0; i < s.size(); ++i) {
        if (!covered[i])
            throw DomainError(std::string(who) + ": point '" + s.points[i] + "' is neither a generator nor a constant");
    }
}

// Builds the common fields of a two-block structure whose distance matrix is
// already known: labels, tables (inherited on single-side tuples, largest
// Lipschitz-admissible value on genuinely mixed ones) and b0's constants.
// right_map sends b1 points to block indices.
MetricStructure assemble_two_block(const MetricStructure& b0, const MetricStructure& b1,
                                   const std::vector<int>& right_map, std::vector<std::string> labels,
                                   std::vector<Rational> dist) {
    MetricStructure c;
    c.signature = b0.signature;
    c.points = std::move(labels);
    c.dist = std::move(dist);
    const int n = c.size();
    const int m0 = b0.size();

    // Lift tables: block index -> b1 point (or -1).
    std::vector<int> from_b1(n, -1);
    for (int j = 0; j < b1.size(); ++j) from_b1[right_map[j]] = j;

    for (std::size_t p = 0; p < c.signature.predicates.size(); ++p) {
        const PredicateDecl& decl = c.signature.predicates[p];
        const int arity = decl.arity;
        std::size_t cells = 1;
        for (int i = 0; i < arity; ++i) cells *= static_cast<std::size_t>(n);
        std::vector<Rational> table(cells);
        if (n > 0) {
            std::vector<int> t(arity, 0);
            std::vector<int> lifted(arity);
            do {
                bool in0 = true, in1 = true;
                for (int e : t) {
                    if (e >= m0) in0 = false;
                    if (from_b1[e] < 0) in1 = false;
                }
                Rational v;
                if (in0) {
                    v = b0.value(static_cast<int>(p), t);
                } else if (in1) {
                    for (int k = 0; k < arity; ++k) lifted[k] = from_b1[t[k]];
                    v = b1.value(static_cast<int>(p), lifted);
                } else {
                    // Largest admissible value: McShane envelope over both
                    // blocks' tuples, clamped to the declared range. The
                    // final validate decides whether a common extension
                    // exists at all.
                    bool have = false;
                    auto consider = [&](const Rational& base_value, const Rational& sup) {
                        Rational cand = base_value + decl.lipschitz * sup;
                        if (!have || cand < v) {
                            v = cand;
                            have = true;
                        }
                    };
                    std::vector<int> s(arity, 0);
                    do {
                        Rational sup = 0;
                        for (int k = 0; k < arity; ++k) {
                            const Rational& dd = c.dist[static_cast<std::size_t>(t[k]) * n + s[k]];
                            if (dd > sup) sup = dd;
                        }
                        consider(b0.value(static_cast<int>(p), s), sup);
                    } while (next_tuple(s, m0));
                    if (b1.size() > 0) {
                        std::vector<int> s1(arity, 0);
                        do {
                            Rational sup = 0;
                            for (int k = 0; k < arity; ++k) {
                                const Rational& dd = c.dist[static_cast<std::size_t>(t[k]) * n + right_map[s1[k]]];
                                if (dd > sup) sup = dd;
                            }
                            consider(b1.value(static_cast<int>(p), s1), sup);
                        } while (next_tuple(s1, b1.size()));
                    }
                    if (v < decl.lo) v = decl.lo;
                    if (v > decl.hi) v = decl.hi;
                }
                table[c.tuple_offset(t)] = std::move(v);
            } while (next_tuple(t, n));
        }
        c.tables.push_back(std::move(table));
    }
    c.constant_points = b0.constant_points;
    return c;
}

AmalgamResult finish_two_block(const PointedStructure& left_source, const PointedStructure& right_source,
                               MetricStructure c, std::vector<int> right_map, const char* who) {
    const int m0 = left_source.structure->size();
    StructPtr cp;
    try {
        cp = make_structure(std::move(c));
    } catch (const DomainError& e) {
        throw DomainError(std::string(who) + ": no admissible common extension: " + e.what());
    }
    Embedding left{left_source, cp, {}};
    left.map.resize(m0);
    for (int i = 0; i < m0; ++i) left.map[i] = i;
    Embedding right{right_source, cp, std::move(right_map)};
    if (!is_embedding(left) || !is_embedding(right))
        throw std::logic_error(std::string(who) + ": constructed arm fails the embedding recheck");
    return {cp, std::move(left), std::move(right)};
}

}  // namespace

AmalgamResult free_amalgam(const PointedStructure& a, const Embedding& phi0, const Embedding& phi1) {
    if (!a.structure) throw DomainError("free_amalgam: null common part");
    if (!(phi0.source == a) || !(phi1.source == a))
        throw DomainError("free_amalgam: arms must share the given common part as source");
    if (!is_embedding(phi0) || !is_embedding(phi1)) throw DomainError("free_amalgam: arm is not an embedding");
    const MetricStructure& sa = *a.structure;
    if (sa.size() == 0) throw DomainError("free_amalgam: empty common part and no constants; use jep");

    const MetricStructure& b0 = *phi0.target;
    const MetricStructure& b1 = *phi1.target;
    const int m0 = b0.size();

    // b1 points already present through the common part keep their b0 copy.
    std::vector<int> right_map(b1.size(), -1);
    for (int ap = 0; ap < sa.size(); ++ap) right_map[phi1.map[ap]] = phi0.map[ap];

    std::vector<std::string> labels = b0.points;
    for (int j = 0; j < b1.size(); ++j) {
        if (right_map[j] < 0) {
            labels.push_back(fresh_label(labels, b1.points[j]));
            right_map[j] = static_cast<int>(labels.size()) - 1;
        }
    }
    const int n = static_cast<int>(labels.size());

    std::vector<Rational> dist(static_cast<std::size_t>(n) * n, Rational(0));
    auto at = [&dist, n](int i, int j) -> Rational& { return dist[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < m0; ++i) {
        for (int j = 0; j < m0; ++j) at(i, j) = b0.d(i, j);
    }
    for (int i = 0; i < b1.size(); ++i) {
        for (int j = 0; j < b1.size(); ++j) {
            if (right_map[i] >= m0 || right_map[j] >= m0) at(right_map[i], right_map[j]) = b1.d(i, j);
        }
    }
    // Path metric for genuinely cross pairs.
    for (int i = 0; i < m0; ++i) {
        for (int j = 0; j < b1.size(); ++j) {
            if (right_map[j] < m0) continue;
            Rational best;
            bool have = false;
            for (int ap = 0; ap < sa.size(); ++ap) {
                Rational cand = b0.d(i, phi0.map[ap]) + b1.d(phi1.map[ap], j);
                if (!have || cand < best) {
                    best = std::move(cand);
                    have = true;
                }
            }
            at(i, right_map[j]) = best;
            at(right_map[j], i) = std::move(best);
        }
    }

    if (b0.signature.diameter) {
        const Rational& cap = *b0.signature.diameter;
        for (int i = 0; i < m0; ++i) {
            for (int j = 0; j < b1.size(); ++j) {
                if (right_map[j] >= m0 && at(i, right_map[j]) > cap)
                    throw DomainError("free_amalgam: diameter cap exceeded at pair (" + b0.points[i] + ", " +
                                      b1.points[j] + ")");
            }
        }
    }

    MetricStructure c = assemble_two_block(b0, b1, right_map, std::move(labels), std::move(dist));
    AmalgamResult out = finish_two_block(pointed_on_all(phi0.target), pointed_on_all(phi1.target), std::move(c),
                                         std::move(right_map), "free_amalgam");
    for (int ap = 0; ap < sa.size(); ++ap) {
        if (out.left_arm.map[phi0.map[ap]] != out.right_arm.map[phi1.map[ap]])
            throw std::logic_error("free_amalgam: arms disagree on the common part");
    }
    return out;
}

AmalgamResult jep(const StructPtr& b0, const StructPtr& b1, const Rational& min_separation) {
    if (!b0 || !b1) throw DomainError("jep: null structure");
    if (b0->signature != b1->signature) throw SignatureMismatchError("jep: signatures differ");
    if (min_separation <= 0) throw DomainError("jep: minimum separation must be positive");

    if (!b0->signature.constants.empty()) {
        // Constants force amalgamation over the constant substructure.
        PointedStructure a = generated_substructure(b0, {});
        std::vector<int> sel;  // a's point i = b0 point sel[i]
        for (int cp : b0->constant_points) {
            if (std::find(sel.begin(), sel.end(), cp) == sel.end()) sel.push_back(cp);
        }
        Embedding phi0{a, b0, sel};
        Embedding phi1{a, b1, std::vector<int>(sel.size(), -1)};
        for (std::size_t k = 0; k < b0->constant_points.size(); ++k) {
            int ai = static_cast<int>(std::find(sel.begin(), sel.end(), b0->constant_points[k]) - sel.begin());
            int target = b1->constant_points[k];
            if (phi1.map[ai] >= 0 && phi1.map[ai] != target)
                throw DomainError("jep: constant substructures are incompatible (constant '" +
                                  b0->signature.constants[k] + "' split across the two sides)");
            phi1.map[ai] = target;
        }
        if (!is_embedding(phi1))
            throw DomainError("jep: constant substructures are incompatible (distances or predicate values differ)");
        return free_amalgam(a, phi0, phi1);
    }

    // Disjoint union at a constant cross distance.
    Rational c = std::max(b0->diameter(), b1->diameter()) / 2;
    for (std::size_t p = 0; p < b0->signature.predicates.size(); ++p) {
        const PredicateDecl& decl = b0->signature.predicates[p];
        for (const Rational& v0 : b0->tables[p]) {
            for (const Rational& v1 : b1->tables[p]) {
                Rational gap = rational_abs(v0 - v1);
                if (gap == 0) continue;
                if (decl.lipschitz == 0)
                    throw DomainError("jep: no admissible cross distance (zero-Lipschitz predicate '" + decl.name +
                                      "' takes different values on the two sides)");
                Rational need = gap / decl.lipschitz;
                if (need > c) c = std::move(need);
            }
        }
    }
    if (c == 0) c = min_separation;
    if (b0->signature.diameter && c > *b0->signature.diameter) c = *b0->signature.diameter;

    const int m0 = b0->size();
    std::vector<int> right_map(b1->size());
    std::vector<std::string> labels = b0->points;
    for (int j = 0; j < b1->size(); ++j) {
        labels.push_back(fresh_label(labels, b1->points[j]));
        right_map[j] = m0 + j;
    }
    const int n = static_cast<int>(labels.size());
    std::vector<Rational> dist(static_cast<std::size_t>(n) * n, Rational(0));
    auto at = [&dist, n](int i, int j) -> Rational& { return dist[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < m0; ++i) {
        for (int j = 0; j < m0; ++j) at(i, j) = b0->d(i, j);
    }
    for (int i = 0; i < b1->size(); ++i) {
        for (int j = 0; j < b1->size(); ++j) at(m0 + i, m0 + j) = b1->d(i, j);
    }
    for (int i = 0; i < m0; ++i) {
        for (int j = 0; j < b1->size(); ++j) {
            at(i, m0 + j) = c;
            at(m0 + j, i) = c;
        }
    }
    MetricStructure cs = assemble_two_block(*b0, *b1, right_map, std::move(labels), std::move(dist));
    return finish_two_block(pointed_on_all(b0), pointed_on_all(b1), std::move(cs), std::move(right_map), "jep");
}

namespace {

struct DistProblem {
    const MetricStructure* x;
    const MetricStructure* y;
    std::vector<char> pinned;       // mx * my, constants identified
    std::vector<Rational> lower;    // mx * my, predicate gap lower bounds
};

DistProblem dist_preamble(const PointedStructure& x, const PointedStructure& y) {
    require_generated(x, "dist_n");
    require_generated(y, "dist_n");
    if (x.structure->signature != y.structure->signature)
        throw SignatureMismatchError("dist_n: signatures differ");
    if (x.tuple.size() != y.tuple.size()) throw DomainError("dist_n: generator tuple arities differ");
    const MetricStructure& sx = *x.structure;
    const MetricStructure& sy = *y.structure;
    for (const PredicateDecl& decl : sx.signature.predicates) {
        if (decl.arity != 1)
            throw DomainError("dist_n: predicate '" + decl.name + "' has arity " + std::to_string(decl.arity) +
                              "; only unary predicates are supported here");
    }

    DistProblem prob{&sx, &sy, {}, {}};
    const int mx = sx.size(), my = sy.size();
    prob.pinned.assign(static_cast<std::size_t>(mx) * my, 0);
    prob.lower.assign(static_cast<std::size_t>(mx) * my, Rational(0));
    for (std::size_t k = 0; k < sx.constant_points.size(); ++k)
        prob.pinned[static_cast<std::size_t>(sx.constant_points[k]) * my + sy.constant_points[k]] = 1;
    for (std::size_t p = 0; p < sx.signature.predicates.size(); ++p) {
        const PredicateDecl& decl = sx.signature.predicates[p];
        for (int i = 0; i < mx; ++i) {
            for (int j = 0; j < my; ++j) {
                Rational gap = rational_abs(sx.tables[p][i] - sy.tables[p][j]);
                if (gap == 0) continue;
                if (decl.lipschitz == 0)
                    throw DomainError("dist_n: no joint embedding (zero-Lipschitz predicate '" + decl.name +
                                      "' separates '" + sx.points[i] + "' and '" + sy.points[j] + "')");
                Rational need = gap / decl.lipschitz;
                std::size_t off = static_cast<std::size_t>(i) * my + j;
                if (need > prob.lower[off]) prob.lower[off] = std::move(need);
            }
        }
    }
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) {
            std::size_t off = static_cast<std::size_t>(i) * my + j;
            if (prob.pinned[off] && prob.lower[off] > 0)
                throw DomainError("dist_n: no joint embedding (identified constants '" + sx.points[i] + "' and '" +
                                  sy.points[j] + "' carry different predicate values)");
        }
    }
    return prob;
}

}  // namespace

DistResult dist_n_with_witness(const PointedStructure& x, const PointedStructure& y) {
    DistProblem prob = dist_preamble(x, y);
    const MetricStructure& sx = *prob.x;
    const MetricStructure& sy = *prob.y;
    const int mx = sx.size(), my = sy.size();

    LinearProgram lp;
    const int t = lp.add_variable("t", Rational(0), std::nullopt);
    std::vector<int> var(static_cast<std::size_t>(mx) * my, -1);
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) {
            std::size_t off = static_cast<std::size_t>(i) * my + j;
            if (prob.pinned[off])
                var[off] = lp.add_variable("D:" + std::to_string(i) + ":" + std::to_string(j), Rational(0), Rational(0));
            else
                var[off] = lp.add_variable("D:" + std::to_string(i) + ":" + std::to_string(j), prob.lower[off],
                                           std::nullopt);
        }
    }
    // Four triangle families: cross sums dominate both intra metrics, and D
    // is 1-Lipschitz in each argument. Together with nonnegativity they make
    // dist || D a genuine pseudometric on the disjoint union, so the LP
    // infimum is attained by an actual joint embedding.
    for (int i = 0; i < mx; ++i) {
        for (int i2 = i + 1; i2 < mx; ++i2) {
            for (int j = 0; j < my; ++j) {
                int dij = var[static_cast<std::size_t>(i) * my + j];
                int di2j = var[static_cast<std::size_t>(i2) * my + j];
                lp.add_constraint({{dij, 1}, {di2j, 1}}, Relation::GreaterEq, sx.d(i, i2));
                lp.add_constraint({{dij, 1}, {di2j, -1}}, Relation::LessEq, sx.d(i, i2));
                lp.add_constraint({{di2j, 1}, {dij, -1}}, Relation::LessEq, sx.d(i, i2));
            }
        }
    }
    for (int j = 0; j < my; ++j) {
        for (int j2 = j + 1; j2 < my; ++j2) {
            for (int i = 0; i < mx; ++i) {
                int dij = var[static_cast<std::size_t>(i) * my + j];
                int dij2 = var[static_cast<std::size_t>(i) * my + j2];
                lp.add_constraint({{dij, 1}, {dij2, 1}}, Relation::GreaterEq, sy.d(j, j2));
                lp.add_constraint({{dij, 1}, {dij2, -1}}, Relation::LessEq, sy.d(j, j2));
                lp.add_constraint({{dij2, 1}, {dij, -1}}, Relation::LessEq, sy.d(j, j2));
            }
        }
    }
    for (std::size_t k = 0; k < x.tuple.size(); ++k) {
        lp.add_constraint({{var[static_cast<std::size_t>(x.tuple[k]) * my + y.tuple[k]], 1}, {t, -1}},
                          Relation::LessEq, Rational(0));
    }
    lp.set_objective(Direction::Minimize, {{t, 1}});

    LPOutcome out = solve(lp);
    if (out.status == LPStatus::Infeasible)
        throw DomainError("dist_n: no joint embedding (constant identifications are inconsistent)");
    if (out.status != LPStatus::Optimal) throw std::logic_error("dist_n: LP unexpectedly unbounded");

    // The four families force dist || D to be a pseudometric already, so the
    // shortest-path closure below is a pure consistency check: nothing may
    // move, and the optimum must be attained verbatim.
    const int n = mx + my;
    std::vector<Rational> m(static_cast<std::size_t>(n) * n, Rational(0));
    auto at = [&m, n](int i, int j) -> Rational& { return m[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < mx; ++j) at(i, j) = sx.d(i, j);
    }
    for (int i = 0; i < my; ++i) {
        for (int j = 0; j < my; ++j) at(mx + i, mx + j) = sy.d(i, j);
    }
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) {
            const Rational& v = out.assignment[var[static_cast<std::size_t>(i) * my + j]];
            at(i, mx + j) = v;
            at(mx + j, i) = v;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Rational through = at(i, k) + at(k, j);
                if (through < at(i, j)) at(i, j) = std::move(through);
            }
        }
    }
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < mx; ++j) {
            if (at(i, j) != sx.d(i, j)) throw std::logic_error("dist_n: repair altered the left metric");
        }
    }
    for (int i = 0; i < my; ++i) {
        for (int j = 0; j < my; ++j) {
            if (at(mx + i, mx + j) != sy.d(i, j)) throw std::logic_error("dist_n: repair altered the right metric");
        }
    }
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) {
            if (at(i, mx + j) != out.assignment[var[static_cast<std::size_t>(i) * my + j]])
                throw std::logic_error("dist_n: LP solution was not a pseudometric");
        }
    }

    DistResult res;
    res.cross.reserve(static_cast<std::size_t>(mx) * my);
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) res.cross.push_back(at(i, mx + j));
    }
    Rational attained = 0;
    for (std::size_t k = 0; k < x.tuple.size(); ++k) {
        const Rational& v = res.cross[static_cast<std::size_t>(x.tuple[k]) * my + y.tuple[k]];
        if (v > attained) attained = v;
    }
    if (attained != out.optimum) throw std::logic_error("dist_n: repaired witness misses the LP optimum");
    res.value = std::move(attained);
    return res;
}

Rational dist_n(const PointedStructure& x, const PointedStructure& y) { return dist_n_with_witness(x, y).value; }

AmalgamResult realize_dist_witness(const PointedStructure& x, const PointedStructure& y, const DistResult& w) {
    dist_preamble(x, y);  // revalidates shapes and predicate support
    const MetricStructure& sx = *x.structure;
    const MetricStructure& sy = *y.structure;
    const int mx = sx.size(), my = sy.size();
    if (w.cross.size() != static_cast<std::size_t>(mx) * my)
        throw DomainError("realize_dist_witness: witness has the wrong shape");

    // Zero cross distances identify a y point with its (unique) x partner.
    std::vector<int> right_map(my, -1);
    std::vector<std::string> labels = sx.points;
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            if (w.cross[static_cast<std::size_t>(i) * my + j] == 0) {
                right_map[j] = i;
                break;
            }
        }
        if (right_map[j] < 0) {
            labels.push_back(fresh_label(labels, sy.points[j]));
            right_map[j] = static_cast<int>(labels.size()) - 1;
        }
    }
    const int n = static_cast<int>(labels.size());
    std::vector<Rational> dist(static_cast<std::size_t>(n) * n, Rational(0));
    auto at = [&dist, n](int i, int j) -> Rational& { return dist[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < mx; ++j) at(i, j) = sx.d(i, j);
    }
    for (int i = 0; i < my; ++i) {
        for (int j = 0; j < my; ++j) {
            if (right_map[i] >= mx || right_map[j] >= mx) at(right_map[i], right_map[j]) = sy.d(i, j);
        }
    }
    for (int i = 0; i < mx; ++i) {
        for (int j = 0; j < my; ++j) {
            if (right_map[j] >= mx) {
                at(i, right_map[j]) = w.cross[static_cast<std::size_t>(i) * my + j];
                at(right_map[j], i) = w.cross[static_cast<std::size_t>(i) * my + j];
            }
        }
    }
    MetricStructure c = assemble_two_block(sx, sy, right_map, std::move(labels), std::move(dist));
    return finish_two_block(x, y, std::move(c), std::move(right_map), "realize_dist_witness");
}

StructPtr extend_one_point(const ExtensionRequest& req) {
    if (!req.base) throw DomainError("extend_one_point: null base");
    const MetricStructure& b = *req.base;
    if (req.distances.size() != static_cast<std::size_t>(b.size()))
        throw DomainError("extend_one_point: need one distance per base point");
    if (req.predicate_values.size() != b.signature.predicates.size())
        throw DomainError("extend_one_point: need one value per predicate");
    for (const PredicateDecl& decl : b.signature.predicates) {
        if (decl.arity != 1)
            throw DomainError("extend_one_point: predicate '" + decl.name +
                              "' is not unary; a single point cannot determine its mixed tuples");
    }
    if (b.point_index(req.new_point_label) >= 0)
        throw DomainError("extend_one_point: label '" + req.new_point_label + "' already names a base point");

    for (int i = 0; i < b.size(); ++i) {
        if (req.distances[i] <= 0)
            throw DomainError("extend_one_point: distance to '" + b.points[i] + "' must be positive");
        if (b.signature.diameter && req.distances[i] > *b.signature.diameter)
            throw DomainError("extend_one_point: distance to '" + b.points[i] + "' exceeds the diameter cap");
    }
    for (int i = 0; i < b.size(); ++i) {
        for (int j = i + 1; j < b.size(); ++j) {
            if (rational_abs(req.distances[i] - req.distances[j]) > b.d(i, j) ||
                b.d(i, j) > req.distances[i] + req.distances[j])
                throw DomainError("extend_one_point: Katetov condition fails at pair (" + b.points[i] + ", " +
                                  b.points[j] + ")");
        }
    }
    for (std::size_t p = 0; p < b.signature.predicates.size(); ++p) {
        const PredicateDecl& decl = b.signature.predicates[p];
        const Rational& v = req.predicate_values[p];
        if (v < decl.lo || v > decl.hi)
            throw DomainError("extend_one_point: value for predicate '" + decl.name + "' is outside its range");
        for (int i = 0; i < b.size(); ++i) {
            if (rational_abs(v - b.tables[p][i]) > decl.lipschitz * req.distances[i])
                throw DomainError("extend_one_point: Lipschitz condition for predicate '" + decl.name +
                                  "' fails against point '" + b.points[i] + "'");
        }
    }

    MetricStructure out;
    out.signature = b.signature;
    out.points = b.points;
    out.points.push_back(req.new_point_label);
    const int n = out.size();
    out.dist.assign(static_cast<std::size_t>(n) * n, Rational(0));
    for (int i = 0; i < b.size(); ++i) {
        for (int j = 0; j < b.size(); ++j) out.dist[static_cast<std::size_t>(i) * n + j] = b.d(i, j);
    }
    for (int i = 0; i < b.size(); ++i) {
        out.dist[static_cast<std::size_t>(i) * n + (n - 1)] = req.distances[i];
        out.dist[static_cast<std::size_t>(n - 1) * n + i] = req.distances[i];
    }
    for (std::size_t p = 0; p < b.tables.size(); ++p) {
        std::vector<Rational> table = b.tables[p];
        table.push_back(req.predicate_values[p]);
        out.tables.push_back(std::move(table));
    }
    out.constant_points = b.constant_points;
    return make_structure(std::move(out));
}

}  // namespace fraisse
