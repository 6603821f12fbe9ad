#include "fraisse/ramsey.hpp"

#include "fraisse/errors.hpp"
#include "fraisse/ratlp.hpp"
#include "fraisse/rng.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fraisse {

void check_coloring(const Coloring& gamma) {
    if (!gamma.domain) throw DomainError("coloring: domain is unset");
    const EmbeddingSet& dom = *gamma.domain;
    if (gamma.values.size() != static_cast<std::size_t>(dom.size()))
        throw DomainError("coloring: value count differs from domain size");
    for (const Rational& v : gamma.values) {
        if (v < 0 || v > 1) throw DomainError("coloring: value outside [0, 1]");
    }
    for (int i = 0; i < dom.size(); ++i) {
        for (int j = i + 1; j < dom.size(); ++j) {
            Rational gap = gamma.values[i] - gamma.values[j];
            if (gap < 0) gap = -gap;
            if (gap > rho(dom[i], dom[j]))
                throw DomainError("coloring: Lipschitz bound violated between members " + std::to_string(i) +
                                  " and " + std::to_string(j));
        }
    }
}

bool is_valid_coloring(const Coloring& gamma) {
    try {
        check_coloring(gamma);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

const Rational& coloring_value(const Coloring& gamma, const Embedding& e) {
    if (!gamma.domain) throw DomainError("coloring: domain is unset");
    int idx = gamma.domain->index_of(e);
    if (idx < 0) throw DomainError("coloring: embedding is not in the domain");
    return gamma.values[idx];
}

Rational oscillation(const Coloring& gamma, const std::vector<Embedding>& members) {
    if (members.empty()) throw DomainError("oscillation over an empty family");
    Rational lo = coloring_value(gamma, members.front());
    Rational hi = lo;
    for (std::size_t t = 1; t < members.size(); ++t) {
        const Rational& v = coloring_value(gamma, members[t]);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return hi - lo;
}

namespace {

bool same_structure(const StructPtr& s, const StructPtr& t) {
    return s == t || (s && t && *s == *t);
}

void validate_instance(const RamseyInstance& inst) {
    if (!inst.a.structure || !inst.b || !inst.c) throw DomainError("ramsey: instance structures must be set");
    if (inst.f.empty()) throw DomainError("ramsey: F must be nonempty");
    if (!(inst.epsilon > 0)) throw DomainError("ramsey: epsilon must be positive");
    for (std::size_t i = 0; i < inst.f.size(); ++i) {
        const Embedding& e = inst.f[i];
        if (!(e.source == inst.a)) throw DomainError("ramsey: F member source differs from A");
        if (!same_structure(e.target, inst.b)) throw DomainError("ramsey: F member target differs from B");
        for (std::size_t j = 0; j < i; ++j) {
            if (inst.f[j] == e) throw DomainError("ramsey: F members must be pairwise distinct");
        }
    }
}

// One deduplicated branching unit: a beta is represented by the set of
// ordered coordinate pairs its F-copies induce inside Emb(A, C); betas with
// equal pair sets impose identical constraints.
struct BranchBeta {
    std::vector<std::pair<int, int>> pairs;  // sorted, distinct coordinates only
    Rational diam;                           // max rho over the pairs
};

struct NodeSolution {
    Rational value;
    std::vector<std::pair<int, Rational>> touched;  // coordinate -> gamma value
};

// max v subject to: gamma in the Lipschitz polytope restricted to the touched
// coordinates (a projection of the full polytope, by McShane extension),
// gamma_i - gamma_j >= v per selected pair, 0 <= v <= cap.
NodeSolution solve_node(const std::vector<std::pair<int, int>>& selected, const Rational& cap,
                        const std::vector<std::vector<Rational>>& dist) {
    LinearProgram lp;
    int v = lp.add_variable("v", Rational(0), cap);
    std::map<int, int> var_of;
    for (const auto& [i, j] : selected) {
        for (int c : {i, j}) {
            if (!var_of.count(c)) var_of[c] = lp.add_variable("g" + std::to_string(c), Rational(0), Rational(1));
        }
    }
    for (auto u = var_of.begin(); u != var_of.end(); ++u) {
        for (auto w = std::next(u); w != var_of.end(); ++w) {
            const Rational& r = dist[u->first][w->first];
            if (r >= 1) continue;  // implied by the [0, 1] box
            lp.add_constraint({{u->second, Rational(1)}, {w->second, Rational(-1)}}, Relation::LessEq, r);
            lp.add_constraint({{w->second, Rational(1)}, {u->second, Rational(-1)}}, Relation::LessEq, r);
        }
    }
    for (const auto& [i, j] : selected)
        lp.add_constraint({{var_of[i], Rational(1)}, {var_of[j], Rational(-1)}, {v, Rational(-1)}},
                          Relation::GreaterEq, Rational(0));
    lp.set_objective(Direction::Maximize, {{v, Rational(1)}});
    LPOutcome out = solve(lp);
    if (out.status != LPStatus::Optimal) throw std::logic_error("ramsey: node LP must have an optimum");
    NodeSolution sol;
    sol.value = out.optimum;
    sol.touched.reserve(var_of.size());
    for (const auto& [coord, var] : var_of) sol.touched.push_back({coord, out.assignment[var]});
    return sol;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

VerifierReport worst_coloring(const RamseyInstance& inst, const SearchLimits& limits) {
    validate_instance(inst);
    VerifierReport rep;
    rep.epsilon = inst.epsilon;

    EmbeddingSet emb_bc = enumerate_embeddings(pointed_on_all(inst.b), inst.c);
    if (emb_bc.members.empty()) {
        rep.status = VerifierStatus::NoEmbedding;
        return rep;
    }
    auto domain = std::make_shared<EmbeddingSet>(enumerate_embeddings(inst.a, inst.c));
    const int m = domain->size();
    const int k = static_cast<int>(inst.f.size());

    // Coordinates of each composed copy beta o alpha_t inside Emb(A, C).
    std::vector<std::vector<int>> coords(emb_bc.members.size(), std::vector<int>(k));
    for (std::size_t b = 0; b < emb_bc.members.size(); ++b) {
        for (int t = 0; t < k; ++t) {
            int idx = domain->index_of(compose(emb_bc[static_cast<int>(b)], inst.f[t]));
            if (idx < 0) throw std::logic_error("ramsey: composed embedding escaped Emb(A, C)");
            coords[b][t] = idx;
        }
    }

    std::vector<std::vector<Rational>> dist(m, std::vector<Rational>(m, Rational(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) dist[i][j] = dist[j][i] = rho((*domain)[i], (*domain)[j]);
    }

    // Deduplicate betas by their pair sets; a beta whose copies all coincide
    // pins the adversarial value at 0 outright.
    bool trivially_zero = false;
    std::vector<BranchBeta> betas;
    std::set<std::vector<std::pair<int, int>>> seen;
    for (std::size_t b = 0; b < coords.size() && !trivially_zero; ++b) {
        std::set<std::pair<int, int>> ps;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                if (coords[b][i] != coords[b][j]) ps.insert({coords[b][i], coords[b][j]});
            }
        }
        if (ps.empty()) {
            trivially_zero = true;
            break;
        }
        std::vector<std::pair<int, int>> pairs(ps.begin(), ps.end());
        if (!seen.insert(pairs).second) continue;
        BranchBeta bb;
        bb.pairs = std::move(pairs);
        bb.diam = 0;
        for (const auto& [i, j] : bb.pairs) bb.diam = std::max(bb.diam, dist[i][j]);
        betas.push_back(std::move(bb));
    }

    Rational best_val = 0;
    std::vector<std::pair<int, Rational>> best_touched;
    std::uint64_t nodes = 0;
    bool aborted = false;
    Rational abort_upper = 0;

    if (!trivially_zero) {
        Rational cap = betas.front().diam;
        for (const BranchBeta& bb : betas) cap = std::min(cap, bb.diam);

        // Depth-first branch and bound in deterministic order: betas in first
        // occurrence order, pairs ascending. Every explored node solves one LP.
        std::vector<std::pair<int, int>> selected;
        auto dfs = [&](auto&& self, std::size_t depth) -> void {
            if (nodes >= limits.node_budget) {
                aborted = true;
                // An aborted non-root node is covered by its parent's bound
                // during unwinding; aborting at the root leaves only the cap.
                abort_upper = depth == 0 ? cap : best_val;
                return;
            }
            ++nodes;
            NodeSolution sol = solve_node(selected, cap, dist);
            if (depth == betas.size()) {
                if (sol.value > best_val) {
                    best_val = sol.value;
                    best_touched = std::move(sol.touched);
                }
                return;
            }
            if (sol.value <= best_val) return;  // cannot strictly improve
            for (const auto& pr : betas[depth].pairs) {
                selected.push_back(pr);
                self(self, depth + 1);
                selected.pop_back();
                if (aborted) {
                    abort_upper = std::max(abort_upper, sol.value);
                    return;
                }
                if (sol.value <= best_val) break;  // bound reached by a subtree
            }
        };
        dfs(dfs, 0);
    }

    // Extend the winning leaf values to a full coloring by truncated McShane
    // extension; at touched coordinates this reproduces the LP values.
    std::vector<Rational> gvals(m, Rational(0));
    if (!best_touched.empty()) {
        for (int w = 0; w < m; ++w) {
            Rational val(1);
            for (const auto& [u, gu] : best_touched) val = std::min(val, Rational(gu + dist[w][u]));
            gvals[w] = std::move(val);
        }
    }
    rep.worst_coloring = Coloring{domain, std::move(gvals)};
    try {
        check_coloring(rep.worst_coloring);
    } catch (const DomainError& e) {
        throw std::logic_error(std::string("ramsey: constructed witness coloring failed its invariant: ") + e.what());
    }

    // Exact recomputation of the best response over all of Emb(B, C); for an
    // exact search this must reproduce the optimum.
    int best_b = -1;
    Rational best_osc;
    for (std::size_t b = 0; b < coords.size(); ++b) {
        Rational lo = rep.worst_coloring.values[coords[b][0]];
        Rational hi = lo;
        for (int t = 1; t < k; ++t) {
            const Rational& v = rep.worst_coloring.values[coords[b][t]];
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        Rational osc = hi - lo;
        if (best_b < 0 || osc < best_osc) {
            best_b = static_cast<int>(b);
            best_osc = std::move(osc);
        }
    }
    rep.best_beta_per_coloring = emb_bc[best_b];
    rep.nodes_explored = nodes;

    if (aborted) {
        if (best_osc < best_val) throw std::logic_error("ramsey: witness oscillation fell below the certified bound");
        rep.status = VerifierStatus::Inconclusive;
        rep.worst_value = best_osc;  // certified by the witness coloring itself
        rep.upper_bound = std::max(abort_upper, best_osc);
    } else {
        if (best_osc != best_val)
            throw std::logic_error("ramsey: witness recomputation disagrees with the search optimum");
        rep.status = VerifierStatus::Exact;
        rep.worst_value = best_val;
        rep.upper_bound = best_val;
    }
    rep.holds = rep.upper_bound <= inst.epsilon;
    return rep;
}

bool check_arp_instance(const RamseyInstance& inst, const SearchLimits& limits) {
    VerifierReport rep = worst_coloring(inst, limits);
    switch (rep.status) {
        case VerifierStatus::NoEmbedding:
            return false;
        case VerifierStatus::Exact:
            return rep.worst_value <= inst.epsilon;
        case VerifierStatus::Inconclusive:
            if (rep.upper_bound <= inst.epsilon) return true;
            if (rep.worst_value > inst.epsilon) return false;
            throw ResourceLimitError("ramsey: node budget exhausted before the instance could be decided",
                                     rep.nodes_explored);
    }
    throw std::logic_error("ramsey: unreachable verifier status");
}

std::pair<Embedding, Rational> best_beta(const Coloring& gamma, const RamseyInstance& inst) {
    validate_instance(inst);
    check_coloring(gamma);
    if (!(gamma.domain->source == inst.a)) throw DomainError("best_beta: coloring domain source is not A");
    if (!same_structure(gamma.domain->target, inst.c)) throw DomainError("best_beta: coloring domain target is not C");
    EmbeddingSet full = enumerate_embeddings(inst.a, inst.c);
    if (!(full.members == gamma.domain->members)) throw DomainError("best_beta: coloring domain is not Emb(A, C)");

    EmbeddingSet emb_bc = enumerate_embeddings(pointed_on_all(inst.b), inst.c);
    if (emb_bc.members.empty()) throw DomainError("best_beta: Emb(B, C) is empty");
    int best = -1;
    Rational best_osc;
    for (int b = 0; b < emb_bc.size(); ++b) {
        Rational osc = oscillation(gamma, push_forward(inst.f, emb_bc[b]));
        if (best < 0 || osc < best_osc) {
            best = b;
            best_osc = std::move(osc);
        }
    }
    return {emb_bc[best], best_osc};
}

Coloring random_coloring(const std::shared_ptr<const EmbeddingSet>& domain, std::uint64_t seed) {
    if (!domain || domain->members.empty()) throw DomainError("random_coloring: empty domain");
    const int m = domain->size();
    Rng rng(seed);
    std::vector<char> in_s(m, 0);
    bool nonempty = false;
    while (!nonempty) {
        for (int i = 0; i < m; ++i) {
            in_s[i] = rng.coin() ? 1 : 0;
            nonempty = nonempty || in_s[i];
        }
    }
    Coloring gamma;
    gamma.domain = domain;
    gamma.values.reserve(m);
    for (int i = 0; i < m; ++i) {
        Rational v(1);
        for (int j = 0; j < m && v > 0; ++j) {
            if (in_s[j]) v = std::min(v, rho((*domain)[i], (*domain)[j]));
        }
        gamma.values.push_back(std::move(v));
    }
    return gamma;
}

bool eps_approximates(const StructPtr& bp, const std::vector<Embedding>& primes, const PointedStructure& a,
                      const std::vector<Embedding>& originals, const Rational& epsilon) {
    if (!bp || !a.structure) throw DomainError("eps_approximates: structures must be set");
    if (primes.size() != originals.size()) throw DomainError("eps_approximates: lists differ in length");
    if (epsilon < 0) throw DomainError("eps_approximates: epsilon must be nonnegative");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (const Embedding* e : {&primes[i], &originals[i]}) {
            if (!(e->source == a)) throw DomainError("eps_approximates: embedding source differs from A");
            if (!same_structure(e->target, bp)) throw DomainError("eps_approximates: embedding target differs from B'");
        }
        for (int p : a.tuple) {
            if (bp->d(primes[i].map[p], originals[i].map[p]) > epsilon) return false;
        }
    }
    return true;
}

std::string to_text(const VerifierReport& report) {
    std::ostringstream out;
    out << "ramsey-verifier v1\n";
    switch (report.status) {
        case VerifierStatus::Exact:
            out << "status exact\n";
            break;
        case VerifierStatus::Inconclusive:
            out << "status inconclusive\n";
            break;
        case VerifierStatus::NoEmbedding:
            out << "status no-embedding\n";
            break;
    }
    out << "epsilon " << to_string(report.epsilon) << "\n";
    if (report.status == VerifierStatus::NoEmbedding) {
        out << "worst_value +inf\n";
        out << "upper_bound +inf\n";
        out << "holds no\n";
    } else {
        out << "worst_value " << to_string(report.worst_value) << "\n";
        out << "upper_bound " << to_string(report.upper_bound) << "\n";
        if (report.upper_bound <= report.epsilon)
            out << "holds yes\n";
        else if (report.worst_value > report.epsilon)
            out << "holds no\n";
        else
            out << (report.status == VerifierStatus::Exact ? "holds no\n" : "holds unknown\n");
    }
    out << "nodes " << report.nodes_explored << "\n";
    if (report.worst_coloring.domain) {
        out << "coloring";
        for (const Rational& v : report.worst_coloring.values) out << " " << to_string(v);
        out << "\n";
    }
    if (report.best_beta_per_coloring) {
        out << "best_beta";
        for (int p : report.best_beta_per_coloring->map) out << " " << p;
        out << "\n";
    }
    std::string body = out.str();
    std::ostringstream digest;
    digest << "digest " << std::hex << std::setw(16) << std::setfill('0') << fnv1a(body) << "\n";
    return body + digest.str();
}

}  // namespace fraisse
