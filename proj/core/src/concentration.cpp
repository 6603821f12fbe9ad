#include "fraisse/concentration.hpp"

#include "fraisse/errors.hpp"
#include "fraisse/numeric_bounds.hpp"
#include "fraisse/rng.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace fraisse {

namespace {

bool same_structure(const StructPtr& x, const StructPtr& y) {
    return x == y || (x && y && *x == *y);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xfu];
        v >>= 4;
    }
    return out;
}

void require_automorphism(const Embedding& g, const StructPtr& carrier, const char* who) {
    const int n = carrier->size();
    if (!g.source.structure || !same_structure(g.source.structure, carrier) || !same_structure(g.target, carrier)) {
        throw DomainError(std::string(who) + ": generator is not a self-map of the carrier");
    }
    if (static_cast<int>(g.map.size()) != n) {
        throw DomainError(std::string(who) + ": generator map does not cover the carrier");
    }
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (int image : g.map) {
        if (image < 0 || image >= n || hit[static_cast<std::size_t>(image)]) {
            throw DomainError(std::string(who) + ": generator map is not a permutation");
        }
        hit[static_cast<std::size_t>(image)] = 1;
    }
    if (!is_embedding(g)) {
        throw DomainError(std::string(who) + ": generator does not preserve the structure");
    }
}

void require_group_tables(const GroupAction& g, const char* who) {
    const std::size_t h = g.elements.size();
    if (!g.carrier || h == 0) throw DomainError(std::string(who) + ": group action is empty");
    if (g.delta.size() != h || g.comp.size() != h || g.inverse.size() != h) {
        throw DomainError(std::string(who) + ": group tables are missing");
    }
}

}  // namespace

GroupAction group_closure(const StructPtr& b, const std::vector<Embedding>& generators, const ClosureCaps& caps,
                          std::optional<std::vector<int>> base_tuple) {
    if (!b) throw DomainError("group_closure: carrier must be set");
    const int npts = b->size();
    GroupAction g;
    g.carrier = b;
    if (base_tuple) {
        g.base_tuple = std::move(*base_tuple);
    } else {
        g.base_tuple.resize(static_cast<std::size_t>(npts));
        for (int p = 0; p < npts; ++p) g.base_tuple[static_cast<std::size_t>(p)] = p;
    }
    std::vector<char> covered(static_cast<std::size_t>(npts), 0);
    for (int p : g.base_tuple) {
        if (p < 0 || p >= npts) throw DomainError("group_closure: base tuple entry out of range");
        covered[static_cast<std::size_t>(p)] = 1;
    }
    for (int c : b->constant_points) covered[static_cast<std::size_t>(c)] = 1;
    for (int p = 0; p < npts; ++p) {
        if (!covered[static_cast<std::size_t>(p)]) {
            throw DomainError("group_closure: base tuple plus constants must cover the carrier");
        }
    }
    for (const Embedding& gen : generators) require_automorphism(gen, b, "group_closure");

    // Breadth-first closure over right-appended words; in a finite group this
    // reaches every inverse as well. Maps are composed directly, the Embedding
    // wrappers are materialized afterwards.
    std::vector<int> identity(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) identity[static_cast<std::size_t>(p)] = p;
    std::vector<std::vector<int>> maps;
    std::map<std::vector<int>, int> index;
    maps.push_back(identity);
    index.emplace(identity, 0);
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier) {
            for (const Embedding& gen : generators) {
                std::vector<int> prod(static_cast<std::size_t>(npts));
                for (int p = 0; p < npts; ++p) {
                    prod[static_cast<std::size_t>(p)] = maps[static_cast<std::size_t>(x)][static_cast<std::size_t>(gen.map[static_cast<std::size_t>(p)])];
                }
                auto [it, fresh] = index.try_emplace(std::move(prod), static_cast<int>(maps.size()));
                if (fresh) {
                    if (static_cast<int>(maps.size()) >= caps.element_cap) {
                        throw ResourceLimitError("group_closure: element cap exceeded", maps.size());
                    }
                    maps.push_back(it->first);
                    next.push_back(it->second);
                }
            }
        }
        frontier = std::move(next);
    }

    const int h = static_cast<int>(maps.size());
    if (h > caps.table_cap) {
        throw ResourceLimitError("group_closure: group too large for the delta/comp tables", static_cast<std::uint64_t>(h));
    }
    const PointedStructure all = pointed_on_all(b);
    g.elements.reserve(static_cast<std::size_t>(h));
    for (const std::vector<int>& m : maps) {
        Embedding e;
        e.source = all;
        e.target = b;
        e.map = m;
        g.elements.push_back(std::move(e));
    }
    for (const Embedding& gen : generators) g.generators.push_back(index.at(gen.map));

    g.comp.assign(static_cast<std::size_t>(h), std::vector<int>(static_cast<std::size_t>(h), -1));
    for (int x = 0; x < h; ++x) {
        for (int y = 0; y < h; ++y) {
            std::vector<int> prod(static_cast<std::size_t>(npts));
            for (int p = 0; p < npts; ++p) {
                prod[static_cast<std::size_t>(p)] =
                    maps[static_cast<std::size_t>(x)][static_cast<std::size_t>(maps[static_cast<std::size_t>(y)][static_cast<std::size_t>(p)])];
            }
            auto it = index.find(prod);
            if (it == index.end()) throw std::logic_error("group_closure: closure is not closed under composition");
            g.comp[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = it->second;
        }
    }
    g.inverse.assign(static_cast<std::size_t>(h), -1);
    for (int x = 0; x < h; ++x) {
        std::vector<int> inv(static_cast<std::size_t>(npts));
        for (int p = 0; p < npts; ++p) inv[static_cast<std::size_t>(maps[static_cast<std::size_t>(x)][static_cast<std::size_t>(p)])] = p;
        auto it = index.find(inv);
        if (it == index.end()) throw std::logic_error("group_closure: closure is missing an inverse");
        g.inverse[static_cast<std::size_t>(x)] = it->second;
    }

    // delta(x, y) = delta0(x^{-1} y): automorphisms are isometries of the
    // carrier, so the distance to the identity determines the whole table.
    std::vector<Rational> d0(static_cast<std::size_t>(h), Rational(0));
    for (int z = 1; z < h; ++z) {
        Rational best(0);
        for (int w = 0; w < h; ++w) {
            const int zw = g.comp[static_cast<std::size_t>(z)][static_cast<std::size_t>(w)];
            for (int p : g.base_tuple) {
                const Rational& dd = b->d(maps[static_cast<std::size_t>(w)][static_cast<std::size_t>(p)],
                                          maps[static_cast<std::size_t>(zw)][static_cast<std::size_t>(p)]);
                if (dd > best) best = dd;
            }
        }
        d0[static_cast<std::size_t>(z)] = best;
    }
    g.delta.assign(static_cast<std::size_t>(h), std::vector<Rational>(static_cast<std::size_t>(h)));
    for (int x = 0; x < h; ++x) {
        for (int y = 0; y < h; ++y) {
            g.delta[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                d0[static_cast<std::size_t>(g.comp[static_cast<std::size_t>(g.inverse[static_cast<std::size_t>(x)])][static_cast<std::size_t>(y)])];
        }
    }
    return g;
}

PowerStructure l1_power(const StructPtr& b, int n, long long point_cap) {
    if (!b) throw DomainError("l1_power: base must be set");
    if (n < 1) throw DomainError("l1_power: exponent must be at least 1");
    if (b->size() == 0) throw DomainError("l1_power: base must have at least one point");
    if (!is_valid(*b)) throw DomainError("l1_power: base fails validation");
    for (const PredicateDecl& p : b->signature.predicates) {
        if (p.arity != 1) {
            throw DomainError("l1_power: predicate '" + p.name +
                              "' has arity >= 2; coordinate averaging is only Lipschitz for unary predicates");
        }
    }
    const int m = b->size();
    long long npoints = 1;
    for (int t = 0; t < n; ++t) {
        npoints *= m;
        if (npoints > point_cap) {
            throw ResourceLimitError("l1_power: point count exceeds the cap", static_cast<std::uint64_t>(point_cap));
        }
    }
    if (npoints > std::numeric_limits<int>::max()) {
        throw ResourceLimitError("l1_power: point count exceeds the representable range",
                                 static_cast<std::uint64_t>(point_cap));
    }

    bool plain_labels = true;
    for (const std::string& lab : b->points) {
        if (lab.find(',') != std::string::npos || lab.find('(') != std::string::npos ||
            lab.find(')') != std::string::npos) {
            plain_labels = false;
            break;
        }
    }

    const std::size_t count = static_cast<std::size_t>(npoints);
    std::vector<std::vector<int>> tuples;
    tuples.reserve(count);
    std::vector<int> t(static_cast<std::size_t>(n), 0);
    do {
        tuples.push_back(t);
    } while (next_tuple(t, m));
    if (tuples.size() != count) throw std::logic_error("l1_power: tuple enumeration miscounted");

    MetricStructure s;
    s.signature = b->signature;
    s.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (plain_labels) {
            std::string lab = "(";
            for (int j = 0; j < n; ++j) {
                if (j > 0) lab += ',';
                lab += b->points[static_cast<std::size_t>(tuples[i][static_cast<std::size_t>(j)])];
            }
            lab += ')';
            s.points.push_back(std::move(lab));
        } else {
            s.points.push_back("t" + std::to_string(i));
        }
    }
    s.dist.assign(count * count, Rational(0));
    const Rational inv_n(1, n);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            Rational sum(0);
            for (int k = 0; k < n; ++k) {
                sum += b->d(tuples[i][static_cast<std::size_t>(k)], tuples[j][static_cast<std::size_t>(k)]);
            }
            sum *= inv_n;
            s.dist[i * count + j] = sum;
            s.dist[j * count + i] = std::move(sum);
        }
    }
    s.tables.resize(b->signature.predicates.size());
    for (std::size_t p = 0; p < s.tables.size(); ++p) {
        s.tables[p].reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            Rational sum(0);
            for (int k = 0; k < n; ++k) {
                sum += b->tables[p][static_cast<std::size_t>(tuples[i][static_cast<std::size_t>(k)])];
            }
            s.tables[p].push_back(sum * inv_n);
        }
    }
    for (int c : b->constant_points) {
        long long idx = 0;
        for (int k = 0; k < n; ++k) idx = idx * m + c;
        s.constant_points.push_back(static_cast<int>(idx));
    }

    PowerStructure out;
    out.base = b;
    out.n = n;
    try {
        out.structure = make_structure(std::move(s));
    } catch (const DomainError& e) {
        throw std::logic_error(std::string("l1_power: constructed power failed validation: ") + e.what());
    }
    return out;
}

int power_index(const PowerStructure& p, const std::vector<int>& tuple) {
    if (!p.base || !p.structure) throw DomainError("power_index: power must be constructed");
    if (static_cast<int>(tuple.size()) != p.n) throw DomainError("power_index: tuple arity mismatch");
    const int m = p.base->size();
    long long idx = 0;
    for (int v : tuple) {
        if (v < 0 || v >= m) throw DomainError("power_index: tuple entry out of range");
        idx = idx * m + v;
    }
    return static_cast<int>(idx);
}

std::vector<int> power_tuple(const PowerStructure& p, int index) {
    if (!p.base || !p.structure) throw DomainError("power_tuple: power must be constructed");
    if (index < 0 || index >= p.structure->size()) throw DomainError("power_tuple: index out of range");
    const int m = p.base->size();
    std::vector<int> tuple(static_cast<std::size_t>(p.n));
    int rest = index;
    for (int k = p.n - 1; k >= 0; --k) {
        tuple[static_cast<std::size_t>(k)] = rest % m;
        rest /= m;
    }
    return tuple;
}

Embedding diagonal_embedding(const PowerStructure& power, const std::vector<Embedding>& gs) {
    if (!power.base || !power.structure) throw DomainError("diagonal_embedding: power must be constructed");
    if (static_cast<int>(gs.size()) != power.n) {
        throw DomainError("diagonal_embedding: need exactly one automorphism per coordinate");
    }
    for (const Embedding& g : gs) require_automorphism(g, power.base, "diagonal_embedding");
    Embedding e;
    e.source = pointed_on_all(power.base);
    e.target = power.structure;
    const int m = power.base->size();
    e.map.reserve(static_cast<std::size_t>(m));
    std::vector<int> t(static_cast<std::size_t>(power.n));
    for (int x = 0; x < m; ++x) {
        for (int k = 0; k < power.n; ++k) t[static_cast<std::size_t>(k)] = gs[static_cast<std::size_t>(k)].map[static_cast<std::size_t>(x)];
        e.map.push_back(power_index(power, t));
    }
    if (!is_embedding(e)) throw std::logic_error("diagonal_embedding: constructed map failed the embedding recheck");
    return e;
}

Embedding diagonal_embedding(const StructPtr& b, const std::vector<Embedding>& gs, long long point_cap) {
    if (gs.empty()) throw DomainError("diagonal_embedding: need at least one automorphism");
    PowerStructure power = l1_power(b, static_cast<int>(gs.size()), point_cap);
    return diagonal_embedding(power, gs);
}

long long concentration_n(const Rational& diam_delta, const Rational& epsilon, int k) {
    if (!(diam_delta > 0)) throw DomainError("concentration_n: diameter must be positive");
    if (!(epsilon > 0)) throw DomainError("concentration_n: epsilon must be positive");
    if (k < 1) throw DomainError("concentration_n: k must be at least 1");
    // n = ceil(diam^2 ln(2k) / (2 eps^2)); ln(2k) is irrational for every
    // integer 2k >= 2, so the ceiling already makes the tail strictly less
    // than 1/k. Refine the certified enclosure until both ends agree.
    const Rational scale = diam_delta * diam_delta / (2 * epsilon * epsilon);
    Rational tol(1, 64);
    for (int round = 0; round < 64; ++round) {
        const Enclosure enc = ln_enclosure(Rational(2 * k), tol);
        const Integer lo = rational_ceil(scale * enc.lo);
        const Integer hi = rational_ceil(scale * enc.hi);
        if (lo == hi) {
            if (lo > Integer(std::numeric_limits<long long>::max())) {
                throw DomainError("concentration_n: required exponent exceeds the representable range");
            }
            return lo.convert_to<long long>();
        }
        tol /= 16;
    }
    throw std::logic_error("concentration_n: certified log enclosure failed to pin the ceiling");
}

std::vector<int> theta(int i, const std::vector<int>& hbar, const GroupAction& g) {
    require_group_tables(g, "theta");
    if (i < 0 || i >= static_cast<int>(g.generators.size())) throw DomainError("theta: generator index out of range");
    const int h = g.size();
    std::vector<int> out(hbar.size());
    const int gi = g.generators[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < hbar.size(); ++t) {
        const int x = hbar[t];
        if (x < 0 || x >= h) throw DomainError("theta: element index out of range");
        out[t] = g.comp[static_cast<std::size_t>(x)][static_cast<std::size_t>(gi)];
    }
    return out;
}

std::vector<int> sample_haar(const GroupAction& g, int n, std::uint64_t seed) {
    if (!g.carrier || g.elements.empty()) throw DomainError("sample_haar: group action is empty");
    if (n < 1) throw DomainError("sample_haar: n must be at least 1");
    Rng rng(seed);
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.size())));
    return out;
}

Rational delta_n(const GroupAction& g, const std::vector<int>& x, const std::vector<int>& y) {
    require_group_tables(g, "delta_n");
    if (x.size() != y.size() || x.empty()) throw DomainError("delta_n: tuples must be nonempty and of equal length");
    const int h = g.size();
    Rational sum(0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] < 0 || x[t] >= h || y[t] < 0 || y[t] >= h) throw DomainError("delta_n: element index out of range");
        sum += g.delta[static_cast<std::size_t>(x[t])][static_cast<std::size_t>(y[t])];
    }
    return sum / static_cast<int>(x.size());
}

Rational delta_diameter(const GroupAction& g) {
    require_group_tables(g, "delta_diameter");
    Rational best(0);
    for (const std::vector<Rational>& row : g.delta) {
        for (const Rational& v : row) {
            if (v > best) best = v;
        }
    }
    return best;
}

std::function<Rational(const std::vector<int>&)> distance_to_point_f(const GroupAction& g, std::vector<int> point) {
    require_group_tables(g, "distance_to_point_f");
    if (point.empty()) throw DomainError("distance_to_point_f: reference point must be nonempty");
    for (int v : point) {
        if (v < 0 || v >= g.size()) throw DomainError("distance_to_point_f: element index out of range");
    }
    auto owned = std::make_shared<GroupAction>(g);
    return [owned, point = std::move(point)](const std::vector<int>& x) { return delta_n(*owned, x, point); };
}

Rational distance_f_mean(const GroupAction& g) {
    require_group_tables(g, "distance_f_mean");
    Rational sum(0);
    for (const Rational& v : g.delta[0]) sum += v;
    return sum / g.size();
}

ConcentrationReport empirical_concentration(const GroupAction& g, int n,
                                            const std::function<Rational(const std::vector<int>&)>& f,
                                            const Rational& f_mean, const Rational& epsilon, std::uint64_t samples,
                                            std::uint64_t seed) {
    require_group_tables(g, "empirical_concentration");
    if (!f) throw DomainError("empirical_concentration: observable must be set");
    if (n < 1) throw DomainError("empirical_concentration: n must be at least 1");
    if (samples < 1) throw DomainError("empirical_concentration: need at least one sample");
    if (!(epsilon > 0)) throw DomainError("empirical_concentration: epsilon must be positive");

    ConcentrationReport report;
    report.group_size = g.size();
    report.n = n;
    report.epsilon = epsilon;
    report.samples = samples;
    report.seed = seed;
    const Rational diam = delta_diameter(g);
    if (diam == 0) {
        report.bound = Rational(0);
    } else {
        const Rational expo = Rational(-2 * n) * epsilon * epsilon / (diam * diam);
        const Enclosure enc = exp_enclosure(expo, Rational(1, 4096));
        report.bound = std::min(Rational(1), Rational(2 * enc.hi));
    }

    Rng rng(seed);
    const std::uint64_t h = static_cast<std::uint64_t>(g.size());
    std::vector<int> cur(static_cast<std::size_t>(n));
    std::vector<int> prev;
    Rational prev_val;
    std::uint64_t deviating = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (int t = 0; t < n; ++t) cur[static_cast<std::size_t>(t)] = static_cast<int>(rng.below(h));
        const Rational val = f(cur);
        if (!prev.empty() && rational_abs(val - prev_val) > delta_n(g, cur, prev)) {
            throw DomainError("empirical_concentration: observable failed the 1-Lipschitz spot check");
        }
        if (rational_abs(val - f_mean) > epsilon) ++deviating;
        prev = cur;
        prev_val = val;
    }
    report.empirical_mass = Rational(Integer(deviating), Integer(samples));
    return report;
}

std::string to_csv(const std::vector<ConcentrationReport>& reports) {
    std::ostringstream out;
    out << "group_size,n,epsilon,samples,empirical_mass,bound,seed\n";
    for (const ConcentrationReport& r : reports) {
        out << r.group_size << ',' << r.n << ',' << to_string(r.epsilon) << ',' << r.samples << ','
            << to_string(r.empirical_mass) << ',' << to_string(r.bound) << ',' << r.seed << '\n';
    }
    return out.str();
}

WitnessOutcome find_witness(const LazyColoring& gamma, const std::vector<int>& a_points, const GroupAction& g, int n,
                            const Rational& epsilon, const WitnessBudget& budget, std::uint64_t seed) {
    require_group_tables(g, "find_witness");
    if (!gamma) throw DomainError("find_witness: coloring must be set");
    if (a_points.empty()) throw DomainError("find_witness: the small structure needs at least one point");
    for (int p : a_points) {
        if (p < 0 || p >= g.carrier->size()) throw DomainError("find_witness: carrier point out of range");
    }
    if (n < 1) throw DomainError("find_witness: n must be at least 1");
    if (!(epsilon > 0)) throw DomainError("find_witness: epsilon must be positive");
    if (g.generators.empty()) throw DomainError("find_witness: need at least one generator");
    if (budget.max_samples < 1) throw DomainError("find_witness: budget must allow at least one sample");

    const Rational two_eps = 2 * epsilon;
    const std::uint64_t h = static_cast<std::uint64_t>(g.size());
    Rng rng(seed);
    WitnessOutcome out;
    std::vector<int> hbar(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> arg(a_points.size(), std::vector<int>(static_cast<std::size_t>(n)));
    bool have_best = false;
    std::vector<int> best_h;
    Rational best_osc;
    for (std::uint64_t s = 0; s < budget.max_samples; ++s) {
        for (int t = 0; t < n; ++t) hbar[static_cast<std::size_t>(t)] = static_cast<int>(rng.below(h));
        ++out.samples;
        Rational lo, hi;
        bool first = true;
        for (int gi : g.generators) {
            for (std::size_t j = 0; j < a_points.size(); ++j) {
                const int moved = g.elements[static_cast<std::size_t>(gi)].map[static_cast<std::size_t>(a_points[j])];
                for (int t = 0; t < n; ++t) {
                    arg[j][static_cast<std::size_t>(t)] =
                        g.elements[static_cast<std::size_t>(hbar[static_cast<std::size_t>(t)])].map[static_cast<std::size_t>(moved)];
                }
            }
            const Rational v = gamma(arg);
            if (v < 0 || v > 1) throw DomainError("find_witness: coloring value outside [0, 1]");
            if (first) {
                lo = v;
                hi = v;
                first = false;
            } else {
                if (v < lo) lo = v;
                if (v > hi) hi = v;
            }
        }
        Rational osc = hi - lo;
        if (!have_best || osc < best_osc) {
            have_best = true;
            best_osc = osc;
            best_h = hbar;
        }
        if (best_osc <= two_eps) break;
    }
    out.found = have_best && best_osc <= two_eps;
    out.hbar = std::move(best_h);
    out.achieved = std::move(best_osc);
    return out;
}

WitnessOutcome find_witness(const Coloring& gamma, const std::vector<int>& anchor, const PowerStructure& power,
                            const GroupAction& g, const Rational& epsilon, const WitnessBudget& budget,
                            std::uint64_t seed) {
    require_group_tables(g, "find_witness");
    if (!power.base || !power.structure) throw DomainError("find_witness: power must be constructed");
    if (!same_structure(power.base, g.carrier)) {
        throw DomainError("find_witness: the group must act on the power's base");
    }
    if (anchor.empty()) throw DomainError("find_witness: anchor tuple must be nonempty");
    for (int p : anchor) {
        if (p < 0 || p >= g.carrier->size()) throw DomainError("find_witness: anchor point out of range");
    }
    check_coloring(gamma);

    const PointedStructure a = generated_substructure(g.carrier, anchor);
    // Carrier indices of a's points, in a's own point order: first occurrence
    // of the anchor entries, then the constants not already hit.
    std::vector<int> a_carrier;
    std::vector<char> seen(static_cast<std::size_t>(g.carrier->size()), 0);
    for (int p : anchor) {
        if (!seen[static_cast<std::size_t>(p)]) {
            seen[static_cast<std::size_t>(p)] = 1;
            a_carrier.push_back(p);
        }
    }
    for (int c : g.carrier->constant_points) {
        if (!seen[static_cast<std::size_t>(c)]) {
            seen[static_cast<std::size_t>(c)] = 1;
            a_carrier.push_back(c);
        }
    }
    if (static_cast<int>(a_carrier.size()) != a.structure->size()) {
        throw std::logic_error("find_witness: generated substructure point count mismatch");
    }

    if (!gamma.domain || !(gamma.domain->source == a) || !same_structure(gamma.domain->target, power.structure)) {
        throw DomainError("find_witness: coloring domain must be the embeddings of the anchored structure into the power");
    }
    const EmbeddingSet expected = enumerate_embeddings(a, power.structure);
    if (expected.members.size() != gamma.domain->members.size()) {
        throw DomainError("find_witness: coloring domain does not enumerate every embedding into the power");
    }
    for (std::size_t i = 0; i < expected.members.size(); ++i) {
        if (expected.members[i].map != gamma.domain->members[i].map) {
            throw DomainError("find_witness: coloring domain is not in enumeration order");
        }
    }

    const LazyColoring lazy = [&](const std::vector<std::vector<int>>& arg) -> Rational {
        Embedding e;
        e.source = a;
        e.target = power.structure;
        e.map.resize(arg.size());
        for (std::size_t j = 0; j < arg.size(); ++j) e.map[j] = power_index(power, arg[j]);
        return coloring_value(gamma, e);
    };
    WitnessOutcome out = find_witness(lazy, a_carrier, g, power.n, epsilon, budget, seed);
    if (!out.hbar.empty()) {
        std::vector<Embedding> gs;
        gs.reserve(out.hbar.size());
        for (int x : out.hbar) gs.push_back(g.elements[static_cast<std::size_t>(x)]);
        out.beta = diagonal_embedding(power, gs);
    }
    return out;
}

std::string to_text(const WitnessOutcome& w) {
    std::ostringstream body;
    body << "witness-search v1\n";
    body << "found " << (w.found ? "yes" : "no") << '\n';
    body << "achieved " << to_string(w.achieved) << '\n';
    body << "samples " << w.samples << '\n';
    body << "hbar";
    for (int x : w.hbar) body << ' ' << x;
    body << '\n';
    if (w.beta) {
        body << "beta";
        for (int x : w.beta->map) body << ' ' << x;
        body << '\n';
    }
    std::string text = body.str();
    text += "digest " + hex64(fnv1a(text)) + '\n';
    return text;
}

std::vector<PartialIso> partial_automorphisms(const StructPtr& a) {
    if (!a) throw DomainError("partial_automorphisms: structure must be set");
    if (!is_valid(*a)) throw DomainError("partial_automorphisms: structure fails validation");
    const int n = a->size();
    if (n > 12) throw DomainError("partial_automorphisms: structure too large for exhaustive enumeration");
    std::vector<char> is_const(static_cast<std::size_t>(n), 0);
    for (int c : a->constant_points) is_const[static_cast<std::size_t>(c)] = 1;

    std::vector<PartialIso> out;
    const unsigned full = 1u << n;
    for (unsigned mask = 0; mask < full; ++mask) {
        bool has_constants = true;
        for (int c = 0; c < n; ++c) {
            if (is_const[static_cast<std::size_t>(c)] && !(mask & (1u << c))) {
                has_constants = false;
                break;
            }
        }
        if (!has_constants) continue;
        std::vector<int> dom;
        for (int p = 0; p < n; ++p) {
            if (mask & (1u << p)) dom.push_back(p);
        }

        std::vector<int> img(dom.size(), -1);
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        auto emit = [&]() {
            // Tables of arity >= 2 must also agree on every tuple drawn from
            // the domain (unary and distance agreement is checked on the way).
            for (std::size_t p = 0; p < a->signature.predicates.size(); ++p) {
                const int r = a->signature.predicates[p].arity;
                if (r < 2 || dom.empty()) continue;
                std::vector<int> idx(static_cast<std::size_t>(r), 0);
                std::vector<int> td(static_cast<std::size_t>(r));
                std::vector<int> ti(static_cast<std::size_t>(r));
                do {
                    for (int k = 0; k < r; ++k) {
                        td[static_cast<std::size_t>(k)] = dom[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                        ti[static_cast<std::size_t>(k)] = img[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                    }
                    if (a->value(static_cast<int>(p), td) != a->value(static_cast<int>(p), ti)) return;
                } while (next_tuple(idx, static_cast<int>(dom.size())));
            }
            PartialIso pi;
            pi.domain = dom;
            pi.image = img;
            out.push_back(std::move(pi));
        };
        auto rec = [&](auto&& self, std::size_t pos) -> void {
            if (pos == dom.size()) {
                emit();
                return;
            }
            const int src = dom[pos];
            for (int cand = 0; cand < n; ++cand) {
                if (used[static_cast<std::size_t>(cand)]) continue;
                if ((is_const[static_cast<std::size_t>(src)] || is_const[static_cast<std::size_t>(cand)]) && cand != src) {
                    continue;
                }
                bool ok = true;
                for (std::size_t q = 0; q < pos && ok; ++q) {
                    if (a->d(src, dom[q]) != a->d(cand, img[q])) ok = false;
                }
                if (ok) {
                    for (std::size_t p = 0; p < a->signature.predicates.size() && ok; ++p) {
                        if (a->signature.predicates[p].arity != 1) continue;
                        if (a->tables[p][static_cast<std::size_t>(src)] != a->tables[p][static_cast<std::size_t>(cand)]) {
                            ok = false;
                        }
                    }
                }
                if (!ok) continue;
                img[pos] = cand;
                used[static_cast<std::size_t>(cand)] = 1;
                self(self, pos + 1);
                used[static_cast<std::size_t>(cand)] = 0;
                img[pos] = -1;
            }
        };
        rec(rec, 0);
    }
    return out;
}

namespace {

struct CandidateStats {
    std::uint64_t examined = 0;
    int max_size = 0;
    bool capped = false;
};

// Ascending additive closure of the base's nonzero distance values, cut off
// at the ambient diameter and at `cap` values.
std::vector<Rational> closed_distance_values(const MetricStructure& b, int cap) {
    std::set<Rational> vals;
    const int n = b.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (b.d(i, j) != 0) vals.insert(b.d(i, j));
        }
    }
    const Rational limit = b.signature.diameter ? *b.signature.diameter : b.diameter();
    bool grew = true;
    while (grew && static_cast<int>(vals.size()) < cap) {
        grew = false;
        const std::vector<Rational> snapshot(vals.begin(), vals.end());
        for (std::size_t i = 0; i < snapshot.size() && static_cast<int>(vals.size()) < cap; ++i) {
            for (std::size_t j = i; j < snapshot.size() && static_cast<int>(vals.size()) < cap; ++j) {
                const Rational sum = snapshot[i] + snapshot[j];
                if (sum <= limit && vals.insert(sum).second) grew = true;
            }
        }
    }
    return std::vector<Rational>(vals.begin(), vals.end());
}

std::vector<Rational> table_value_set(const std::vector<Rational>& table) {
    std::set<Rational> vals(table.begin(), table.end());
    return std::vector<Rational>(vals.begin(), vals.end());
}

std::string fresh_label(const MetricStructure& b, int serial) {
    std::string lab = "w" + std::to_string(serial);
    while (b.point_index(lab) != -1) lab += '\'';
    return lab;
}

// One free cell of a candidate: either a distance entry (i, j) with i > j or
// a predicate-table entry at a tuple touching at least one new point.
struct FreeSlot {
    bool is_distance = false;
    int i = 0;
    int j = 0;
    int predicate = 0;
    std::vector<int> tuple;
};

// Enumerates every candidate structure that contains `base` as its leading
// block, in deterministic order: sizes ascending, then free cells filled by a
// mixed-radix odometer (last slot fastest, value lists ascending). Calls
// `visit` for each structurally valid candidate until it returns true.
CandidateStats enumerate_candidates(const StructPtr& base, const EppaCaps& caps,
                                    const std::function<bool(const StructPtr&)>& visit) {
    CandidateStats stats;
    const int nb = base->size();
    const std::vector<Rational> dist_values = closed_distance_values(*base, caps.distance_set_cap);
    std::vector<std::vector<Rational>> pred_values(base->signature.predicates.size());
    for (std::size_t p = 0; p < pred_values.size(); ++p) pred_values[p] = table_value_set(base->tables[p]);

    for (int m = std::max(nb, 0); m <= caps.max_points; ++m) {
        if (m > nb) {
            if (dist_values.empty()) break;
            bool stuck = false;
            for (const std::vector<Rational>& pv : pred_values) {
                if (pv.empty()) stuck = true;
            }
            if (stuck) break;
        }
        stats.max_size = m;

        std::vector<FreeSlot> slots;
        for (int i = nb; i < m; ++i) {
            for (int j = 0; j < i; ++j) {
                FreeSlot s;
                s.is_distance = true;
                s.i = i;
                s.j = j;
                slots.push_back(std::move(s));
            }
        }
        if (m > nb) {
            for (std::size_t p = 0; p < base->signature.predicates.size(); ++p) {
                const int r = base->signature.predicates[p].arity;
                std::vector<int> t(static_cast<std::size_t>(r), 0);
                do {
                    bool touches_new = false;
                    for (int v : t) {
                        if (v >= nb) touches_new = true;
                    }
                    if (!touches_new) continue;
                    FreeSlot s;
                    s.predicate = static_cast<int>(p);
                    s.tuple = t;
                    slots.push_back(std::move(s));
                } while (next_tuple(t, m));
            }
        }

        std::vector<std::size_t> counter(slots.size(), 0);
        bool exhausted = false;
        while (!exhausted) {
            if (stats.examined >= caps.max_candidates) {
                stats.capped = true;
                return stats;
            }
            ++stats.examined;

            MetricStructure s;
            s.signature = base->signature;
            s.points = base->points;
            for (int i = nb; i < m; ++i) s.points.push_back(fresh_label(*base, i - nb + 1));
            s.dist.assign(static_cast<std::size_t>(m) * m, Rational(0));
            for (int i = 0; i < nb; ++i) {
                for (int j = 0; j < nb; ++j) s.dist[static_cast<std::size_t>(i) * m + j] = base->d(i, j);
            }
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const FreeSlot& slot = slots[k];
                if (!slot.is_distance) continue;
                const Rational& v = dist_values[counter[k]];
                s.dist[static_cast<std::size_t>(slot.i) * m + slot.j] = v;
                s.dist[static_cast<std::size_t>(slot.j) * m + slot.i] = v;
            }

            // Cheap rejection before tables are even built: the new rows must
            // satisfy the triangle inequality and the diameter cap.
            bool metric_ok = true;
            const Rational* limit = s.signature.diameter ? &*s.signature.diameter : nullptr;
            for (int i = nb; i < m && metric_ok; ++i) {
                for (int j = 0; j < i && metric_ok; ++j) {
                    const Rational& dij = s.dist[static_cast<std::size_t>(i) * m + j];
                    if (dij == 0 || (limit && dij > *limit)) {
                        metric_ok = false;
                        break;
                    }
                    for (int k = 0; k < m && metric_ok; ++k) {
                        if (k == i || k == j) continue;
                        const Rational& dik = s.dist[static_cast<std::size_t>(i) * m + k];
                        const Rational& djk = s.dist[static_cast<std::size_t>(j) * m + k];
                        if (dij > dik + djk || dik > dij + djk || djk > dij + dik) metric_ok = false;
                    }
                }
            }

            if (metric_ok) {
                s.tables.resize(base->signature.predicates.size());
                for (std::size_t p = 0; p < s.tables.size(); ++p) {
                    const int r = base->signature.predicates[p].arity;
                    std::size_t cells = 1;
                    for (int q = 0; q < r; ++q) cells *= static_cast<std::size_t>(m);
                    s.tables[p].assign(cells, base->signature.predicates[p].lo);
                    if (nb > 0) {
                        std::vector<int> t(static_cast<std::size_t>(r), 0);
                        do {
                            s.tables[p][s.tuple_offset(t)] = base->value(static_cast<int>(p), t);
                        } while (next_tuple(t, nb));
                    }
                }
                for (std::size_t k = 0; k < slots.size(); ++k) {
                    const FreeSlot& slot = slots[k];
                    if (slot.is_distance) continue;
                    s.tables[static_cast<std::size_t>(slot.predicate)][s.tuple_offset(slot.tuple)] =
                        pred_values[static_cast<std::size_t>(slot.predicate)][counter[k]];
                }
                s.constant_points = base->constant_points;
                bool valid = true;
                StructPtr cand;
                try {
                    cand = make_structure(std::move(s));
                } catch (const DomainError&) {
                    valid = false;
                }
                if (valid && visit(cand)) return stats;
            }

            // Mixed-radix increment, last slot fastest.
            exhausted = true;
            for (std::size_t k = slots.size(); k-- > 0;) {
                const std::size_t radix =
                    slots[k].is_distance ? dist_values.size() : pred_values[static_cast<std::size_t>(slots[k].predicate)].size();
                if (++counter[k] < radix) {
                    exhausted = false;
                    break;
                }
                counter[k] = 0;
            }
        }
    }
    return stats;
}

}  // namespace

EppaOutcome eppa_search(const StructPtr& a, const EppaCaps& caps) {
    if (!a) throw DomainError("eppa_search: structure must be set");
    if (a->size() < 1) throw DomainError("eppa_search: structure must have at least one point");
    if (!is_valid(*a)) throw DomainError("eppa_search: structure fails validation");
    if (a->size() > 4) throw DomainError("eppa_search: instances are capped at 4 points");
    if (caps.max_points < a->size()) throw DomainError("eppa_search: size cap below the input size");

    EppaOutcome out;
    out.partials = partial_automorphisms(a);
    const CandidateStats stats = enumerate_candidates(a, caps, [&](const StructPtr& cand) -> bool {
        std::vector<Embedding> auts;
        try {
            auts = automorphisms(cand, caps.enumeration);
        } catch (const ResourceLimitError&) {
            return false;
        }
        std::vector<Embedding> exts;
        exts.reserve(out.partials.size());
        for (const PartialIso& pi : out.partials) {
            int found = -1;
            for (std::size_t ai = 0; ai < auts.size() && found < 0; ++ai) {
                bool extends = true;
                for (std::size_t t = 0; t < pi.domain.size(); ++t) {
                    if (auts[ai].map[static_cast<std::size_t>(pi.domain[t])] != pi.image[t]) {
                        extends = false;
                        break;
                    }
                }
                if (extends) found = static_cast<int>(ai);
            }
            if (found < 0) return false;
            exts.push_back(auts[static_cast<std::size_t>(found)]);
        }
        Embedding inc;
        inc.source = pointed_on_all(a);
        inc.target = cand;
        inc.map.resize(static_cast<std::size_t>(a->size()));
        for (int p = 0; p < a->size(); ++p) inc.map[static_cast<std::size_t>(p)] = p;
        if (!is_embedding(inc)) throw std::logic_error("eppa_search: leading block is not a copy of the input");
        out.found = true;
        out.b = cand;
        out.inclusion = std::move(inc);
        out.extensions = std::move(exts);
        return true;
    });
    out.candidates_examined = stats.examined;
    out.max_size_tried = stats.max_size;

    std::ostringstream summary;
    summary << "eppa-search v1\n";
    summary << "found " << (out.found ? "yes" : "no") << '\n';
    summary << "partials " << out.partials.size() << '\n';
    summary << "witness-size " << (out.found ? out.b->size() : -1) << '\n';
    summary << "candidates " << out.candidates_examined << '\n';
    summary << "max-size " << out.max_size_tried << '\n';
    summary << "cap-hit " << (stats.capped ? "yes" : "no") << '\n';
    out.summary = summary.str();
    return out;
}

WepOutcome weak_extension_witness(const PointedStructure& a, const Embedding& inclusion,
                                  const std::vector<Embedding>& alphas, const Rational& epsilon,
                                  const EppaCaps& caps, const ClosureCaps& closure_caps) {
    if (!a.structure || a.structure->size() < 1) {
        throw DomainError("weak_extension_witness: structure must be set and nonempty");
    }
    if (!(inclusion.source == a) || !inclusion.target) {
        throw DomainError("weak_extension_witness: inclusion must embed the given structure");
    }
    if (!is_embedding(inclusion)) throw DomainError("weak_extension_witness: inclusion is not an embedding");
    if (alphas.empty()) throw DomainError("weak_extension_witness: need at least one partial isometry to approximate");
    for (const Embedding& alpha : alphas) {
        if (!(alpha.source == a) || !same_structure(alpha.target, inclusion.target)) {
            throw DomainError("weak_extension_witness: every map must embed the structure into the inclusion's target");
        }
        if (!is_embedding(alpha)) throw DomainError("weak_extension_witness: approximated map is not an embedding");
    }
    if (epsilon < 0) throw DomainError("weak_extension_witness: epsilon must be nonnegative");
    const StructPtr t = inclusion.target;
    if (caps.max_points < t->size()) throw DomainError("weak_extension_witness: size cap below the target size");

    WepOutcome out;
    const CandidateStats stats = enumerate_candidates(t, caps, [&](const StructPtr& cand) -> bool {
        std::vector<Embedding> auts;
        try {
            auts = automorphisms(cand, caps.enumeration);
        } catch (const ResourceLimitError&) {
            return false;
        }
        std::vector<Embedding> gs;
        gs.reserve(alphas.size());
        for (const Embedding& alpha : alphas) {
            int found = -1;
            for (std::size_t ai = 0; ai < auts.size() && found < 0; ++ai) {
                bool close = true;
                for (int p : a.tuple) {
                    const int moved = auts[ai].map[static_cast<std::size_t>(inclusion.map[static_cast<std::size_t>(p)])];
                    if (cand->d(moved, alpha.map[static_cast<std::size_t>(p)]) > epsilon) {
                        close = false;
                        break;
                    }
                }
                if (close) found = static_cast<int>(ai);
            }
            if (found < 0) return false;
            gs.push_back(auts[static_cast<std::size_t>(found)]);
        }
        GroupAction closure;
        try {
            closure = group_closure(cand, gs, closure_caps);
        } catch (const ResourceLimitError&) {
            return false;
        }
        Embedding j;
        j.source = pointed_on_all(t);
        j.target = cand;
        j.map.resize(static_cast<std::size_t>(t->size()));
        for (int p = 0; p < t->size(); ++p) j.map[static_cast<std::size_t>(p)] = p;
        if (!is_embedding(j)) throw std::logic_error("weak_extension_witness: leading block is not a copy of the target");
        out.found = true;
        out.b_prime = cand;
        out.t_copy = std::move(j);
        out.gs = std::move(gs);
        out.closure = std::move(closure);
        return true;
    });
    out.candidates_examined = stats.examined;

    if (out.found) {
        const Embedding lifted_inclusion = compose(out.t_copy, inclusion);
        std::vector<Embedding> primes;
        std::vector<Embedding> originals;
        primes.reserve(alphas.size());
        originals.reserve(alphas.size());
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            primes.push_back(compose(out.gs[i], lifted_inclusion));
            originals.push_back(compose(out.t_copy, alphas[i]));
        }
        if (!eps_approximates(out.b_prime, primes, a, originals, epsilon)) {
            throw std::logic_error("weak_extension_witness: found witness failed the approximation recheck");
        }
    }

    std::ostringstream summary;
    summary << "wep-search v1\n";
    summary << "found " << (out.found ? "yes" : "no") << '\n';
    summary << "maps " << alphas.size() << '\n';
    summary << "witness-size " << (out.found ? out.b_prime->size() : -1) << '\n';
    summary << "group-size " << (out.found ? out.closure.size() : 0) << '\n';
    summary << "candidates " << out.candidates_examined << '\n';
    summary << "cap-hit " << (stats.capped ? "yes" : "no") << '\n';
    out.summary = summary.str();
    return out;
}

}  // namespace fraisse
