#include "fraisse/embeddings.hpp"

#include "fraisse/errors.hpp"

#include <algorithm>

namespace fraisse {

std::vector<int> Embedding::image_tuple() const {
    std::vector<int> out;
    out.reserve(source.tuple.size());
    for (int a : source.tuple) out.push_back(map[a]);
    return out;
}

int EmbeddingSet::index_of(const Embedding& e) const {
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] == e) return static_cast<int>(i);
    }
    return -1;
}

namespace {

bool same_structure(const StructPtr& x, const StructPtr& y) {
    return x == y || (x && y && *x == *y);
}

// Backtracking enumerator: positions in source index order, candidates
// ascending, so results come out in lexicographic map order.
class Enumerator {
  public:
    Enumerator(const MetricStructure& a, const MetricStructure& b, std::vector<int> forced, long long cap)
        : a_(a), b_(b), forced_(std::move(forced)), cap_(cap), map_(a.size(), -1), used_(b.size(), 0) {}

    std::vector<std::vector<int>> run() {
        if (a_.size() <= b_.size()) place(0);
        return results_;
    }

  private:
    void place(int i) {
        if (i == a_.size()) {
            results_.push_back(map_);
            return;
        }
        if (forced_[i] >= 0) {
            try_candidate(i, forced_[i]);
            return;
        }
        for (int t = 0; t < b_.size(); ++t) try_candidate(i, t);
    }

    void try_candidate(int i, int t) {
        if (++nodes_ > cap_)
            throw ResourceLimitError("embedding enumeration exceeded the node cap", static_cast<std::uint64_t>(nodes_));
        if (used_[t] || !compatible(i, t)) return;
        map_[i] = t;
        used_[t] = 1;
        place(i + 1);
        map_[i] = -1;
        used_[t] = 0;
    }

    bool compatible(int i, int t) const {
        for (int j = 0; j < i; ++j) {
            if (b_.d(t, map_[j]) != a_.d(i, j)) return false;
        }
        for (std::size_t p = 0; p < a_.signature.predicates.size(); ++p) {
            const int arity = a_.signature.predicates[p].arity;
            if (arity == 1) {
                if (b_.tables[p][t] != a_.tables[p][i]) return false;
                continue;
            }
            // All tuples over the assigned prefix {0..i} that mention i.
            std::vector<int> u(arity, 0);
            std::vector<int> v(arity);
            do {
                if (std::find(u.begin(), u.end(), i) == u.end()) continue;
                for (int k = 0; k < arity; ++k) v[k] = u[k] == i ? t : map_[u[k]];
                if (b_.value(static_cast<int>(p), v) != a_.value(static_cast<int>(p), u)) return false;
            } while (next_tuple(u, i + 1));
        }
        return true;
    }

    const MetricStructure& a_;
    const MetricStructure& b_;
    std::vector<int> forced_;
    long long cap_;
    long long nodes_ = 0;
    std::vector<int> map_;
    std::vector<char> used_;
    std::vector<std::vector<int>> results_;
};

}  // namespace

EmbeddingSet enumerate_embeddings(const PointedStructure& a, const StructPtr& b, const EnumerationLimits& limits) {
    if (!a.structure || !b) throw DomainError("enumerate_embeddings: null structure");
    if (a.structure->signature != b->signature)
        throw SignatureMismatchError("enumerate_embeddings: source and target signatures differ");

    const MetricStructure& sa = *a.structure;
    // Generation keeps rho a metric: embeddings that agree on the tuple and
    // the constants agree everywhere.
    {
        std::vector<char> covered(sa.size(), 0);
        for (int g : a.tuple) {
            if (g < 0 || g >= sa.size()) throw DomainError("enumerate_embeddings: tuple entry out of range");
            covered[g] = 1;
        }
        for (int c : sa.constant_points) covered[c] = 1;
        for (int i = 0; i < sa.size(); ++i) {
            if (!covered[i])
                throw DomainError("enumerate_embeddings: point '" + sa.points[i] +
                                  "' is neither a generator nor a constant");
        }
    }
    EmbeddingSet out{a, b, {}};

    // Constants are forced; clashing interpretations mean an empty set.
    std::vector<int> forced(sa.size(), -1);
    for (std::size_t c = 0; c < sa.constant_points.size(); ++c) {
        int sp = sa.constant_points[c];
        int tp = b->constant_points[c];
        if (forced[sp] >= 0 && forced[sp] != tp) return out;
        forced[sp] = tp;
    }

    Enumerator en(sa, *b, std::move(forced), limits.node_cap);
    for (std::vector<int>& m : en.run()) out.members.push_back({a, b, std::move(m)});
    return out;
}

Rational rho(const Embedding& alpha, const Embedding& beta) {
    if (!(alpha.source == beta.source)) throw DomainError("rho: embeddings have different sources");
    if (!same_structure(alpha.target, beta.target)) throw DomainError("rho: embeddings have different targets");
    Rational m = 0;
    for (int a : alpha.source.tuple) {
        const Rational& d = alpha.target->d(alpha.map[a], beta.map[a]);
        if (d > m) m = d;
    }
    return m;
}

Embedding compose(const Embedding& beta, const Embedding& delta) {
    if (!same_structure(delta.target, beta.source.structure))
        throw DomainError("compose: inner target does not match outer source");
    Embedding out;
    out.source = delta.source;
    out.target = beta.target;
    out.map.reserve(delta.map.size());
    for (int t : delta.map) out.map.push_back(beta.map[t]);
    return out;
}

std::vector<Embedding> push_forward(const std::vector<Embedding>& f, const Embedding& beta) {
    std::vector<Embedding> out;
    out.reserve(f.size());
    for (const Embedding& delta : f) {
        Embedding composed = compose(beta, delta);
        bool seen = false;
        for (const Embedding& e : out) {
            if (e.map == composed.map) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(std::move(composed));
    }
    return out;
}

Rational oscillation(const std::function<Rational(const Embedding&)>& gamma, const std::vector<Embedding>& s) {
    if (s.empty()) throw DomainError("oscillation: empty embedding list");
    Rational lo = gamma(s.front());
    Rational hi = lo;
    for (std::size_t i = 1; i < s.size(); ++i) {
        Rational v = gamma(s[i]);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return hi - lo;
}

std::vector<Embedding> automorphisms(const StructPtr& b, const EnumerationLimits& limits) {
    // Injective self-maps of a finite structure are surjective, so this is
    // the full group. Lexicographic order puts the identity first.
    return enumerate_embeddings(pointed_on_all(b), b, limits).members;
}

Embedding identity_embedding(const StructPtr& b) {
    if (!b) throw DomainError("identity_embedding: null structure");
    PointedStructure p = pointed_on_all(b);
    std::vector<int> map = p.tuple;
    return {std::move(p), b, std::move(map)};
}

bool is_embedding(const Embedding& e) {
    if (!e.source.structure || !e.target) return false;
    const MetricStructure& a = *e.source.structure;
    const MetricStructure& b = *e.target;
    if (a.signature != b.signature) return false;
    if (e.map.size() != static_cast<std::size_t>(a.size())) return false;
    for (int t : e.map) {
        if (t < 0 || t >= b.size()) return false;
    }
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < a.size(); ++j) {
            if (i != j && e.map[i] == e.map[j]) return false;
            if (b.d(e.map[i], e.map[j]) != a.d(i, j)) return false;
        }
    }
    for (std::size_t p = 0; p < a.signature.predicates.size(); ++p) {
        const int arity = a.signature.predicates[p].arity;
        if (a.size() == 0) continue;
        std::vector<int> u(arity, 0);
        std::vector<int> v(arity);
        do {
            for (int k = 0; k < arity; ++k) v[k] = e.map[u[k]];
            if (b.value(static_cast<int>(p), v) != a.value(static_cast<int>(p), u)) return false;
        } while (next_tuple(u, a.size()));
    }
    for (std::size_t c = 0; c < a.constant_points.size(); ++c) {
        if (e.map[a.constant_points[c]] != b.constant_points[c]) return false;
    }
    for (int g : e.source.tuple) {
        if (g < 0 || g >= a.size()) return false;
    }
    return true;
}

}  // namespace fraisse
