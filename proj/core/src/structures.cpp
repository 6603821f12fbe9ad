#include "fraisse/structures.hpp"

#include "fraisse/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace fraisse {

namespace {

bool label_ok(std::string_view label) {
    if (label.empty()) return false;
    for (char c : label) {
        if (c == '#' || c == '=' || std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::size_t power_size(std::size_t n, int arity) {
    std::size_t r = 1;
    for (int i = 0; i < arity; ++i) r *= n;
    return r;
}

}  // namespace

bool next_tuple(std::vector<int>& tuple, int n) {
    for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
        if (++tuple[i] < n) return true;
        tuple[i] = 0;
    }
    return false;
}

int Signature::predicate_index(std::string_view name) const {
    for (std::size_t i = 0; i < predicates.size(); ++i) {
        if (predicates[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int Signature::constant_index(std::string_view name) const {
    for (std::size_t i = 0; i < constants.size(); ++i) {
        if (constants[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::size_t MetricStructure::tuple_offset(const std::vector<int>& tuple) const {
    std::size_t off = 0;
    for (int idx : tuple) off = off * points.size() + static_cast<std::size_t>(idx);
    return off;
}

const Rational& MetricStructure::value(int predicate, const std::vector<int>& tuple) const {
    return tables[predicate][tuple_offset(tuple)];
}

int MetricStructure::point_index(std::string_view label) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] == label) return static_cast<int>(i);
    }
    return -1;
}

Rational MetricStructure::diameter() const {
    Rational m = 0;
    for (int i = 0; i < size(); ++i) {
        for (int j = i + 1; j < size(); ++j) {
            if (d(i, j) > m) m = d(i, j);
        }
    }
    return m;
}

Rational sup_distance(const MetricStructure& s, const std::vector<int>& u, const std::vector<int>& v) {
    if (u.size() != v.size()) throw DomainError("sup_distance: tuple lengths differ");
    Rational m = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (s.d(u[i], v[i]) > m) m = s.d(u[i], v[i]);
    }
    return m;
}

namespace {

void check_shape(const MetricStructure& s) {
    const std::size_t n = s.points.size();
    if (s.dist.size() != n * n) throw DomainError("validate: distance matrix is not square over the point set");
    if (s.tables.size() != s.signature.predicates.size())
        throw DomainError("validate: one table required per declared predicate");
    for (std::size_t p = 0; p < s.tables.size(); ++p) {
        if (s.tables[p].size() != power_size(n, s.signature.predicates[p].arity))
            throw DomainError("validate: table for predicate '" + s.signature.predicates[p].name + "' is not total");
    }
    if (s.constant_points.size() != s.signature.constants.size())
        throw DomainError("validate: one interpretation required per declared constant");
    for (int c : s.constant_points) {
        if (c < 0 || c >= s.size()) throw DomainError("validate: constant interpretation out of range");
    }
}

std::string tuple_text(const MetricStructure& s, const std::vector<int>& tuple) {
    std::string out = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += ",";
        out += s.points[tuple[i]];
    }
    out += ")";
    return out;
}

}  // namespace

std::vector<Diagnostic> validate(const MetricStructure& s) {
    check_shape(s);
    std::vector<Diagnostic> out;
    auto add = [&out](std::string code, std::string message, std::vector<int> pts = {}) {
        out.push_back({std::move(code), std::move(message), std::move(pts)});
    };

    // Signature well-formedness.
    for (std::size_t p = 0; p < s.signature.predicates.size(); ++p) {
        const PredicateDecl& decl = s.signature.predicates[p];
        if (decl.arity < 1) add("sig-bad-arity", "predicate '" + decl.name + "' has arity < 1");
        if (decl.lipschitz < 0) add("sig-bad-lipschitz", "predicate '" + decl.name + "' has negative Lipschitz constant");
        if (decl.lo > decl.hi) add("sig-bad-range", "predicate '" + decl.name + "' has empty range");
        for (std::size_t q = p + 1; q < s.signature.predicates.size(); ++q) {
            if (decl.name == s.signature.predicates[q].name)
                add("sig-dup-name", "duplicate predicate name '" + decl.name + "'");
        }
    }
    for (std::size_t c = 0; c < s.signature.constants.size(); ++c) {
        for (std::size_t e = c + 1; e < s.signature.constants.size(); ++e) {
            if (s.signature.constants[c] == s.signature.constants[e])
                add("sig-dup-name", "duplicate constant name '" + s.signature.constants[c] + "'");
        }
    }
    if (s.signature.diameter && *s.signature.diameter <= 0)
        add("sig-bad-diameter", "diameter cap must be positive");

    // Point labels.
    for (int i = 0; i < s.size(); ++i) {
        if (!label_ok(s.points[i]))
            add("bad-label", "point " + std::to_string(i) + " has an empty or unprintable label", {i});
        for (int j = i + 1; j < s.size(); ++j) {
            if (s.points[i] == s.points[j])
                add("dup-label", "points " + std::to_string(i) + " and " + std::to_string(j) + " share label '" + s.points[i] + "'", {i, j});
        }
    }

    // Metric axioms.
    const int n = s.size();
    for (int i = 0; i < n; ++i) {
        if (s.d(i, i) != 0)
            add("diagonal-nonzero", "d(" + s.points[i] + "," + s.points[i] + ") != 0", {i});
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (s.d(i, j) != s.d(j, i))
                add("asymmetric", "d(" + s.points[i] + "," + s.points[j] + ") != d(" + s.points[j] + "," + s.points[i] + ")", {i, j});
            if (s.d(i, j) < 0)
                add("negative-distance", "d(" + s.points[i] + "," + s.points[j] + ") < 0", {i, j});
            if (s.d(i, j) == 0)
                add("indiscernible-points", "distinct points " + s.points[i] + ", " + s.points[j] + " at distance 0", {i, j});
            if (s.signature.diameter && s.d(i, j) > *s.signature.diameter)
                add("diameter-exceeded", "d(" + s.points[i] + "," + s.points[j] + ") exceeds the diameter cap", {i, j});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (s.d(i, k) > s.d(i, j) + s.d(j, k)) {
                    add("triangle-violation",
                        "triangle inequality violated at (" + s.points[i] + "," + s.points[j] + "," + s.points[k] + ")",
                        {i, j, k});
                }
            }
        }
    }

    // Predicate tables: range and Lipschitz against the sup-metric.
    for (std::size_t p = 0; p < s.signature.predicates.size(); ++p) {
        const PredicateDecl& decl = s.signature.predicates[p];
        if (decl.arity < 1 || n == 0) continue;
        std::vector<int> u(decl.arity, 0);
        do {
            const Rational& vu = s.value(static_cast<int>(p), u);
            if (vu < decl.lo || vu > decl.hi)
                add("range-violation", "value of " + decl.name + tuple_text(s, u) + " outside declared range", u);
            std::vector<int> v = u;
            while (next_tuple(v, n)) {
                const Rational& vv = s.value(static_cast<int>(p), v);
                Rational gap = vu > vv ? vu - vv : vv - vu;
                if (gap > decl.lipschitz * sup_distance(s, u, v)) {
                    add("lipschitz-violation",
                        "Lipschitz violated for " + decl.name + " at " + tuple_text(s, u) + ", " + tuple_text(s, v), u);
                }
            }
        } while (next_tuple(u, n));
    }

    return out;
}

bool is_valid(const MetricStructure& s) { return validate(s).empty(); }

std::string describe(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream os;
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        if (i) os << "; ";
        os << diagnostics[i].code << ": " << diagnostics[i].message;
    }
    return os.str();
}

MetricStructure canonicalize(const MetricStructure& s) {
    check_shape(s);
    const int n = s.size();

    // Union-find over zero-distance pairs; the smallest index represents.
    std::vector<int> rep(n);
    std::iota(rep.begin(), rep.end(), 0);
    auto find = [&rep](int x) {
        while (rep[x] != x) x = rep[x] = rep[rep[x]];
        return x;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (s.d(i, j) == 0) {
                int a = find(i), b = find(j);
                if (a != b) rep[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::vector<int> new_index(n, -1);
    MetricStructure out;
    out.signature = s.signature;
    for (int i = 0; i < n; ++i) {
        if (find(i) == i) {
            new_index[i] = static_cast<int>(out.points.size());
            out.points.push_back(s.points[i]);
        }
    }
    for (int i = 0; i < n; ++i) new_index[i] = new_index[find(i)];

    const int m = static_cast<int>(out.points.size());
    out.dist.assign(static_cast<std::size_t>(m) * m, Rational(0));
    std::vector<int> back(m);
    for (int i = 0; i < n; ++i) {
        if (find(i) == i) back[new_index[i]] = i;
    }
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) out.d(a, b) = s.d(back[a], back[b]);
    }
    for (std::size_t p = 0; p < s.tables.size(); ++p) {
        const int arity = s.signature.predicates[p].arity;
        std::vector<Rational> table(power_size(static_cast<std::size_t>(m), arity));
        if (m > 0) {
            std::vector<int> t(arity, 0);
            do {
                std::vector<int> src(arity);
                for (int i = 0; i < arity; ++i) src[i] = back[t[i]];
                table[out.tuple_offset(t)] = s.value(static_cast<int>(p), src);
            } while (next_tuple(t, m));
        }
        out.tables.push_back(std::move(table));
    }
    for (int c : s.constant_points) out.constant_points.push_back(new_index[c]);

    if (auto diags = validate(out); !diags.empty())
        throw DomainError("canonicalize: output invalid (input violated preconditions): " + describe(diags));
    return out;
}

PointedStructure generated_substructure(const StructPtr& s, const std::vector<int>& tuple) {
    if (!s) throw DomainError("generated_substructure: null structure");
    for (int idx : tuple) {
        if (idx < 0 || idx >= s->size()) throw DomainError("generated_substructure: unknown point index");
    }

    // Selected points: tuple entries then constants, first occurrence kept.
    std::vector<int> selected;
    auto push_unique = [&selected](int idx) {
        if (std::find(selected.begin(), selected.end(), idx) == selected.end()) selected.push_back(idx);
    };
    for (int idx : tuple) push_unique(idx);
    for (int c : s->constant_points) push_unique(c);

    MetricStructure sub;
    sub.signature = s->signature;
    const int m = static_cast<int>(selected.size());
    std::vector<int> new_index(s->size(), -1);
    for (int i = 0; i < m; ++i) {
        sub.points.push_back(s->points[selected[i]]);
        new_index[selected[i]] = i;
    }
    sub.dist.assign(static_cast<std::size_t>(m) * m, Rational(0));
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) sub.d(a, b) = s->d(selected[a], selected[b]);
    }
    for (std::size_t p = 0; p < s->tables.size(); ++p) {
        const int arity = s->signature.predicates[p].arity;
        std::vector<Rational> table(power_size(static_cast<std::size_t>(m), arity));
        if (m > 0) {
            std::vector<int> t(arity, 0);
            do {
                std::vector<int> src(arity);
                for (int i = 0; i < arity; ++i) src[i] = selected[t[i]];
                table[sub.tuple_offset(t)] = s->value(static_cast<int>(p), src);
            } while (next_tuple(t, m));
        }
        sub.tables.push_back(std::move(table));
    }
    for (int c : s->constant_points) sub.constant_points.push_back(new_index[c]);

    PointedStructure out;
    out.structure = std::make_shared<const MetricStructure>(std::move(sub));
    for (int idx : tuple) out.tuple.push_back(new_index[idx]);
    return out;
}

PointedStructure pointed_on_all(const StructPtr& s) {
    if (!s) throw DomainError("pointed_on_all: null structure");
    PointedStructure out;
    out.structure = s;
    out.tuple.resize(s->size());
    std::iota(out.tuple.begin(), out.tuple.end(), 0);
    return out;
}

StructPtr make_structure(MetricStructure s) {
    if (auto diags = validate(s); !diags.empty())
        throw DomainError("invalid structure: " + describe(diags));
    return std::make_shared<const MetricStructure>(std::move(s));
}

}  // namespace fraisse
