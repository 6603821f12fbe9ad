#pragma once

#include "fraisse/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraisse {

// Lipschitz predicate declaration. Values of an r-ary predicate P lie in
// [lo, hi] and satisfy |P(u) - P(v)| <= lipschitz * sup_i d(u_i, v_i).
struct PredicateDecl {
    std::string name;
    int arity = 1;
    Rational lipschitz;
    Rational lo;
    Rational hi;

    bool operator==(const PredicateDecl&) const = default;
};

// Relational Lipschitz vocabulary: distance symbol (implicit), predicates,
// constants, optional diameter cap for bounded classes.
struct Signature {
    std::vector<PredicateDecl> predicates;
    std::vector<std::string> constants;
    std::optional<Rational> diameter;

    bool operator==(const Signature&) const = default;

    int predicate_index(std::string_view name) const;
    int constant_index(std::string_view name) const;
};

// Finite metric structure with exact rational distances, total predicate
// tables and constant interpretations. Plain data: `validate` reports axiom
// violations as diagnostics, operations require a violation-free structure.
struct MetricStructure {
    Signature signature;
    std::vector<std::string> points;
    // Row-major square matrix, dist[i * points.size() + j].
    std::vector<Rational> dist;
    // tables[p] has size points.size()^arity(p), row-major over point tuples.
    std::vector<std::vector<Rational>> tables;
    // Parallel to signature.constants; point index interpreting each.
    std::vector<int> constant_points;

    int size() const { return static_cast<int>(points.size()); }

    const Rational& d(int i, int j) const { return dist[static_cast<std::size_t>(i) * points.size() + j]; }
    Rational& d(int i, int j) { return dist[static_cast<std::size_t>(i) * points.size() + j]; }

    // Row-major index of a tuple in a table of this structure.
    std::size_t tuple_offset(const std::vector<int>& tuple) const;
    const Rational& value(int predicate, const std::vector<int>& tuple) const;

    int point_index(std::string_view label) const;  // -1 when absent
    Rational diameter() const;                      // 0 for <= 1 point

    bool operator==(const MetricStructure&) const = default;
};

using StructPtr = std::shared_ptr<const MetricStructure>;

// Structure together with a distinguished ordered generating tuple
// (repetitions allowed). Every point must be a tuple entry or a constant.
struct PointedStructure {
    StructPtr structure;
    std::vector<int> tuple;

    int arity() const { return static_cast<int>(tuple.size()); }

    bool operator==(const PointedStructure& o) const {
        return tuple == o.tuple &&
               (structure == o.structure || (structure && o.structure && *structure == *o.structure));
    }
};

struct Diagnostic {
    std::string code;     // stable identifier, e.g. "triangle-violation"
    std::string message;  // names the offending points/tuples
    std::vector<int> points;
};

// Empty iff every MetricStructure invariant holds. Violations are data,
// not failures. Throws DomainError only on shape errors (non-square matrix,
// partial tables, out-of-range constant points).
std::vector<Diagnostic> validate(const MetricStructure& s);

bool is_valid(const MetricStructure& s);

// Message summarizing diagnostics, for error reporting.
std::string describe(const std::vector<Diagnostic>& diagnostics);

// Quotient by zero-distance pairs. Keeps first-occurrence point order,
// remaps constants (distinct constants may legitimately coincide afterwards).
// Requires the input to pass validate except for indiscernible pairs.
MetricStructure canonicalize(const MetricStructure& s);

// Induced structure on the entries of `tuple` plus all constants, in
// first-occurrence order (tuple entries first, then remaining constants).
// The generator tuple is preserved in order, repetitions intact.
PointedStructure generated_substructure(const StructPtr& s, const std::vector<int>& tuple);

// Convenience: pointed structure on all points of s, tuple = (0, 1, ..., n-1).
PointedStructure pointed_on_all(const StructPtr& s);

// Validates and wraps; throws DomainError listing diagnostics if invalid.
StructPtr make_structure(MetricStructure s);

// sup-metric distance between equal-length point tuples of one structure.
Rational sup_distance(const MetricStructure& s, const std::vector<int>& u, const std::vector<int>& v);

// Row-major tuple odometer over {0..n-1}; returns false after wrapping the
// last tuple back to all-zeros. Start from all-zeros to visit every tuple.
bool next_tuple(std::vector<int>& tuple, int n);

}  // namespace fraisse
