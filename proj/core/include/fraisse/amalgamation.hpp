#pragma once

#include "fraisse/embeddings.hpp"
#include "fraisse/structures.hpp"

#include <string>
#include <vector>

namespace fraisse {

// C together with arms B0 -> C and B1 -> C that agree exactly (not just up
// to epsilon) on the common part.
struct AmalgamResult {
    StructPtr amalgam;
    Embedding left_arm;
    Embedding right_arm;
};

// Free amalgam C = B0 U_A B1 over phi0: A -> B0, phi1: A -> B1 with the path
// (largest admissible) cross metric
//   D(b0, b1) = min over a in A of d(b0, phi0(a)) + d(phi1(a), b1).
// Predicates are inherited from the side a tuple lives in; tuples genuinely
// mixing both sides (arity >= 2 only) take the largest Lipschitz-admissible
// value, and the output is re-validated either way. Errors: empty A without
// constants (use jep), diameter cap exceeded (reports the offending pair),
// predicate tables that admit no common extension.
AmalgamResult free_amalgam(const PointedStructure& a, const Embedding& phi0, const Embedding& phi1);

// Joint embedding. With constants, delegates to free_amalgam over the
// constant-generated substructures (which must be isomorphic via the symbol
// correspondence). Without constants, a disjoint union at constant cross
// distance c = max(max diameter / 2, largest cross predicate gap / L); a
// zero c is raised to min_separation, and c is clamped to the diameter cap.
// Errors when no admissible c exists.
AmalgamResult jep(const StructPtr& b0, const StructPtr& b1, const Rational& min_separation = Rational(1));

// Exact value and an optimal cross pseudometric realizing it: value is the
// smallest sup-distance between the generator tuples over all joint
// embeddings, and cross (|x| rows, |y| columns) extends both metrics to a
// pseudometric on the disjoint union attaining it.
struct DistResult {
    Rational value;
    std::vector<Rational> cross;
};

// The pseudometric d_n between equal-arity pointed structures, as the exact
// optimum of a rational LP over cross distances: D >= 0, shared constants
// identified (D = 0), unary predicate gaps as lower bounds (gap / L), the
// triangle families linking D to both metrics, minimizing max_i D(a_i, b_i).
// Errors: signature mismatch, tuple arity mismatch, non-unary predicates,
// and instances with no joint embedding at all (zero-Lipschitz predicate
// gaps or constant clashes).
DistResult dist_n_with_witness(const PointedStructure& x, const PointedStructure& y);
Rational dist_n(const PointedStructure& x, const PointedStructure& y);

// Builds the two-block structure on x's and y's points whose cross metric is
// the witness (zero-distance pairs merged), with arms sourced at x and y.
// The generator images then realize dist exactly inside one structure.
AmalgamResult realize_dist_witness(const PointedStructure& x, const PointedStructure& y, const DistResult& w);

// One-point metric extension request: distances to every base point and a
// value for every unary predicate.
struct ExtensionRequest {
    StructPtr base;
    std::string new_point_label;
    std::vector<Rational> distances;         // parallel to base points
    std::vector<Rational> predicate_values;  // parallel to signature predicates
};

// base plus one new point with exactly the requested data; validates the
// Katetov conditions |r_i - r_j| <= d(x_i, x_j) <= r_i + r_j, the predicate
// Lipschitz conditions, positivity, label freshness and the diameter cap,
// naming the offending pair in every error. Signatures with non-unary
// predicates are rejected (a single point cannot determine mixed tuples).
StructPtr extend_one_point(const ExtensionRequest& req);

}  // namespace fraisse
