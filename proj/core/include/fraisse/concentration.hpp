#pragma once

#include "fraisse/embeddings.hpp"
#include "fraisse/ramsey.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fraisse {

// A finite automorphism group H acting on a carrier structure, together with
// the bi-invariant metric delta(h1, h2) = max over h in H of the sup-distance
// between h1h(b) and h2h(b) on the base tuple b. Elements are listed in
// breadth-first word order with the identity first; comp and inverse are the
// group tables (comp[x][y] is x composed after y, i.e. the product xy).
struct GroupAction {
    StructPtr carrier;
    std::vector<Embedding> elements;
    std::vector<int> generators;  // indices into elements, in caller order
    std::vector<int> base_tuple;  // carrier point indices, generating
    std::vector<std::vector<Rational>> delta;
    std::vector<std::vector<int>> comp;
    std::vector<int> inverse;

    int size() const { return static_cast<int>(elements.size()); }
};

struct ClosureCaps {
    int element_cap = 10'000;  // closure size
    int table_cap = 1'000;     // largest |H| for which the delta/comp tables are materialized
};

// Closes the generators under composition (breadth-first over words, which in
// a finite group also yields all inverses), then fills in the delta table.
// The base tuple defaults to all carrier points and must generate the
// carrier. Throws DomainError for non-automorphism generators and
// ResourceLimitError past the caps.
GroupAction group_closure(const StructPtr& b, const std::vector<Embedding>& generators,
                          const ClosureCaps& caps = {},
                          std::optional<std::vector<int>> base_tuple = std::nullopt);

// The normalized l1 power: points are n-tuples of base points (odometer
// order, last coordinate fastest), d((x), (y)) = (1/n) sum d(x_i, y_i), unary
// predicate values are coordinate averages, constants sit on diagonal tuples.
struct PowerStructure {
    StructPtr base;
    int n = 0;
    StructPtr structure;
};

// Throws DomainError for an invalid/empty base, n < 1, or a signature with a
// predicate of arity >= 2 (averaging such a predicate need not stay
// Lipschitz), and ResourceLimitError when |base|^n exceeds the point cap.
PowerStructure l1_power(const StructPtr& b, int n, long long point_cap = 1024);

// Index of a tuple in the power's point order, and back.
int power_index(const PowerStructure& p, const std::vector<int>& tuple);
std::vector<int> power_tuple(const PowerStructure& p, int index);

// x -> (g_1(x), ..., g_n(x)): an isometric, predicate-preserving embedding of
// the base into its l1 power, one coordinate per supplied automorphism.
Embedding diagonal_embedding(const PowerStructure& power, const std::vector<Embedding>& gs);
Embedding diagonal_embedding(const StructPtr& b, const std::vector<Embedding>& gs, long long point_cap = 1024);

// Least n making the bounded-differences tail 2 exp(-2 n eps^2 / diam^2)
// drop strictly below 1/k: n = ceil(diam^2 ln(2k) / (2 eps^2)), evaluated
// with certified rational log bounds refined until the ceiling is pinned.
long long concentration_n(const Rational& diam_delta, const Rational& epsilon, int k);

// Componentwise right translation by generator i (0-based): (h_t) -> (h_t g_i).
std::vector<int> theta(int i, const std::vector<int>& hbar, const GroupAction& g);

// Uniform i.i.d. sample from H^n as element indices; deterministic per seed.
std::vector<int> sample_haar(const GroupAction& g, int n, std::uint64_t seed);

// The normalized l1 metric on H^n induced by delta.
Rational delta_n(const GroupAction& g, const std::vector<int>& x, const std::vector<int>& y);

// Max entry of the delta table.
Rational delta_diameter(const GroupAction& g);

// The canonical 1-Lipschitz observable on H^n: delta_n distance to a fixed
// point (the returned closure owns a copy of the group data), plus its exact
// mean under the uniform measure, which is reference-point independent.
std::function<Rational(const std::vector<int>&)> distance_to_point_f(const GroupAction& g, std::vector<int> point);
Rational distance_f_mean(const GroupAction& g);

struct ConcentrationReport {
    int group_size = 0;
    int n = 0;
    Rational epsilon;
    std::uint64_t samples = 0;
    Rational empirical_mass;  // fraction of samples with |f - mean| > epsilon
    Rational bound;           // certified tail bound 2 exp(-2 n eps^2 / diam^2), clamped to [0, 1]
    std::uint64_t seed = 0;
};

// Samples H^n and measures how often f deviates from its mean by more than
// epsilon, against the analytic tail bound. f is spot-checked for
// 1-Lipschitzness against the previous sample (DomainError on violation).
ConcentrationReport empirical_concentration(const GroupAction& g, int n,
                                            const std::function<Rational(const std::vector<int>&)>& f,
                                            const Rational& f_mean, const Rational& epsilon, std::uint64_t samples,
                                            std::uint64_t seed);

// CSV with header group_size,n,epsilon,samples,empirical_mass,bound,seed.
std::string to_csv(const std::vector<ConcentrationReport>& reports);

// A coloring of Emb(A, l1_power(carrier, n)) evaluated lazily: the argument
// lists, per point of A (realized as carrier points), the n-tuple of carrier
// points that is its image. Used when the power is too large to materialize;
// the caller guarantees 1-Lipschitzness with respect to rho.
using LazyColoring = std::function<Rational(const std::vector<std::vector<int>>&)>;

struct WitnessBudget {
    std::uint64_t max_samples = 32;
};

struct WitnessOutcome {
    bool found = false;
    std::vector<int> hbar;          // winning (or best-seen) sample, element indices
    std::optional<Embedding> beta;  // diagonal embedding, when the power is materialized
    Rational achieved;              // exact oscillation of the returned candidate
    std::uint64_t samples = 0;      // draws consumed
};

// Randomized witness search for the diagonal-embedding argument: draw hbar
// uniformly from H^n, form beta = diagonal embedding along (h_1, ..., h_n),
// and accept the first beta whose coloring oscillation over the composites
// beta o (g_i restricted to A) is <= 2 epsilon; A is given by its carrier
// points (generator-tuple entries first). Failure past the budget reports the
// best oscillation seen, never a fabricated success.
WitnessOutcome find_witness(const LazyColoring& gamma, const std::vector<int>& a_points, const GroupAction& g, int n,
                            const Rational& epsilon, const WitnessBudget& budget, std::uint64_t seed);

// Same search against a materialized power and an explicit coloring of
// Emb(A, power) for A generated by the anchor tuple inside the carrier.
WitnessOutcome find_witness(const Coloring& gamma, const std::vector<int>& anchor, const PowerStructure& power,
                            const GroupAction& g, const Rational& epsilon, const WitnessBudget& budget,
                            std::uint64_t seed);

// Deterministic text report in the same shape as the verifier reports.
std::string to_text(const WitnessOutcome& w);

// A distance- and value-preserving partial map of a structure: an
// isomorphism between two of its substructures (constants, when present,
// must belong to both sides and be fixed).
struct PartialIso {
    std::vector<int> domain;  // point indices, ascending
    std::vector<int> image;
};

// Every partial automorphism of a, deterministically ordered (domain subsets
// in bitmask order, images lexicographic). Includes the empty map.
std::vector<PartialIso> partial_automorphisms(const StructPtr& a);

struct EppaCaps {
    int max_points = 8;                  // candidate size cap
    std::uint64_t max_candidates = 200'000;
    int distance_set_cap = 32;           // additive-closure values kept
    EnumerationLimits enumeration;       // automorphism search caps
};

struct EppaOutcome {
    bool found = false;
    StructPtr b;                         // witness structure, when found
    Embedding inclusion;                 // copy of a inside b (leading block)
    std::vector<PartialIso> partials;    // enumerated partial automorphisms of a
    std::vector<Embedding> extensions;   // per partial, an automorphism of b extending it
    std::uint64_t candidates_examined = 0;
    int max_size_tried = 0;
    std::string summary;                 // deterministic statistics text
};

// Brute-force extension-property search: candidates contain a as their
// leading block, new distances come from the additive closure of a's
// distance set (capped), new predicate values from a's value sets; the
// smallest candidate all of whose partial automorphisms extend to full
// automorphisms wins. Not-found (caps exhausted) is a legitimate reported
// outcome with explored-space statistics.
EppaOutcome eppa_search(const StructPtr& a, const EppaCaps& caps = {});

struct WepOutcome {
    bool found = false;
    StructPtr b_prime;
    Embedding t_copy;             // embedding of the alphas' target into b_prime
    std::vector<Embedding> gs;    // automorphisms approximating the alphas
    GroupAction closure;          // group generated by gs, within caps
    std::uint64_t candidates_examined = 0;
    std::string summary;
};

// Searches for (B', g_1..g_m) epsilon-approximating (A, alpha_1..alpha_m):
// candidates B' contain the alphas' common target as their leading block,
// inclusion designates the copy of A inside that target, and each g_i is the
// first automorphism of B' moving the copy of A to within epsilon of
// alpha_i's image; the generated group must close within the closure caps.
WepOutcome weak_extension_witness(const PointedStructure& a, const Embedding& inclusion,
                                  const std::vector<Embedding>& alphas, const Rational& epsilon,
                                  const EppaCaps& caps = {}, const ClosureCaps& closure_caps = {});

}  // namespace fraisse
