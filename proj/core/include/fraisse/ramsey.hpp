#pragma once

#include "fraisse/embeddings.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fraisse {

// A 1-Lipschitz map from an embedding set (carrying its rho metric) into
// [0, 1]. Values are stored in domain enumeration order.
struct Coloring {
    std::shared_ptr<const EmbeddingSet> domain;
    std::vector<Rational> values;

    const Rational& operator[](int i) const { return values[i]; }
};

// Throws DomainError unless the value list matches the domain, every value
// lies in [0, 1], and |gamma(alpha) - gamma(beta)| <= rho(alpha, beta) holds
// on every pair of domain members.
void check_coloring(const Coloring& gamma);
bool is_valid_coloring(const Coloring& gamma);

// Value at a domain member; DomainError when e is not in the domain.
const Rational& coloring_value(const Coloring& gamma, const Embedding& e);

// Max minus min of gamma over the listed members (each must lie in the
// domain). Empty list is a DomainError.
Rational oscillation(const Coloring& gamma, const std::vector<Embedding>& members);

// One approximate-Ramsey question: does every coloring of Emb(A, C) admit a
// copy of B inside C on which it oscillates by at most epsilon across F?
struct RamseyInstance {
    PointedStructure a;
    StructPtr b;
    std::vector<Embedding> f;  // nonempty, pairwise distinct embeddings A -> B
    Rational epsilon;          // > 0
    StructPtr c;               // candidate witness structure
};

enum class VerifierStatus {
    Exact,         // worst_value is the exact adversarial value
    Inconclusive,  // node budget ran out; [worst_value, upper_bound] brackets it
    NoEmbedding,   // Emb(B, C) is empty: the instance fails outright
};

struct VerifierReport {
    VerifierStatus status = VerifierStatus::Exact;

    // Exact: the value max over colorings gamma of min over beta in Emb(B, C)
    // of the oscillation of gamma on F(beta). Inconclusive: the best certified
    // lower bound. NoEmbedding: meaningless (the value is +infinity); the text
    // serialization prints "+inf".
    Rational worst_value;
    Rational upper_bound;  // equals worst_value when exact
    Rational epsilon;      // copied from the instance

    // Witness coloring achieving worst_value under best response (empty when
    // no embedding exists).
    Coloring worst_coloring;

    // Best response to worst_coloring, when Emb(B, C) is nonempty.
    std::optional<Embedding> best_beta_per_coloring;

    bool holds = false;  // decidedly true: upper_bound <= epsilon
    std::uint64_t nodes_explored = 0;
};

struct SearchLimits {
    std::uint64_t node_budget = 100'000;  // LP nodes in the adversarial search
};

// Exact adversarial verification by branch and bound: branch over, for each
// (deduplicated) beta, the ordered pair of F-indices whose gap attains the
// oscillation, so every leaf is an exact LP over the Lipschitz polytope;
// interior nodes are pruned with LP relaxation bounds. Budget overrun yields
// an Inconclusive report with the best bounds found, never a silent answer.
VerifierReport worst_coloring(const RamseyInstance& inst, const SearchLimits& limits = {});

// True iff worst_value <= epsilon (closed comparison). When the search is
// inconclusive but the bounds still decide the comparison, the decision is
// returned; otherwise throws ResourceLimitError.
bool check_arp_instance(const RamseyInstance& inst, const SearchLimits& limits = {});

// The beta in Emb(B, C) minimizing the oscillation of gamma over F(beta),
// ties broken by enumeration order, together with the achieved oscillation.
// gamma's domain must be Emb(A, C); DomainError when Emb(B, C) is empty.
std::pair<Embedding, Rational> best_beta(const Coloring& gamma, const RamseyInstance& inst);

// Canonical seeded 1-Lipschitz coloring: gamma(alpha) = min(1, rho-distance
// from alpha to S) for a uniformly drawn nonempty subset S of the domain.
// Deterministic for a fixed seed; DomainError on an empty domain.
Coloring random_coloring(const std::shared_ptr<const EmbeddingSet>& domain, std::uint64_t seed);

// True iff for every i the tuple images of primes[i] and originals[i] are
// within epsilon in bp, i.e. max_j d(primes[i](a_j), originals[i](a_j)) <=
// epsilon. Both lists must consist of embeddings of a into bp and have equal
// length.
bool eps_approximates(const StructPtr& bp, const std::vector<Embedding>& primes,
                      const PointedStructure& a, const std::vector<Embedding>& originals,
                      const Rational& epsilon);

// Deterministic plain-text report (stable across reruns; no timestamps),
// ending in an FNV-1a digest line for cheap byte-comparison.
std::string to_text(const VerifierReport& report);

}  // namespace fraisse
