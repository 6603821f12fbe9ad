#pragma once

#include "fraisse/structures.hpp"

#include <functional>
#include <vector>

namespace fraisse {

// Structure-preserving injection from a pointed source into a target of the
// same signature: distances, predicate values and constants all preserved
// exactly. Instances produced by this module always satisfy that; use
// is_embedding for an independent recheck.
struct Embedding {
    PointedStructure source;
    StructPtr target;
    std::vector<int> map;  // source point index -> target point index

    int operator()(int source_point) const { return map[source_point]; }

    // Image of the source generator tuple, beta(a_1), ..., beta(a_n).
    std::vector<int> image_tuple() const;

    bool operator==(const Embedding& o) const {
        return map == o.map && source == o.source &&
               (target == o.target || (target && o.target && *target == *o.target));
    }
};

// Emb(A, B): all embeddings of a pointed A into B, in lexicographic order of
// the map (source points in index order, target candidates ascending).
struct EmbeddingSet {
    PointedStructure source;
    StructPtr target;
    std::vector<Embedding> members;

    int size() const { return static_cast<int>(members.size()); }
    const Embedding& operator[](int i) const { return members[i]; }
    int index_of(const Embedding& e) const;  // -1 when absent
};

struct EnumerationLimits {
    long long node_cap = 1'000'000;  // candidate partial-map nodes
};

// All structure-preserving injections A -> B, deterministic lexicographic
// order, possibly empty. Throws SignatureMismatchError on different
// signatures and ResourceLimitError past the node cap.
EmbeddingSet enumerate_embeddings(const PointedStructure& a, const StructPtr& b,
                                  const EnumerationLimits& limits = {});

// rho(alpha, beta): sup-distance between the generator-tuple images,
// max_i d(alpha(a_i), beta(a_i)). A metric on each EmbeddingSet. Requires
// equal sources (same tuple) and equal targets.
Rational rho(const Embedding& alpha, const Embedding& beta);

// beta o delta. Requires delta.target = beta's source structure.
Embedding compose(const Embedding& beta, const Embedding& delta);

// F(beta) = { beta o delta : delta in F }, duplicates removed, input order
// kept. beta is injective, so the size never actually drops.
std::vector<Embedding> push_forward(const std::vector<Embedding>& f, const Embedding& beta);

// Max pairwise gap of gamma over s. Requires s nonempty.
Rational oscillation(const std::function<Rational(const Embedding&)>& gamma, const std::vector<Embedding>& s);

// The full automorphism group of b in deterministic order; the identity is
// always first (it is the lexicographically least injective self-map).
std::vector<Embedding> automorphisms(const StructPtr& b, const EnumerationLimits& limits = {});

Embedding identity_embedding(const StructPtr& b);

// Exhaustive independent recheck of the Embedding invariants.
bool is_embedding(const Embedding& e);

}  // namespace fraisse
