#include "fraisse/ramsey.hpp"

#include "fraisse/errors.hpp"
#include "oracles.hpp"
#include "testgen.hpp"

#include "doctest.h"

#include <memory>

using namespace fraisse;
using testgen::space;
using testgen::uniform_space;

namespace {

// A = single point, B = C = pair at distance 1, F = both embeddings of A
// into B. The adversary colors the two points 0 and 1; every copy of B sees
// oscillation 1.
RamseyInstance pair_instance(const Rational& eps) {
    const auto pair = uniform_space(2, Rational(1));
    RamseyInstance inst;
    inst.a = generated_substructure(pair, {0});
    inst.b = pair;
    inst.c = pair;
    inst.f = enumerate_embeddings(inst.a, pair).members;
    inst.epsilon = eps;
    return inst;
}

std::shared_ptr<const EmbeddingSet> domain_of(const RamseyInstance& inst) {
    return std::make_shared<EmbeddingSet>(enumerate_embeddings(inst.a, inst.c));
}

}  // namespace

TEST_SUITE("ramsey") {
    TEST_CASE("two-point hand instance has adversarial value exactly 1") {
        const auto inst = pair_instance(Rational(1, 2));
        const VerifierReport rep = worst_coloring(inst);
        CHECK(rep.status == VerifierStatus::Exact);
        CHECK(rep.worst_value == Rational(1));
        CHECK(rep.upper_bound == Rational(1));
        CHECK_FALSE(rep.holds);
        CHECK(is_valid_coloring(rep.worst_coloring));
        REQUIRE(rep.best_beta_per_coloring.has_value());
        // The report's value is reproducible from its own witness coloring.
        const auto br = best_beta(rep.worst_coloring, inst);
        CHECK(br.second == rep.worst_value);
        CHECK(check_arp_instance(pair_instance(Rational(1))));
        CHECK_FALSE(check_arp_instance(pair_instance(Rational(1, 2))));
    }

    TEST_CASE("singleton F always holds with value 0") {
        auto inst = pair_instance(Rational(1, 4));
        inst.f.pop_back();
        const VerifierReport rep = worst_coloring(inst);
        CHECK(rep.status == VerifierStatus::Exact);
        CHECK(rep.worst_value == 0);
        CHECK(rep.holds);
    }

    TEST_CASE("equilateral triangle halves the oscillation") {
        // A = point, B = pair at 1, C = equilateral triangle at 1, F = both.
        // Any coloring has two of three points within 1/2, so the adversary
        // caps at 1/2 and attains it.
        const auto tri = uniform_space(3, Rational(1));
        const auto pair = uniform_space(2, Rational(1));
        RamseyInstance inst;
        inst.a = generated_substructure(pair, {0});
        inst.b = pair;
        inst.c = tri;
        inst.f = enumerate_embeddings(inst.a, pair).members;
        inst.epsilon = Rational(1, 2);
        const VerifierReport rep = worst_coloring(inst);
        CHECK(rep.status == VerifierStatus::Exact);
        CHECK(rep.worst_value == Rational(1, 2));
        CHECK(rep.holds);  // closed comparison at epsilon = 1/2
    }

    TEST_CASE("missing copies of B are reported, never silently passed") {
        const auto pair = uniform_space(2, Rational(1));
        const auto big = uniform_space(2, Rational(2));
        RamseyInstance inst;
        inst.a = generated_substructure(big, {0});
        inst.b = big;  // no embedding of the distance-2 pair into c
        inst.c = pair;
        inst.f = enumerate_embeddings(inst.a, big).members;
        inst.epsilon = Rational(1);
        const VerifierReport rep = worst_coloring(inst);
        CHECK(rep.status == VerifierStatus::NoEmbedding);
        CHECK_FALSE(rep.holds);
        CHECK(to_text(rep).find("+inf") != std::string::npos);
    }

    TEST_CASE("node budget exhaustion yields honest brackets") {
        const auto tri = uniform_space(3, Rational(1));
        const auto pair = uniform_space(2, Rational(1));
        RamseyInstance inst;
        inst.a = generated_substructure(pair, {0});
        inst.b = pair;
        inst.c = tri;
        inst.f = enumerate_embeddings(inst.a, pair).members;
        inst.epsilon = Rational(1, 4);
        SearchLimits tight;
        tight.node_budget = 1;
        const VerifierReport rep = worst_coloring(inst, tight);
        CHECK(rep.status == VerifierStatus::Inconclusive);
        CHECK(rep.worst_value <= rep.upper_bound);
        const VerifierReport full = worst_coloring(inst);
        CHECK(full.status == VerifierStatus::Exact);
        CHECK(rep.worst_value <= full.worst_value);
        CHECK(full.worst_value <= rep.upper_bound);
        CHECK_THROWS_AS(check_arp_instance(inst, tight), ResourceLimitError);
    }

    TEST_CASE("check_coloring enforces range, domain, and Lipschitz bounds") {
        const auto inst = pair_instance(Rational(1, 2));
        const auto dom = domain_of(inst);
        Coloring ok{dom, {Rational(0), Rational(1)}};
        CHECK_NOTHROW(check_coloring(ok));
        CHECK(is_valid_coloring(ok));
        Coloring wrong_len{dom, {Rational(0)}};
        CHECK_THROWS_AS(check_coloring(wrong_len), DomainError);
        Coloring out_of_range{dom, {Rational(0), Rational(2)}};
        CHECK_THROWS_AS(check_coloring(out_of_range), DomainError);
        // rho between the two singleton embeddings is 1; a gap of 1 is fine,
        // but shrink the metric and it breaks.
        const auto tupd = std::make_shared<EmbeddingSet>(
            enumerate_embeddings(generated_substructure(uniform_space(2, Rational(1, 3)), {0}), uniform_space(2, Rational(1, 3))));
        Coloring lip{tupd, {Rational(0), Rational(1)}};
        CHECK_THROWS_AS(check_coloring(lip), DomainError);
        CHECK_FALSE(is_valid_coloring(lip));
    }

    TEST_CASE("coloring_value looks members up by identity of data") {
        const auto inst = pair_instance(Rational(1, 2));
        const auto dom = domain_of(inst);
        Coloring g{dom, {Rational(1, 4), Rational(3, 4)}};
        CHECK(coloring_value(g, dom->members[1]) == Rational(3, 4));
        const auto other = uniform_space(3, Rational(1));
        CHECK_THROWS_AS(coloring_value(g, identity_embedding(other)), DomainError);
    }

    TEST_CASE("random colorings are valid, reproducible, and seed-sensitive") {
        const auto tri = uniform_space(3, Rational(1));
        const auto dom = std::make_shared<EmbeddingSet>(
            enumerate_embeddings(generated_substructure(tri, {0, 1}), tri));
        const Coloring a = random_coloring(dom, 7);
        const Coloring b = random_coloring(dom, 7);
        CHECK(a.values == b.values);
        CHECK(is_valid_coloring(a));
        bool varied = false;
        for (std::uint64_t s = 0; s < 6 && !varied; ++s) varied = (random_coloring(dom, s).values != a.values);
        CHECK(varied);
    }

    TEST_CASE("oscillation over selected members") {
        const auto inst = pair_instance(Rational(1, 2));
        const auto dom = domain_of(inst);
        Coloring g{dom, {Rational(1, 4), Rational(3, 4)}};
        CHECK(oscillation(g, dom->members) == Rational(1, 2));
        CHECK(oscillation(g, {dom->members[0]}) == 0);
    }

    TEST_CASE("eps_approximates compares image tuples pointwise") {
        const auto tri = uniform_space(3, Rational(1));
        const auto a = generated_substructure(tri, {0});
        const auto embs = enumerate_embeddings(a, tri).members;
        CHECK(eps_approximates(tri, {embs[0]}, a, {embs[0]}, Rational(0)));
        CHECK(eps_approximates(tri, {embs[0]}, a, {embs[1]}, Rational(1)));
        CHECK_FALSE(eps_approximates(tri, {embs[0]}, a, {embs[1]}, Rational(1, 2)));
        CHECK_THROWS_AS(eps_approximates(tri, {embs[0]}, a, {embs[0], embs[1]}, Rational(1)), DomainError);
    }

    TEST_CASE("reports serialize deterministically with a digest") {
        const auto inst = pair_instance(Rational(1, 2));
        const std::string t1 = to_text(worst_coloring(inst));
        const std::string t2 = to_text(worst_coloring(inst));
        CHECK(t1 == t2);
        CHECK(t1.find("worst_value") != std::string::npos);
        CHECK(t1.find("digest") != std::string::npos);
    }

    TEST_CASE("verifier agrees with the grid oracle on mixed mini instances") {
        // Unit-scale batch; the acceptance run covers 30 randomized ones.
        const auto tri = uniform_space(3, Rational(1));
        const auto pair = uniform_space(2, Rational(1));
        for (const Rational eps : {Rational(1, 2), Rational(1, 4)}) {
            RamseyInstance inst;
            inst.a = generated_substructure(pair, {0});
            inst.b = pair;
            inst.c = tri;
            inst.f = enumerate_embeddings(inst.a, pair).members;
            inst.epsilon = eps;
            const VerifierReport rep = worst_coloring(inst);
            REQUIRE(rep.status == VerifierStatus::Exact);
            const Rational step = eps / 4;
            const Rational g = oracles::grid_worst_oracle(inst, step);
            CHECK(g <= rep.worst_value);
            CHECK(rep.worst_value <= g + step);
        }
    }
}
