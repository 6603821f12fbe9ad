#include "fraisse/concentration.hpp"

#include "fraisse/errors.hpp"
#include "testgen.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>

using namespace fraisse;
using testgen::cycle_space;
using testgen::perm_map;
using testgen::uniform_space;

namespace {

GroupAction s3_action() {
    const auto tri = uniform_space(3, Rational(1));
    return group_closure(tri, {perm_map(tri, {1, 2, 0}), perm_map(tri, {1, 0, 2})});
}

GroupAction c6_action() {
    const auto hex = cycle_space(6);
    return group_closure(hex, {perm_map(hex, {1, 2, 3, 4, 5, 0})});
}

}  // namespace

TEST_SUITE("concentration") {
    TEST_CASE("group closure generates S3 on the triangle with the right invariant metric") {
        const GroupAction g = s3_action();
        CHECK(g.size() == 6);
        CHECK(g.elements[0].map == std::vector<int>{0, 1, 2});  // identity first
        CHECK(delta_diameter(g) == Rational(1));
        CHECK(distance_f_mean(g) == Rational(5, 6));

        // Bi-invariance and the raw definition: delta(x, y) = max over base
        // points of d(x(p), y(p)), recomputed directly.
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y) {
                Rational raw(0);
                for (const int p : g.base_tuple)
                    raw = std::max(raw, g.carrier->d(g.elements[static_cast<std::size_t>(x)].map[static_cast<std::size_t>(p)],
                                                     g.elements[static_cast<std::size_t>(y)].map[static_cast<std::size_t>(p)]));
                CHECK(g.delta[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] == raw);
                for (int z = 0; z < 6; ++z) {
                    const int zx = g.comp[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)];
                    const int zy = g.comp[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)];
                    CHECK(g.delta[static_cast<std::size_t>(zx)][static_cast<std::size_t>(zy)] ==
                          g.delta[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
                }
            }

        // Composition and inverse tables are a group.
        for (int x = 0; x < 6; ++x) {
            CHECK(g.comp[static_cast<std::size_t>(x)][static_cast<std::size_t>(g.inverse[static_cast<std::size_t>(x)])] == 0);
            CHECK(g.comp[0][static_cast<std::size_t>(x)] == x);
            CHECK(g.comp[static_cast<std::size_t>(x)][0] == x);
        }
    }

    TEST_CASE("cyclic group of order 6 carries the rotation metric") {
        const GroupAction g = c6_action();
        CHECK(g.size() == 6);
        CHECK(delta_diameter(g) == Rational(3));
        CHECK(distance_f_mean(g) == Rational(3, 2));
        // Distances from the identity along the rotation powers: 0 1 2 3 2 1.
        std::multiset<Rational> row;
        for (int x = 0; x < 6; ++x) row.insert(g.delta[0][static_cast<std::size_t>(x)]);
        CHECK(row == std::multiset<Rational>{Rational(0), Rational(1), Rational(1), Rational(2), Rational(2), Rational(3)});
    }

    TEST_CASE("group closure rejects non-automorphisms and enforces caps") {
        const auto tri = uniform_space(3, Rational(1));
        Embedding bad{pointed_on_all(tri), tri, {0, 0, 2}};
        CHECK_THROWS_AS(group_closure(tri, {bad}), DomainError);
        ClosureCaps caps;
        caps.element_cap = 3;
        CHECK_THROWS_AS(group_closure(tri, {perm_map(tri, {1, 2, 0}), perm_map(tri, {1, 0, 2})}, caps),
                        ResourceLimitError);
    }

    TEST_CASE("l1 power has averaged metric, averaged predicates, diagonal constants") {
        MetricStructure m;
        m.points = {"x", "y"};
        m.dist = {Rational(0), Rational(1), Rational(1), Rational(0)};
        m.signature.predicates.push_back(PredicateDecl{"P", 1, Rational(1), Rational(0), Rational(1)});
        m.tables.push_back({Rational(0), Rational(1)});
        m.signature.constants = {"e"};
        m.constant_points = {0};
        const auto b = make_structure(std::move(m));
        const PowerStructure pw = l1_power(b, 2);
        REQUIRE(pw.structure->size() == 4);
        CHECK(validate(*pw.structure).empty());
        // d((x,y), (y,y)) = (1 + 0) / 2.
        const int xy = power_index(pw, {0, 1});
        const int yy = power_index(pw, {1, 1});
        const int xx = power_index(pw, {0, 0});
        CHECK(pw.structure->d(xy, yy) == Rational(1, 2));
        CHECK(pw.structure->d(xx, yy) == Rational(1));
        CHECK(pw.structure->tables[0][static_cast<std::size_t>(xy)] == Rational(1, 2));
        CHECK(pw.structure->tables[0][static_cast<std::size_t>(yy)] == Rational(1));
        CHECK(pw.structure->constant_points == std::vector<int>{xx});
        // Index and tuple are inverse bijections, odometer order.
        for (int i = 0; i < 4; ++i) CHECK(power_index(pw, power_tuple(pw, i)) == i);
        CHECK(power_tuple(pw, 1) == std::vector<int>{0, 1});
    }

    TEST_CASE("l1 power rejects bad arguments and enforces the point cap") {
        const auto tri = uniform_space(3, Rational(1));
        CHECK_THROWS_AS(l1_power(tri, 0), DomainError);
        CHECK_THROWS_AS(l1_power(tri, 8, 100), ResourceLimitError);
        MetricStructure m;
        m.points = {"x", "y"};
        m.dist = {Rational(0), Rational(1), Rational(1), Rational(0)};
        m.signature.predicates.push_back(PredicateDecl{"R", 2, Rational(1), Rational(0), Rational(1)});
        m.tables.push_back({Rational(0), Rational(0), Rational(0), Rational(0)});
        const auto bin = make_structure(std::move(m));
        CHECK_THROWS_AS(l1_power(bin, 2), DomainError);
    }

    TEST_CASE("diagonal embeddings are isometric and predicate-preserving") {
        const GroupAction g = s3_action();
        const PowerStructure pw = l1_power(g.carrier, 3);
        const std::vector<Embedding> gs{g.elements[1], g.elements[4], g.elements[2]};
        const Embedding diag = diagonal_embedding(pw, gs);
        CHECK(is_embedding(diag));
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y)
                CHECK(pw.structure->d(diag.map[static_cast<std::size_t>(x)], diag.map[static_cast<std::size_t>(y)]) ==
                      g.carrier->d(x, y));
        CHECK_THROWS_AS(diagonal_embedding(pw, {g.elements[0]}), DomainError);  // arity mismatch
    }

    TEST_CASE("concentration exponent matches hand-computed ceilings") {
        CHECK(concentration_n(Rational(1), Rational(1, 10), 2) == 70);
        CHECK(concentration_n(Rational(1), Rational(1, 4), 2) == 12);
        CHECK(concentration_n(Rational(3), Rational(1, 5), 3) == 202);
        CHECK_THROWS_AS(concentration_n(Rational(1), Rational(0), 2), DomainError);
        CHECK_THROWS_AS(concentration_n(Rational(0), Rational(1, 4), 2), DomainError);
    }

    TEST_CASE("theta is componentwise right translation") {
        const GroupAction g = s3_action();
        const std::vector<int> hbar{0, 3, 5, 2};
        for (std::size_t i = 0; i < g.generators.size(); ++i) {
            const auto moved = theta(static_cast<int>(i), hbar, g);
            REQUIRE(moved.size() == hbar.size());
            for (std::size_t t = 0; t < hbar.size(); ++t)
                CHECK(moved[t] == g.comp[static_cast<std::size_t>(hbar[t])][static_cast<std::size_t>(g.generators[i])]);
        }
    }

    TEST_CASE("haar samples are deterministic, in range, and carry the seed") {
        const GroupAction g = s3_action();
        const auto a = sample_haar(g, 10, 99);
        const auto b = sample_haar(g, 10, 99);
        CHECK(a == b);
        CHECK(a.size() == 10);
        for (const int e : a) {
            CHECK(e >= 0);
            CHECK(e < 6);
        }
        CHECK(sample_haar(g, 10, 100) != a);
    }

    TEST_CASE("delta_n is the normalized l1 group metric") {
        const GroupAction g = c6_action();
        const std::vector<int> x{0, 1, 2, 3};
        const std::vector<int> y{3, 1, 5, 3};
        Rational expect(0);
        for (int t = 0; t < 4; ++t)
            expect += g.delta[static_cast<std::size_t>(x[static_cast<std::size_t>(t)])][static_cast<std::size_t>(y[static_cast<std::size_t>(t)])];
        expect /= 4;
        CHECK(delta_n(g, x, y) == expect);
        CHECK(delta_n(g, x, x) == 0);
    }

    TEST_CASE("distance observable is 1-Lipschitz with the documented mean") {
        const GroupAction g = c6_action();
        const auto f = distance_to_point_f(g, std::vector<int>(4, 0));
        const auto x = sample_haar(g, 4, 1);
        const auto y = sample_haar(g, 4, 2);
        CHECK(fraisse::rational_abs(f(x) - f(y)) <= delta_n(g, x, y));
        CHECK(f(std::vector<int>(4, 0)) == 0);
        CHECK(distance_f_mean(g) == Rational(3, 2));
    }

    TEST_CASE("empirical concentration reports mass, certified bound, and csv") {
        const GroupAction g = c6_action();
        const auto f = distance_to_point_f(g, std::vector<int>(8, 0));
        const ConcentrationReport rep = empirical_concentration(g, 8, f, distance_f_mean(g), Rational(1, 2), 500, 4242);
        CHECK(rep.group_size == 6);
        CHECK(rep.n == 8);
        CHECK(rep.samples == 500);
        CHECK(rep.empirical_mass >= 0);
        CHECK(rep.empirical_mass <= 1);
        CHECK(rep.bound >= 0);
        CHECK(rep.bound <= 1);
        const ConcentrationReport rep2 = empirical_concentration(g, 8, f, distance_f_mean(g), Rational(1, 2), 500, 4242);
        CHECK(rep2.empirical_mass == rep.empirical_mass);
        const std::string csv = to_csv({rep});
        CHECK(csv.find("group_size,n,epsilon,samples,empirical_mass,bound,seed") != std::string::npos);
        CHECK(csv.find("6,8,") != std::string::npos);

        // The bound shrinks as n grows.
        const auto f80 = distance_to_point_f(g, std::vector<int>(80, 0));
        const ConcentrationReport big = empirical_concentration(g, 80, f80, distance_f_mean(g), Rational(1, 2), 10, 1);
        CHECK(big.bound <= rep.bound);
    }

    TEST_CASE("find_witness explicit overload searches a materialized power") {
        const GroupAction g = s3_action();
        const int n = 4;
        const PowerStructure pw = l1_power(g.carrier, n);
        const auto a = generated_substructure(g.carrier, {0, 1, 2});
        const auto dom = std::make_shared<EmbeddingSet>(enumerate_embeddings(pointed_on_all(g.carrier), pw.structure));
        const Coloring gamma = random_coloring(dom, 17);
        const WitnessOutcome w = find_witness(gamma, a.tuple, pw, g, Rational(1, 4), WitnessBudget{64}, 3);
        if (w.found) {
            REQUIRE(w.beta.has_value());
            CHECK(is_embedding(*w.beta));
            CHECK(w.achieved <= Rational(1, 2));
            // Independent recomputation of the oscillation over the composites.
            std::vector<Rational> vals;
            for (const int gi : g.generators) {
                Embedding comp = compose(*w.beta, Embedding{pointed_on_all(g.carrier), g.carrier,
                                                            g.elements[static_cast<std::size_t>(gi)].map});
                vals.push_back(coloring_value(gamma, comp));
            }
            Rational lo = vals[0], hi = vals[0];
            for (const auto& v : vals) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(hi - lo == w.achieved);
        } else {
            CHECK(w.samples == 64);
            CHECK(w.achieved > Rational(1, 2));
        }
        const WitnessOutcome w2 = find_witness(gamma, a.tuple, pw, g, Rational(1, 4), WitnessBudget{64}, 3);
        CHECK(w2.found == w.found);
        CHECK(w2.hbar == w.hbar);
        CHECK(to_text(w2) == to_text(w));
    }

    TEST_CASE("find_witness lazy overload matches the explicit one on the same data") {
        const GroupAction g = s3_action();
        const int n = 3;
        const PowerStructure pw = l1_power(g.carrier, n);
        const auto dom = std::make_shared<EmbeddingSet>(enumerate_embeddings(pointed_on_all(g.carrier), pw.structure));
        const Coloring gamma = random_coloring(dom, 23);
        const std::vector<int> a_points{0, 1, 2};
        // Lazy view of the same coloring: map the coordinate tuples back to a
        // power point and look the value up.
        const LazyColoring lazy = [&](const std::vector<std::vector<int>>& arg) {
            std::vector<int> map;
            for (const auto& coords : arg) map.push_back(power_index(pw, coords));
            for (const auto& member : dom->members)
                if (member.map == map) return coloring_value(gamma, member);
            throw DomainError("lazy view: not a domain member");
        };
        const WitnessOutcome we = find_witness(gamma, a_points, pw, g, Rational(1, 8), WitnessBudget{32}, 11);
        const WitnessOutcome wl = find_witness(lazy, a_points, g, n, Rational(1, 8), WitnessBudget{32}, 11);
        CHECK(we.found == wl.found);
        CHECK(we.hbar == wl.hbar);
        CHECK(we.achieved == wl.achieved);
        CHECK(we.samples == wl.samples);
    }

    TEST_CASE("partial automorphism counts on hand spaces") {
        // Symmetric pair: empty map, two singletons fixing, two singletons
        // swapping, the identity, the swap: 7.
        CHECK(partial_automorphisms(uniform_space(2, Rational(1))).size() == 7);
        // Asymmetric predicate values kill the swaps: 4.
        const auto ap = testgen::pspace({"x", "y"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                                        std::nullopt, {Rational(0), Rational(1)});
        CHECK(partial_automorphisms(ap).size() == 4);
        // Path 1-1-2: 22 (counted exhaustively).
        const auto path = testgen::space({"a", "b", "c"},
                                         {{Rational(0), Rational(1), Rational(2)},
                                          {Rational(1), Rational(0), Rational(1)},
                                          {Rational(2), Rational(1), Rational(0)}});
        CHECK(partial_automorphisms(path).size() == 22);
        // Every reported partial is distance- and value-preserving.
        for (const auto& pa : partial_automorphisms(path)) {
            REQUIRE(pa.domain.size() == pa.image.size());
            for (std::size_t i = 0; i < pa.domain.size(); ++i)
                for (std::size_t j = 0; j < pa.domain.size(); ++j)
                    CHECK(path->d(pa.domain[i], pa.domain[j]) == path->d(pa.image[i], pa.image[j]));
        }
    }

    TEST_CASE("eppa search succeeds on the singleton and the symmetric pair") {
        const auto single = uniform_space(1, Rational(1));
        const EppaOutcome o1 = eppa_search(single);
        CHECK(o1.found);
        const auto pair = uniform_space(2, Rational(1));
        const EppaOutcome o2 = eppa_search(pair);
        CHECK(o2.found);
        REQUIRE(o2.b);
        CHECK(validate(*o2.b).empty());
        CHECK(is_embedding(o2.inclusion));
        // Every partial automorphism extends to a full automorphism of b.
        REQUIRE(o2.partials.size() == partial_automorphisms(pair).size());
        REQUIRE(o2.extensions.size() == o2.partials.size());
        for (std::size_t i = 0; i < o2.extensions.size(); ++i) {
            const auto& ext = o2.extensions[i];
            CHECK(is_embedding(ext));
            CHECK(ext.map.size() == o2.b->points.size());
            const auto& pa = o2.partials[i];
            for (std::size_t k = 0; k < pa.domain.size(); ++k)
                CHECK(ext.map[static_cast<std::size_t>(o2.inclusion.map[static_cast<std::size_t>(pa.domain[k])])] ==
                      o2.inclusion.map[static_cast<std::size_t>(pa.image[k])]);
        }
    }

    TEST_CASE("eppa search reports capped failure honestly") {
        const auto path = testgen::space({"a", "b", "c"},
                                         {{Rational(0), Rational(1), Rational(2)},
                                          {Rational(1), Rational(0), Rational(1)},
                                          {Rational(2), Rational(1), Rational(0)}});
        EppaCaps caps;
        caps.max_points = 3;
        const EppaOutcome out = eppa_search(path, caps);
        CHECK_FALSE(out.found);
        CHECK(out.candidates_examined >= 1);
        CHECK(out.max_size_tried <= 3);
        CHECK_FALSE(out.summary.empty());
    }

    TEST_CASE("weak extension witness covers the inclusion case") {
        const auto pair = uniform_space(2, Rational(1));
        const auto a = pointed_on_all(pair);
        const Embedding incl = identity_embedding(pair);
        const auto autos = automorphisms(pair);
        const WepOutcome out = weak_extension_witness(a, incl, autos, Rational(0));
        CHECK(out.found);
        REQUIRE(out.b_prime);
        CHECK(is_embedding(out.t_copy));
        REQUIRE(out.gs.size() == autos.size());
        CHECK(out.closure.size() >= 1);
        std::vector<Embedding> primes, originals;
        for (std::size_t i = 0; i < autos.size(); ++i) {
            primes.push_back(compose(out.gs[i], out.t_copy));
            originals.push_back(compose(out.t_copy, autos[i]));
        }
        CHECK(eps_approximates(out.b_prime, primes, a, originals, Rational(0)));
    }
}
