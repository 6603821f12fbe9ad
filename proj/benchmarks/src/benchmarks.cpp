// Microbenchmarks for the hot paths: embedding enumeration, the exact LP
// behind the tuple pseudometric, free amalgamation, the adversarial coloring
// search, power construction and group closure.
#include "fraisse/amalgamation.hpp"
#include "fraisse/concentration.hpp"
#include "fraisse/embeddings.hpp"
#include "fraisse/ramsey.hpp"
#include "fraisse/structures.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using namespace fraisse;

StructPtr uniform(int m, const Rational& c) {
    MetricStructure s;
    for (int i = 0; i < m; ++i) s.points.push_back("u" + std::to_string(i));
    s.dist.assign(static_cast<std::size_t>(m) * m, Rational(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) s.d(i, j) = c;
    return make_structure(std::move(s));
}

StructPtr cycle(int m) {
    MetricStructure s;
    for (int i = 0; i < m; ++i) s.points.push_back("c" + std::to_string(i));
    s.dist.assign(static_cast<std::size_t>(m) * m, Rational(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int k = i < j ? j - i : i - j;
            s.d(i, j) = Rational(std::min(k, m - k));
        }
    return make_structure(std::move(s));
}

void bm_enumerate_embeddings(benchmark::State& state) {
    const StructPtr a = uniform(3, Rational(1));
    const StructPtr b = uniform(static_cast<int>(state.range(0)), Rational(1));
    const PointedStructure ap = pointed_on_all(a);
    for (auto _ : state) {
        const EmbeddingSet set = enumerate_embeddings(ap, b);
        benchmark::DoNotOptimize(set.size());
    }
}
BENCHMARK(bm_enumerate_embeddings)->Arg(5)->Arg(6)->Arg(7);

void bm_dist_n(benchmark::State& state) {
    const StructPtr x = cycle(static_cast<int>(state.range(0)));
    const StructPtr y = uniform(static_cast<int>(state.range(0)), Rational(1));
    const PointedStructure xp = pointed_on_all(x);
    const PointedStructure yp = pointed_on_all(y);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist_n(xp, yp));
    }
}
BENCHMARK(bm_dist_n)->Arg(3)->Arg(4)->Arg(5);

void bm_free_amalgam(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const StructPtr a = uniform(2, Rational(1));
    const StructPtr b = uniform(m, Rational(1));
    const PointedStructure ap = pointed_on_all(a);
    Embedding phi{ap, b, {0, 1}};
    for (auto _ : state) {
        const AmalgamResult r = free_amalgam(ap, phi, phi);
        benchmark::DoNotOptimize(r.amalgam->size());
    }
}
BENCHMARK(bm_free_amalgam)->Arg(4)->Arg(6)->Arg(8);

void bm_worst_coloring(benchmark::State& state) {
    const StructPtr c = uniform(static_cast<int>(state.range(0)), Rational(1));
    const StructPtr b = uniform(2, Rational(1));
    const PointedStructure a = generated_substructure(b, {0});
    RamseyInstance inst;
    inst.a = a;
    inst.b = b;
    inst.c = c;
    inst.epsilon = Rational(1, 2);
    inst.f = enumerate_embeddings(a, b).members;
    for (auto _ : state) {
        const VerifierReport rep = worst_coloring(inst);
        benchmark::DoNotOptimize(rep.worst_value);
    }
}
BENCHMARK(bm_worst_coloring)->Arg(3)->Arg(4);

void bm_l1_power(benchmark::State& state) {
    const StructPtr b = uniform(3, Rational(1));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const PowerStructure p = l1_power(b, n);
        benchmark::DoNotOptimize(p.structure->size());
    }
}
BENCHMARK(bm_l1_power)->Arg(2)->Arg(3)->Arg(4);

void bm_group_closure(benchmark::State& state) {
    const StructPtr c = cycle(static_cast<int>(state.range(0)));
    std::vector<int> rotation;
    for (int i = 0; i < c->size(); ++i) rotation.push_back((i + 1) % c->size());
    const Embedding gen{pointed_on_all(c), c, rotation};
    for (auto _ : state) {
        const GroupAction g = group_closure(c, {gen});
        benchmark::DoNotOptimize(g.size());
    }
}
BENCHMARK(bm_group_closure)->Arg(6)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
