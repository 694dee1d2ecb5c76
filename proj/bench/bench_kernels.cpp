#include "jordanlab/axioms.hpp"
#include "jordanlab/linalg.hpp"
#include "jordanlab/parallel.hpp"
#include "jordanlab/tangent.hpp"

#include <benchmark/benchmark.h>

using namespace jordanlab;

namespace {

Matrix random_matrix(RingRef r, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = r->random(rng, 4);
    return m;
}

void BM_multiply(benchmark::State& st, bool parallel) {
    RingRef Q = Ring::rationals();
    auto n = std::size_t(st.range(0));
    Matrix a = random_matrix(Q, n, 1), b = random_matrix(Q, n, 2);
    for (auto _ : st) benchmark::DoNotOptimize(parallel ? multiply_parallel(a, b) : multiply_serial(a, b));
}

// Associativity of a random table of size n, the shape of an axiom sweep.
void BM_sweep(benchmark::State& st, bool parallel) {
    int n = int(st.range(0));
    std::vector<int> table(std::size_t(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) table[std::size_t(i * n + j)] = (i + j) % n;
    auto pred = [&](const int* t) {
        auto m = [&](int x, int y) { return table[std::size_t(x * n + y)]; };
        return m(m(t[0], t[1]), t[2]) == m(t[0], m(t[1], t[2])) ? Verdict::Pass : Verdict::Fail;
    };
    for (auto _ : st) benchmark::DoNotOptimize(parallel ? sweep_parallel(n, 3, pred) : sweep_serial(n, 3, pred));
}

void BM_jordan_axioms(benchmark::State& st, bool parallel) {
    auto fg = std::make_shared<const FiniteGeometry>(Geometry::parse("projline:Fp:7"));
    auto t = jordan_table(fg);
    for (auto _ : st) benchmark::DoNotOptimize(check_jordan(t, parallel));
}

void BM_pair_identities(benchmark::State& st, bool parallel) {
    auto p = matrix_pair(Ring::rationals(), 2, 2);
    PairCheckOptions opt;
    opt.samples = 200;
    opt.jets = {};
    opt.parallel = parallel;
    for (auto _ : st) benchmark::DoNotOptimize(check_pair_identities(p, opt));
}

}  // namespace

BENCHMARK_CAPTURE(BM_multiply, serial, false)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_multiply, parallel, true)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_sweep, serial, false)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_sweep, parallel, true)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_jordan_axioms, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_jordan_axioms, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_pair_identities, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_pair_identities, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
