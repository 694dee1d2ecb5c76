#include "jordanlab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

namespace jordanlab {

int thread_budget() {
    int def = omp_get_max_threads();
    if (const char* env = std::getenv("JORDANLAB_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    return def;
}

namespace {

using Decoder = std::function<void(std::uint64_t, int*)>;

SweepResult run_serial(std::uint64_t N, int width, const Decoder& decode, const TuplePredicate& pred) {
    SweepResult r;
    std::vector<int> t(std::size_t(width), 0);
    for (std::uint64_t i = 0; i < N; ++i) {
        decode(i, t.data());
        Verdict v = pred(t.data());
        if (v == Verdict::Skip) continue;
        ++r.cases;
        if (v == Verdict::Fail) {
            r.witness = t;
            return r;
        }
    }
    return r;
}

SweepResult run_parallel(std::uint64_t N, int width, const Decoder& decode, const TuplePredicate& pred) {
    const std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> first{none};
    std::uint64_t cases = 0;
    const long long NN = (long long)N;
#pragma omp parallel num_threads(thread_budget()) reduction(+ : cases)
    {
        std::vector<int> t(std::size_t(width), 0);
#pragma omp for schedule(dynamic, 256)
        for (long long i = 0; i < NN; ++i) {
            std::uint64_t u = std::uint64_t(i);
            if (u > first.load(std::memory_order_relaxed)) continue;
            decode(u, t.data());
            Verdict v = pred(t.data());
            if (v == Verdict::Skip) continue;
            ++cases;
            if (v == Verdict::Fail) {
                std::uint64_t cur = first.load();
                while (u < cur && !first.compare_exchange_weak(cur, u)) {
                }
            }
        }
    }
    SweepResult r;
    std::uint64_t f = first.load();
    if (f == none) {
        r.cases = cases;
        return r;
    }
    // Case counts must match the serial kernel, which stops at the witness.
    std::uint64_t counted = 0;
#pragma omp parallel num_threads(thread_budget()) reduction(+ : counted)
    {
        std::vector<int> s(std::size_t(width), 0);
#pragma omp for schedule(dynamic, 256)
        for (long long i = 0; i <= (long long)f; ++i) {
            decode(std::uint64_t(i), s.data());
            if (pred(s.data()) != Verdict::Skip) ++counted;
        }
    }
    std::vector<int> t(std::size_t(width), 0);
    decode(f, t.data());
    r.cases = counted;
    r.witness = t;
    return r;
}

std::uint64_t power(int n, int k) {
    std::uint64_t t = 1;
    for (int i = 0; i < k; ++i) t *= std::uint64_t(n);
    return t;
}

void digits(std::uint64_t idx, int n, int k, int* out) {
    for (int i = k - 1; i >= 0; --i) {
        out[i] = int(idx % std::uint64_t(n));
        idx /= std::uint64_t(n);
    }
}

}  // namespace

SweepResult sweep_serial(int n, int k, const TuplePredicate& pred) {
    return run_serial(power(n, k), k, [n, k](std::uint64_t i, int* t) { digits(i, n, k, t); }, pred);
}

SweepResult sweep_parallel(int n, int k, const TuplePredicate& pred) {
    return run_parallel(power(n, k), k, [n, k](std::uint64_t i, int* t) { digits(i, n, k, t); }, pred);
}

SweepResult sweep(int n, int k, const TuplePredicate& pred, bool parallel) {
    return parallel ? sweep_parallel(n, k, pred) : sweep_serial(n, k, pred);
}

SweepResult sweep_ragged(const std::vector<int>& sizes, int k, const TuplePredicate& pred, bool parallel) {
    std::vector<std::uint64_t> offset(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i) offset[i + 1] = offset[i] + power(sizes[i], k);
    Decoder decode = [&](std::uint64_t idx, int* t) {
        auto it = std::upper_bound(offset.begin(), offset.end(), idx);
        std::size_t i = std::size_t(it - offset.begin()) - 1;
        t[0] = int(i);
        digits(idx - offset[i], sizes[i], k, t + 1);
    };
    return parallel ? run_parallel(offset.back(), k + 1, decode, pred) : run_serial(offset.back(), k + 1, decode, pred);
}

}  // namespace jordanlab
