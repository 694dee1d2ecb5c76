#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace jordanlab {

// Thread budget: JORDANLAB_THREADS if set (>= 1), otherwise the OpenMP default.
int thread_budget();

enum class Verdict { Skip, Pass, Fail };

struct SweepResult {
    std::uint64_t cases = 0;
    // lexicographically first failing tuple
    std::optional<std::vector<int>> witness;
};

using TuplePredicate = std::function<Verdict(const int* tuple)>;

// Evaluate pred on every tuple of [0,n)^k in lexicographic order.
SweepResult sweep_serial(int n, int k, const TuplePredicate& pred);
// Same result as sweep_serial, work split across threads.
SweepResult sweep_parallel(int n, int k, const TuplePredicate& pred);
SweepResult sweep(int n, int k, const TuplePredicate& pred, bool parallel = true);

// Tuples (i, d_1, ..., d_k) with 0 <= i < sizes.size() and 0 <= d_j < sizes[i],
// ordered by i first. Used for "anchor plus k points in its neighbourhood".
SweepResult sweep_ragged(const std::vector<int>& sizes, int k, const TuplePredicate& pred, bool parallel = true);

}  // namespace jordanlab
