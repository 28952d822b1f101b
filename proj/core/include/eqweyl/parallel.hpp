#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "eqweyl/numerics.hpp"

namespace eqweyl {
namespace par {

/// Worker cap for the whole process; set once from the CLI --threads flag.
int worker_count();
void set_worker_count(int n);

/// Runs fn(chunk_index) for chunk_index in [0, chunk_count).  The chunk
/// decomposition is part of the caller's contract, never derived from the
/// thread count, so results can be merged in a fixed order afterwards.
void for_each_chunk(int64_t chunk_count, const std::function<void(int64_t)>& fn);

/// Deterministic map-reduce: evaluates term(i) for i in [0,n), accumulates
/// per fixed-size block, then pairwise-sums the block results.
template <typename T>
T map_sum(int64_t n, int64_t block, const std::function<T(int64_t)>& term) {
    if (n <= 0) return T{};
    const int64_t blocks = (n + block - 1) / block;
    std::vector<T> partial(static_cast<size_t>(blocks), T{});
    for_each_chunk(blocks, [&](int64_t b) {
        T acc{};
        const int64_t end = std::min(n, (b + 1) * block);
        for (int64_t i = b * block; i < end; ++i) acc = acc + term(i);
        partial[static_cast<size_t>(b)] = acc;
    });
    return num::pairwise_sum(std::move(partial));
}

}  // namespace par
}  // namespace eqweyl
