#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace conehedge {

/// Runs fn(block_index, begin, end) over [0, n) split into fixed-size blocks.
/// Workers pull block indices from a shared counter; callers that need a
/// reproducible reduction store per-block partials and combine them in block
/// order afterwards. With that convention results are bit-stable for a given
/// (seed, block_size) regardless of thread count.
template <class BlockFn>
void for_each_block(std::uint64_t n, std::uint64_t block_size, int n_threads, BlockFn fn) {
    if (n == 0) return;
    if (block_size == 0) block_size = 1;
    const std::uint64_t n_blocks = (n + block_size - 1) / block_size;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    std::uint64_t workers = n_threads > 0 ? static_cast<std::uint64_t>(n_threads) : hw;
    if (workers > n_blocks) workers = n_blocks;

    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b)
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

inline constexpr std::uint64_t kDefaultBlockSize = 8192;

/// Sample mean and standard error of sample(i) over i in [0, n), reduced with
/// the fixed block tree described above.
template <class SampleFn>
MeanEstimate parallel_mean(std::uint64_t n, std::uint64_t block_size, int n_threads,
                           SampleFn sample) {
    const std::uint64_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<double> sums(n_blocks, 0.0);
    std::vector<double> sq_sums(n_blocks, 0.0);
    for_each_block(n, block_size, n_threads,
                   [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
                       double s = 0.0, ss = 0.0;
                       for (std::uint64_t i = begin; i < end; ++i) {
                           const double v = sample(i);
                           s += v;
                           ss += v * v;
                       }
                       sums[b] = s;
                       sq_sums[b] = ss;
                   });
    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        total += sums[b];
        total_sq += sq_sums[b];
    }
    MeanEstimate out;
    out.n = n;
    if (n == 0) return out;
    out.mean = total / static_cast<double>(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (total_sq - total * out.mean) / static_cast<double>(n - 1));
        out.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

}  // namespace conehedge
