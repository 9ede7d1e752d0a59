#include "alphapred/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace alphapred {

namespace {

struct ChunkSums {
    double sum = 0.0;
    double sumsq = 0.0;
};

}  // namespace

Estimate mc_mean(const std::function<double(SplitMix64&)>& sampler,
                 std::int64_t n, std::uint64_t seed, int threads) {
    if (n < 2) throw std::invalid_argument("mc_mean: n must be >= 2");
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    const std::int64_t n_chunks = (n + kMcChunk - 1) / kMcChunk;
    std::vector<ChunkSums> partial(static_cast<std::size_t>(n_chunks));

    auto run_chunk = [&](std::int64_t c) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(c));
        const std::int64_t lo = c * kMcChunk;
        const std::int64_t hi = std::min(n, lo + kMcChunk);
        ChunkSums s;
        for (std::int64_t i = lo; i < hi; ++i) {
            const double v = sampler(rng);
            s.sum += v;
            s.sumsq += v * v;
        }
        partial[static_cast<std::size_t>(c)] = s;
    };

    if (threads == 1 || n_chunks == 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::int64_t c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    run_chunk(c);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // fixed-order reduction: identical bytes for any thread count
    double sum = 0.0, sumsq = 0.0;
    for (const auto& s : partial) {
        sum += s.sum;
        sumsq += s.sumsq;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    double var = (sumsq - nn * mean * mean) / (nn - 1.0);
    if (var < 0.0) var = 0.0;  // roundoff on constant streams
    return Estimate{mean, std::sqrt(var / nn), n, seed};
}

}  // namespace alphapred
