#pragma once

#include <functional>

#include "alphapred/common.hpp"
#include "alphapred/rng.hpp"

namespace alphapred {

inline constexpr std::int64_t kMcChunk = 4096;

// Sample mean with standard error s/sqrt(n).
//
// Determinism contract: sample i belongs to chunk i / kMcChunk, each chunk
// draws from substream(seed, chunk), and partial sums are reduced in ascending
// chunk order. The returned Estimate is therefore a pure function of
// (sampler, n, seed), bit-identical for any worker count.
//
// threads <= 0 selects the hardware concurrency.
Estimate mc_mean(const std::function<double(SplitMix64&)>& sampler,
                 std::int64_t n, std::uint64_t seed, int threads = 1);

}  // namespace alphapred
