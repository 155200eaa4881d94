#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bai/fc.hpp"
#include "bai/random.hpp"

namespace bai {

// Result of one fixed-budget run: the recommended arm and the pull ledger.
// sum(per_arm_pulls) == pulls_used <= B always.
struct FbOutcome {
  std::size_t chosen = 0;
  std::uint64_t pulls_used = 0;
  std::vector<std::uint64_t> per_arm_pulls;
};

// Sequential halving: ceil(log2 K) rounds; each surviving arm is pulled
// floor(B / (|S| * rounds)) times per round and ranked by its within-round
// mean (no reuse across rounds); the top ceil(|S| / 2) survive, ties to the
// lower index. Requires B >= K * ceil(log2 K).
FbOutcome sh_run(std::uint64_t budget, std::size_t k, const RewardFn& rewards,
                 RandomStream& rng);

struct ShvarOptions {
  // Rank arms by this round's means instead of the run-cumulative means.
  bool per_round_means = false;
};

// Variance-proportional halving: ceil(log2 K) rounds with per-round budget
// floor(B / rounds) split across the active arms proportionally to their
// known variances, floored with a one-pull minimum (overshoot trimmed from
// the largest allocations; leftover budget is left unspent). Eliminates the
// bottom floor(|S| / 2) by cumulative mean, ties dropping the higher index
// first. Requires B >= K * ceil(log2 K) and positive variances.
FbOutcome shvar_run(std::uint64_t budget, std::size_t k,
                    const std::vector<double>& variances,
                    const RewardFn& rewards, RandomStream& rng,
                    const ShvarOptions& options = {});

// floor(B / K) pulls per arm, argmax of means, ties to the lower index.
FbOutcome uniform_fb_run(std::uint64_t budget, std::size_t k,
                         const RewardFn& rewards, RandomStream& rng);

// A fixed-budget algorithm as a value, for registries and sweeps.
struct FbAlgorithm {
  std::string name;
  std::function<FbOutcome(std::uint64_t budget, std::size_t k,
                          const RewardFn&, RandomStream&)>
      run;
};

// Adapts the staged fixed-confidence reduction to the fixed-budget
// interface, filling in the pull ledger.
FbAlgorithm fc2fb_as_fb(const FcFactory& factory, LogConfidence delta0,
                        std::uint64_t q);

}  // namespace bai
