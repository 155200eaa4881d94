#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bai/fc.hpp"
#include "bai/log_confidence.hpp"
#include "bai/random.hpp"

namespace bai {

// Stage plan for the fixed-confidence-to-fixed-budget reduction:
// R = floor(log2(B / Q)) stages of floor(B / R) pulls each, with the stage-r
// confidence exponent L_r = 2^(R - r) halving down to 1.
struct Fc2FbSchedule {
  std::uint64_t stages = 0;        // R
  std::uint64_t stage_budget = 0;  // B'
  std::vector<std::uint64_t> ladder;  // L_1 .. L_R

  std::uint64_t total_budget() const { return stages * stage_budget; }
};

// Requires 1 <= Q <= B / 2.
Fc2FbSchedule fc2fb_schedule(std::uint64_t budget, std::uint64_t q);

// Runs a fresh session per stage at confidence nats = L_r * delta0.nats,
// force-terminating any stage that has not stopped after B' pulls, and
// returns the output of the first stage that stops on its own. If no stage
// does, returns an arm drawn uniformly from [0, k). Each stage drives its
// session and its rewards from an independent child stream of `rng`; the
// fallback draw comes from `rng` itself. Total pulls <= R * B' <= B.
std::size_t fc2fb_run(const FcFactory& factory, const RewardFn& rewards,
                      std::size_t k, std::uint64_t budget,
                      LogConfidence delta0, std::uint64_t q,
                      RandomStream& rng);

// The known-constants warm-up reduction: one session at delta_B solved from
// B = A * ln(1/delta_B) + C, capped at B pulls, uniform fallback.
// Requires B > C and A > 0.
std::size_t naive_fc2fb(const FcFactory& factory, const RewardFn& rewards,
                        std::size_t k, std::uint64_t budget, double a,
                        double c, RandomStream& rng);

// Smallest number of parallel weak-FC copies that boosts a base failure
// rate delta0 < 1/(4e) to the target: ceil(4 * ln(1/delta) / ln(1/(4e*delta0))).
std::uint64_t fcw2s_required_trials(LogConfidence target_conf,
                                    LogConfidence base_conf);

struct Fcw2sResult {
  std::size_t chosen = 0;
  std::uint64_t stopping_time = 0;  // pulls consumed across all copies
};

// Weak-to-strong booster: runs L >= 2 session copies at delta0, always
// advancing the surviving copy with the fewest pulls (ties to the lowest
// copy index), while at least floor(L / 2) copies survive. Stopped copies
// receive no further samples. Returns the majority vote over stopped copies
// (ties to the lowest arm index) and the total pull count.
Fcw2sResult fcw2s_run(const FcFactory& factory, const RewardFn& rewards,
                      std::uint64_t l, LogConfidence delta0,
                      RandomStream& rng);

// Recommendation trajectory of an anytime run: change points
// (global pull index, arm), strictly increasing in t. The recommendation at
// any t >= 1 is the last change at or before t, or `initial` before the
// first change.
struct AnytimeTrace {
  std::size_t initial = 0;
  std::uint64_t horizon = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> changes;

  std::size_t at(std::uint64_t t) const;
};

// Anytime wrapper: phases i = 1, 2, ... of T_i = 2^i * Q global steps, each
// running the staged reduction with budget T_i on an independent child
// stream. The recommendation changes only at phase boundaries, where it
// becomes that phase's output; before the first boundary it is arm 0. A
// phase consumes its full T_i global steps regardless of how early the inner
// run finished (idle steps just advance the clock). Truncated at `horizon`,
// which must be >= 2 * Q.
AnytimeTrace fc2at_run(const FcFactory& factory, const RewardFn& rewards,
                       std::size_t k, LogConfidence delta0, std::uint64_t q,
                       std::uint64_t horizon, RandomStream& rng);

}  // namespace bai
