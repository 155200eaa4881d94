#include "bai/fb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bai/errors.hpp"
#include "bai/reductions.hpp"

namespace bai {

namespace {

std::uint64_t ceil_log2(std::size_t k) {
  std::uint64_t r = 0;
  while ((std::size_t{1} << r) < k) ++r;
  return r;
}

// Top ceil(n/2) arm ids by mean, ties keeping the lower index. `arms` and
// `means` are aligned; the result is in ascending arm order.
std::vector<std::size_t> top_half(const std::vector<std::size_t>& arms,
                                  const std::vector<double>& means) {
  std::vector<std::size_t> order(arms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (means[a] != means[b]) return means[a] > means[b];
    return arms[a] < arms[b];
  });
  std::size_t keep = (arms.size() + 1) / 2;
  std::vector<std::size_t> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(arms[order[i]]);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

FbOutcome sh_run(std::uint64_t budget, std::size_t k, const RewardFn& rewards,
                 RandomStream& rng) {
  if (k < 2) throw UsageError("sh_run: need K >= 2");
  std::uint64_t rounds = ceil_log2(k);
  if (budget < k * rounds) {
    throw UsageError("sh_run: need B >= K * ceil(log2 K)");
  }
  FbOutcome out;
  out.per_arm_pulls.assign(k, 0);
  std::vector<std::size_t> active(k);
  std::iota(active.begin(), active.end(), 0);
  while (active.size() > 1) {
    std::uint64_t per_arm = budget / (active.size() * rounds);
    std::vector<double> means(active.size(), 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) {
      double sum = 0.0;
      for (std::uint64_t t = 0; t < per_arm; ++t) {
        sum += rewards(active[i], rng);
      }
      out.per_arm_pulls[active[i]] += per_arm;
      out.pulls_used += per_arm;
      means[i] = sum / static_cast<double>(per_arm);
    }
    active = top_half(active, means);
  }
  out.chosen = active[0];
  return out;
}

FbOutcome shvar_run(std::uint64_t budget, std::size_t k,
                    const std::vector<double>& variances,
                    const RewardFn& rewards, RandomStream& rng,
                    const ShvarOptions& options) {
  if (k < 2) throw UsageError("shvar_run: need K >= 2");
  if (variances.size() != k) {
    throw UsageError("shvar_run: variances must have length K");
  }
  for (double v : variances) {
    if (!(v > 0.0)) throw UsageError("shvar_run: variances must be > 0");
  }
  std::uint64_t rounds = ceil_log2(k);
  if (budget < k * rounds) {
    throw UsageError("shvar_run: need B >= K * ceil(log2 K)");
  }
  std::uint64_t round_budget = budget / rounds;

  FbOutcome out;
  out.per_arm_pulls.assign(k, 0);
  std::vector<double> sums(k, 0.0);
  std::vector<std::uint64_t> counts(k, 0);
  std::vector<std::size_t> active(k);
  std::iota(active.begin(), active.end(), 0);

  while (active.size() > 1) {
    double var_sum = 0.0;
    for (std::size_t arm : active) var_sum += variances[arm];
    // Proportional shares, floored with a one-pull minimum.
    std::vector<std::uint64_t> alloc(active.size());
    std::uint64_t allocated = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      double share = static_cast<double>(round_budget) *
                     variances[active[i]] / var_sum;
      alloc[i] = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::floor(share)));
      allocated += alloc[i];
    }
    // The one-pull minimum can overshoot the round budget; trim from the
    // largest allocations (ties to the higher index) until it fits. The
    // round budget is >= |active|, so every arm keeps at least one pull.
    while (allocated > round_budget) {
      std::size_t biggest = 0;
      for (std::size_t i = 1; i < active.size(); ++i) {
        if (alloc[i] >= alloc[biggest]) biggest = i;
      }
      --alloc[biggest];
      --allocated;
    }

    std::vector<double> round_sums(active.size(), 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::uint64_t t = 0; t < alloc[i]; ++t) {
        double r = rewards(active[i], rng);
        round_sums[i] += r;
      }
      sums[active[i]] += round_sums[i];
      counts[active[i]] += alloc[i];
      out.per_arm_pulls[active[i]] += alloc[i];
      out.pulls_used += alloc[i];
    }

    std::vector<double> ranking(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      std::size_t arm = active[i];
      ranking[i] = options.per_round_means
                       ? round_sums[i] / static_cast<double>(alloc[i])
                       : sums[arm] / static_cast<double>(counts[arm]);
    }
    active = top_half(active, ranking);
  }
  out.chosen = active[0];
  return out;
}

FbOutcome uniform_fb_run(std::uint64_t budget, std::size_t k,
                         const RewardFn& rewards, RandomStream& rng) {
  if (k < 2) throw UsageError("uniform_fb_run: need K >= 2");
  if (budget < k) throw UsageError("uniform_fb_run: need B >= K");
  std::uint64_t per_arm = budget / k;
  FbOutcome out;
  out.per_arm_pulls.assign(k, per_arm);
  out.pulls_used = per_arm * k;
  std::size_t best = 0;
  double best_mean = 0.0;
  for (std::size_t arm = 0; arm < k; ++arm) {
    double sum = 0.0;
    for (std::uint64_t t = 0; t < per_arm; ++t) sum += rewards(arm, rng);
    double mean = sum / static_cast<double>(per_arm);
    if (arm == 0 || mean > best_mean) {
      best = arm;
      best_mean = mean;
    }
  }
  out.chosen = best;
  return out;
}

FbAlgorithm fc2fb_as_fb(const FcFactory& factory, LogConfidence delta0,
                        std::uint64_t q) {
  FbAlgorithm algo;
  algo.name = "fc2fb";
  algo.run = [factory, delta0, q](std::uint64_t budget, std::size_t k,
                                  const RewardFn& rewards,
                                  RandomStream& rng) -> FbOutcome {
    FbOutcome out;
    out.per_arm_pulls.assign(k, 0);
    // Count pulls by intercepting the reward source.
    RewardFn counted = [&](std::size_t arm, RandomStream& r) {
      ++out.per_arm_pulls[arm];
      ++out.pulls_used;
      return rewards(arm, r);
    };
    out.chosen = fc2fb_run(factory, counted, k, budget, delta0, q, rng);
    return out;
  };
  return algo;
}

}  // namespace bai
