#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bai/random.hpp"

namespace bai {

// One Gaussian reward source: N(mean, variance).
struct GaussianArm {
  double mean = 0.0;
  double variance = 0.0;  // >= 0
};

// An ordered set of K >= 2 Gaussian arms. Construction checks per-arm
// sanity (finite mean, nonnegative finite variance); uniqueness of the best
// arm is checked by best_arm(), so degenerate tied instances can be built
// and are rejected exactly where the answer would be ill-defined.
// Immutable after construction and safe to share across threads.
class BanditInstance {
 public:
  explicit BanditInstance(std::vector<GaussianArm> arms);

  std::size_t size() const { return arms_.size(); }
  const GaussianArm& arm(std::size_t i) const;
  const std::vector<GaussianArm>& arms() const { return arms_; }

  std::vector<double> means() const;
  std::vector<double> variances() const;

 private:
  std::vector<GaussianArm> arms_;
};

// Index of the unique maximal mean. Throws InvalidInstanceError on a tie.
std::size_t best_arm(const BanditInstance& instance);

// Gap of arm i relative to the best mean (0 at the best arm).
double gap(const BanditInstance& instance, std::size_t i);

// One reward draw: mean + sqrt(variance) * z with z the next standard normal
// from rng. Advances rng by exactly one normal draw.
double sample_reward(const BanditInstance& instance, std::size_t arm,
                     RandomStream& rng);

// The two-gap Gaussian family used by the experiment sweeps: best arm mean
// anchored at 1.0, arm 2 at 1 - gap2, arms 3..K at 1 - gap_rest, variances
// drawn uniformly from [var_lo, var_hi] in arm order.
BanditInstance make_figure_instance(std::size_t k, double gap2,
                                    double gap_rest, double var_lo,
                                    double var_hi, RandomStream& rng);

// The instance family that defeats variance-proportional halving: arms
// 1..K-1 share a small variance 1/(B/log2(K) - (K-1)), arm K has variance 1,
// and every suboptimal gap equals that arm's standard deviation (gap^2 =
// variance, bit-consistent with the stored means). Best arm mean is 1.0.
// Throws InfeasibleError when B/log2(K) - (K-1) <= 0.
BanditInstance make_adversarial_shvar_instance(std::size_t k,
                                               std::uint64_t budget);

// JSON document {"arms": [{"mean": m, "variance": v}, ...]}. Finite doubles
// round-trip bit-exactly.
std::string instance_to_json(const BanditInstance& instance);
BanditInstance instance_from_json(const std::string& text);

}  // namespace bai
