#include "bai/instance.hpp"

#include <cmath>
#include <limits>

#include "bai/errors.hpp"
#include "json.hpp"

namespace bai {

BanditInstance::BanditInstance(std::vector<GaussianArm> arms)
    : arms_(std::move(arms)) {
  if (arms_.size() < 2) {
    throw UsageError("BanditInstance: need at least 2 arms");
  }
  for (const auto& a : arms_) {
    if (!std::isfinite(a.mean)) {
      throw InvalidInstanceError("BanditInstance: arm mean must be finite");
    }
    if (!std::isfinite(a.variance) || a.variance < 0.0) {
      throw InvalidInstanceError(
          "BanditInstance: arm variance must be finite and >= 0");
    }
  }
}

const GaussianArm& BanditInstance::arm(std::size_t i) const {
  if (i >= arms_.size()) {
    throw UsageError("BanditInstance: arm index out of range");
  }
  return arms_[i];
}

std::vector<double> BanditInstance::means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.mean);
  return out;
}

std::vector<double> BanditInstance::variances() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.variance);
  return out;
}

std::size_t best_arm(const BanditInstance& instance) {
  std::size_t best = 0;
  bool tied = false;
  for (std::size_t i = 1; i < instance.size(); ++i) {
    double m = instance.arm(i).mean;
    double b = instance.arm(best).mean;
    if (m > b) {
      best = i;
      tied = false;
    } else if (m == b) {
      tied = true;
    }
  }
  if (tied) {
    throw InvalidInstanceError("best_arm: maximum mean is not unique");
  }
  return best;
}

double gap(const BanditInstance& instance, std::size_t i) {
  return instance.arm(best_arm(instance)).mean - instance.arm(i).mean;
}

double sample_reward(const BanditInstance& instance, std::size_t arm,
                     RandomStream& rng) {
  const GaussianArm& a = instance.arm(arm);
  return a.mean + std::sqrt(a.variance) * rng.normal();
}

BanditInstance make_figure_instance(std::size_t k, double gap2,
                                    double gap_rest, double var_lo,
                                    double var_hi, RandomStream& rng) {
  if (k < 2) throw UsageError("make_figure_instance: need K >= 2");
  if (!(gap2 > 0.0) || !(gap_rest > 0.0)) {
    throw UsageError("make_figure_instance: gaps must be positive");
  }
  if (!(var_lo <= var_hi) || var_lo < 0.0) {
    throw UsageError("make_figure_instance: need 0 <= var_lo <= var_hi");
  }
  std::vector<GaussianArm> arms(k);
  arms[0].mean = 1.0;
  arms[1].mean = 1.0 - gap2;
  for (std::size_t i = 2; i < k; ++i) arms[i].mean = 1.0 - gap_rest;
  for (std::size_t i = 0; i < k; ++i) {
    arms[i].variance = rng.uniform(var_lo, var_hi);
  }
  return BanditInstance(std::move(arms));
}

BanditInstance make_adversarial_shvar_instance(std::size_t k,
                                               std::uint64_t budget) {
  if (k < 2) throw UsageError("make_adversarial_shvar_instance: need K >= 2");
  double denom = static_cast<double>(budget) / std::log2(static_cast<double>(k)) -
                 static_cast<double>(k - 1);
  if (!(denom > 0.0)) {
    throw InfeasibleError(
        "make_adversarial_shvar_instance: need B/log2(K) - (K-1) > 0");
  }
  double sigma = std::sqrt(1.0 / denom);
  // Store the square of the realized gap so that gap == sqrt(variance)
  // bit-exactly however 1 - sigma rounded.
  double near_mean = 1.0 - sigma;
  double realized = 1.0 - near_mean;
  double small_var = realized * realized;
  std::vector<GaussianArm> arms(k);
  arms[0] = {1.0, small_var};
  for (std::size_t i = 1; i + 1 < k; ++i) arms[i] = {near_mean, small_var};
  arms[k - 1] = {0.0, 1.0};
  return BanditInstance(std::move(arms));
}

std::string instance_to_json(const BanditInstance& instance) {
  nlohmann::json j;
  j["arms"] = nlohmann::json::array();
  for (const auto& a : instance.arms()) {
    j["arms"].push_back({{"mean", a.mean}, {"variance", a.variance}});
  }
  return j.dump(2);
}

BanditInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("arms") || !j["arms"].is_array()) {
    throw UsageError("instance_from_json: missing \"arms\" array");
  }
  std::vector<GaussianArm> arms;
  for (const auto& a : j["arms"]) {
    arms.push_back({a.at("mean").get<double>(), a.at("variance").get<double>()});
  }
  return BanditInstance(std::move(arms));
}

}  // namespace bai
