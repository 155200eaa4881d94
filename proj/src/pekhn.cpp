#include "bai/pekhn.hpp"

#include <algorithm>
#include <cmath>

#include "bai/errors.hpp"

namespace bai {

namespace {
constexpr std::uint64_t kPullCap = std::uint64_t{1} << 62;
}

std::uint64_t pekhn_target_count(double variance, double eps, std::size_t k,
                                 LogConfidence stage_conf) {
  if (!(eps > 0.0)) throw UsageError("pekhn_target_count: eps must be > 0");
  if (variance < 0.0) {
    throw UsageError("pekhn_target_count: variance must be >= 0");
  }
  if (variance == 0.0) return 0;
  double log_term = std::log(static_cast<double>(k)) + stage_conf.nats;
  return static_cast<std::uint64_t>(
      std::ceil(2.0 * variance / (eps * eps) * log_term));
}

LogConfidence pekhn_stage_conf(LogConfidence base_conf, std::uint64_t stage) {
  if (stage < 1) throw UsageError("pekhn_stage_conf: stage must be >= 1");
  double l = static_cast<double>(stage);
  return LogConfidence::from_nats(base_conf.nats + std::log(l) +
                                  std::log(l + 1.0));
}

std::vector<std::size_t> pekhn_eliminate(const std::vector<std::size_t>& arms,
                                         const std::vector<double>& means,
                                         double eps) {
  if (arms.empty() || arms.size() != means.size()) {
    throw UsageError("pekhn_eliminate: arms and means must align, nonempty");
  }
  double best = *std::max_element(means.begin(), means.end());
  std::vector<std::size_t> kept;
  kept.reserve(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (means[i] > best - 2.0 * eps) kept.push_back(arms[i]);
  }
  return kept;
}

PekhnSession::PekhnSession(std::size_t k, std::vector<double> variances,
                           LogConfidence conf)
    : variances_(std::move(variances)),
      conf_(conf),
      counts_(k, 0),
      sums_(k, 0.0) {
  if (k < 2) throw UsageError("PekhnSession: need K >= 2");
  if (variances_.size() != k) {
    throw UsageError("PekhnSession: variances must have length K");
  }
  for (double v : variances_) {
    if (!(v >= 0.0)) throw UsageError("PekhnSession: variances must be >= 0");
  }
  active_.resize(k);
  for (std::size_t i = 0; i < k; ++i) active_[i] = i;
  begin_stage();
}

void PekhnSession::begin_stage() {
  ++stage_;
  double eps = std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(
                                   stage_, 1000)));
  LogConfidence stage_conf = pekhn_stage_conf(conf_, stage_);
  deficits_.assign(active_.size(), 0);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    std::size_t arm = active_[i];
    std::uint64_t target =
        pekhn_target_count(variances_[arm], eps, counts_.size(), stage_conf);
    // Zero-variance arms still need one lifetime sample to define a mean.
    target = std::max<std::uint64_t>(target, 1);
    if (target > counts_[arm]) deficits_[i] = target - counts_[arm];
  }
  cursor_ = 0;
}

void PekhnSession::advance_until_work() {
  // Runs elimination for every stage whose targets are already met (possible
  // when zero-variance arms dominate) until a pull is needed or one arm is
  // left.
  for (;;) {
    bool has_deficit = false;
    for (std::uint64_t d : deficits_) {
      if (d > 0) {
        has_deficit = true;
        break;
      }
    }
    if (has_deficit) return;

    std::vector<double> means(active_.size());
    for (std::size_t i = 0; i < active_.size(); ++i) {
      std::size_t arm = active_[i];
      means[i] = sums_[arm] / static_cast<double>(counts_[arm]);
    }
    double eps = std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(
                                     stage_, 1000)));
    active_ = pekhn_eliminate(active_, means, eps);
    if (active_.size() == 1) {
      status_ = FcStatus::stopped_status(active_[0]);
      return;
    }
    begin_stage();
  }
}

std::size_t PekhnSession::next_arm() {
  protocol_.on_next_arm(status_.running());
  if (protocol_.pulls() >= kPullCap) {
    throw std::logic_error("PekhnSession: pull cap exceeded (no progress?)");
  }
  // Round-robin over active arms with outstanding deficits.
  for (std::size_t step = 0; step < active_.size(); ++step) {
    std::size_t i = (cursor_ + step) % active_.size();
    if (deficits_[i] > 0) {
      cursor_ = (i + 1) % active_.size();
      pending_arm_ = i;
      return active_[i];
    }
  }
  throw std::logic_error("PekhnSession: no deficit despite running state");
}

void PekhnSession::observe(double reward) {
  protocol_.on_observe();
  std::size_t arm = active_[pending_arm_];
  sums_[arm] += reward;
  ++counts_[arm];
  --deficits_[pending_arm_];
  advance_until_work();
}

FcFactory pekhn_factory(std::size_t k, std::vector<double> variances) {
  return [k, variances = std::move(variances)](
             LogConfidence conf, RandomStream&) -> std::unique_ptr<FcSession> {
    return std::make_unique<PekhnSession>(k, variances, conf);
  };
}

}  // namespace bai
