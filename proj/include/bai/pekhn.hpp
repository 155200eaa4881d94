#pragma once

#include <cstdint>
#include <vector>

#include "bai/fc.hpp"
#include "bai/log_confidence.hpp"

namespace bai {

// Cumulative per-arm sample target for one elimination stage:
// ceil((2 * variance / eps^2) * ln(K / delta_stage)), evaluated in the log
// domain as ln K + stage_conf.nats so extreme confidences cannot underflow.
std::uint64_t pekhn_target_count(double variance, double eps, std::size_t k,
                                 LogConfidence stage_conf);

// Stage confidence delta_l = delta / (l * (l + 1)); in nats that is
// base + ln(l) + ln(l + 1). The stage deltas telescope back to delta.
LogConfidence pekhn_stage_conf(LogConfidence base_conf, std::uint64_t stage);

// Elimination rule: keep exactly the arms with mean > max - 2 * eps.
// `arms` and `means` are aligned; returns the surviving arm ids in order.
// The empirical maximizer always survives.
std::vector<std::size_t> pekhn_eliminate(const std::vector<std::size_t>& arms,
                                         const std::vector<double>& means,
                                         double eps);

// Phased elimination for known heterogeneous noise. Per stage l the session
// tops every active arm up to its cumulative target at eps_l = 2^-l and
// delta_l, serving deficits round-robin, then recomputes cumulative means
// and eliminates. Stops when one arm remains. Samples accumulate across
// stages; counts never decrease. Arms with variance 0 have target 0 but
// still receive one sample over the session's lifetime so their mean is
// defined.
class PekhnSession final : public FcSession {
 public:
  PekhnSession(std::size_t k, std::vector<double> variances,
               LogConfidence conf);

  std::size_t next_arm() override;
  void observe(double reward) override;
  FcStatus status() const override { return status_; }
  std::uint64_t pulls() const override { return protocol_.pulls(); }

  std::uint64_t stage() const { return stage_; }
  std::uint64_t count(std::size_t arm) const { return counts_.at(arm); }

 private:
  void begin_stage();
  void advance_until_work();

  std::vector<double> variances_;
  LogConfidence conf_;
  std::vector<std::size_t> active_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> deficits_;  // indexed like active_
  std::vector<double> sums_;
  std::uint64_t stage_ = 0;
  std::size_t cursor_ = 0;       // round-robin position within active_
  std::size_t pending_arm_ = 0;  // arm handed out by the last next_arm()
  FcStatus status_;
  SessionProtocol protocol_;
};

// Factory closing over the known per-arm variances.
FcFactory pekhn_factory(std::size_t k, std::vector<double> variances);

}  // namespace bai
