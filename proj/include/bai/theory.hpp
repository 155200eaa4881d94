#pragma once

#include <cstdint>

#include "bai/instance.hpp"
#include "bai/log_confidence.hpp"

namespace bai {
namespace theory {

// Constants of a strong fixed-confidence algorithm whose high-probability
// stopping time is A * ln(1/delta) + C.
struct StrongFcConstants {
  double a = 0.0;  // samples per nat, > 0
  double c = 0.0;  // warm-up samples, >= 0
};

// Budget at which a fixed-budget guarantee F * exp(-B / H) crosses the
// target failure rate: max(ceil(H * (ln F + nats)), B0).
std::uint64_t fb_error_to_sample_complexity(double f, double h,
                                            LogConfidence conf,
                                            std::uint64_t b0);

// Error bound of the staged reduction:
// min(1, 3 * exp(-B / (4Q / ln(1/delta0) + 4 * log2(B/Q) * A))).
// Requires delta0 <= 0.5 and Q <= B / 2.
double fc2fb_error_bound(std::uint64_t budget, double a, LogConfidence delta0,
                         std::uint64_t q);

// Budget threshold above which the staged reduction's guarantee holds:
// 2 * (A * ln(1/delta0) + C + 1) * ln(2A/Q * ln(1/delta0) + 2(C+1)/Q).
double fc2fb_budget_threshold(const StrongFcConstants& consts,
                              LogConfidence delta0, std::uint64_t q);

bool fc2fb_budget_sufficient(std::uint64_t budget,
                             const StrongFcConstants& consts,
                             LogConfidence delta0, std::uint64_t q);

// High-probability stopping time of phased elimination with known noise:
//   sum over the best arm (at the runner-up gap) and every suboptimal arm j
//   of (64 * var_j / gap_j^2) * ln((4K (ln 2)^2 / delta) * ln^2(4 / gap_j)),
// evaluated in the log domain. Requires every suboptimal gap <= 1.
double pekhn_sample_bound_real(const BanditInstance& instance,
                               LogConfidence conf);
std::uint64_t pekhn_sample_bound(const BanditInstance& instance,
                                 LogConfidence conf);

// Stopping bound of the weak-to-strong booster: L * f(delta0).
std::uint64_t fcw2s_stop_bound(std::uint64_t l, std::uint64_t f_delta0);

// Error bound of the anytime wrapper at time T >= max(4B* - 2Q, 2Q):
// min(1, 3 * exp(-T / (16Q / ln(1/delta0) + 16 * log2(T/Q) * A))).
double fc2at_error_bound(std::uint64_t t, const StrongFcConstants& consts,
                         LogConfidence delta0, std::uint64_t q);

// The anytime wrapper's warm-up threshold B* =
// max(fc2fb_budget_threshold, 2Q).
double fc2at_warmup_budget(const StrongFcConstants& consts,
                           LogConfidence delta0, std::uint64_t q);

}  // namespace theory
}  // namespace bai
