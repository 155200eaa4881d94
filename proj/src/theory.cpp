#include "bai/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bai/errors.hpp"

namespace bai {
namespace theory {

std::uint64_t fb_error_to_sample_complexity(double f, double h,
                                            LogConfidence conf,
                                            std::uint64_t b0) {
  if (!(f >= 1.0)) {
    throw UsageError("fb_error_to_sample_complexity: need F >= 1");
  }
  if (!(h > 0.0)) {
    throw UsageError("fb_error_to_sample_complexity: need H > 0");
  }
  double b = std::ceil(h * (std::log(f) + conf.nats));
  return std::max<std::uint64_t>(b < 0.0 ? 0 : static_cast<std::uint64_t>(b),
                                 b0);
}

double fc2fb_error_bound(std::uint64_t budget, double a, LogConfidence delta0,
                         std::uint64_t q) {
  // Tiny slack so delta0 = 0.5 given as a delta passes the check.
  if (!(delta0.nats >= std::log(2.0) - 1e-12)) {
    throw UsageError("fc2fb_error_bound: need delta0 <= 0.5");
  }
  if (!(a >= 0.0)) throw UsageError("fc2fb_error_bound: need A >= 0");
  if (q < 1 || 2 * q > budget) {
    throw UsageError("fc2fb_error_bound: need 1 <= Q <= B / 2");
  }
  double b = static_cast<double>(budget);
  double denom = 4.0 * static_cast<double>(q) / delta0.nats +
                 4.0 * std::log2(b / static_cast<double>(q)) * a;
  return std::min(1.0, 3.0 * std::exp(-b / denom));
}

double fc2fb_budget_threshold(const StrongFcConstants& consts,
                              LogConfidence delta0, std::uint64_t q) {
  if (!(consts.a >= 0.0) || !(consts.c >= 0.0)) {
    throw UsageError("fc2fb_budget_threshold: need A, C >= 0");
  }
  if (q < 1) throw UsageError("fc2fb_budget_threshold: need Q >= 1");
  double qd = static_cast<double>(q);
  double lead = consts.a * delta0.nats + consts.c + 1.0;
  return 2.0 * lead * std::log(2.0 * lead / qd);
}

bool fc2fb_budget_sufficient(std::uint64_t budget,
                             const StrongFcConstants& consts,
                             LogConfidence delta0, std::uint64_t q) {
  return static_cast<double>(budget) >=
         fc2fb_budget_threshold(consts, delta0, q);
}

double pekhn_sample_bound_real(const BanditInstance& instance,
                               LogConfidence conf) {
  std::size_t best = best_arm(instance);
  std::size_t k = instance.size();
  double ln2 = std::log(2.0);
  // ln(4K (ln 2)^2 / delta * ln^2(4/gap)) without forming the huge ratio.
  double base = std::log(4.0 * static_cast<double>(k) * ln2 * ln2) + conf.nats;
  auto term = [&](double variance, double g) {
    if (!(g <= 1.0)) {
      throw UsageError("pekhn_sample_bound: every suboptimal gap must be <= 1");
    }
    double log_part = base + 2.0 * std::log(std::log(4.0 / g));
    return 64.0 * variance / (g * g) * log_part;
  };
  double runner_up_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    if (j == best) continue;
    runner_up_gap = std::min(runner_up_gap,
                             instance.arm(best).mean - instance.arm(j).mean);
  }
  double total = term(instance.arm(best).variance, runner_up_gap);
  for (std::size_t j = 0; j < k; ++j) {
    if (j == best) continue;
    total += term(instance.arm(j).variance,
                  instance.arm(best).mean - instance.arm(j).mean);
  }
  return total;
}

std::uint64_t pekhn_sample_bound(const BanditInstance& instance,
                                 LogConfidence conf) {
  return static_cast<std::uint64_t>(
      std::ceil(pekhn_sample_bound_real(instance, conf)));
}

std::uint64_t fcw2s_stop_bound(std::uint64_t l, std::uint64_t f_delta0) {
  return l * f_delta0;
}

double fc2at_warmup_budget(const StrongFcConstants& consts,
                           LogConfidence delta0, std::uint64_t q) {
  return std::max(fc2fb_budget_threshold(consts, delta0, q),
                  2.0 * static_cast<double>(q));
}

double fc2at_error_bound(std::uint64_t t, const StrongFcConstants& consts,
                         LogConfidence delta0, std::uint64_t q) {
  if (q < 1) throw UsageError("fc2at_error_bound: need Q >= 1");
  double bstar = fc2at_warmup_budget(consts, delta0, q);
  double td = static_cast<double>(t);
  double floor_t =
      std::max(4.0 * bstar - 2.0 * static_cast<double>(q),
               2.0 * static_cast<double>(q));
  if (td < floor_t) {
    throw UsageError("fc2at_error_bound: T below the warm-up threshold");
  }
  double denom = 16.0 * static_cast<double>(q) / delta0.nats +
                 16.0 * std::log2(td / static_cast<double>(q)) * consts.a;
  return std::min(1.0, 3.0 * std::exp(-td / denom));
}

}  // namespace theory
}  // namespace bai
