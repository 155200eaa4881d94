#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bai/fb.hpp"
#include "bai/instance.hpp"

namespace bai {

// How the sweep builds its bandit instance.
struct InstanceSpec {
  std::string generator;  // "figure" | "adversarial" | "explicit"
  std::size_t k = 0;
  std::uint64_t seed = 0;
  // figure parameters
  double gap2 = 0.1;
  double gap_rest = 0.8;
  double var_lo = 1.0;
  double var_hi = 2.0;
  // adversarial parameter
  std::uint64_t budget = 0;
  // explicit arms
  std::vector<GaussianArm> arms;
};

// One algorithm entry of a sweep. Parameters beyond the name apply where
// the algorithm uses them.
struct AlgorithmSpec {
  std::string name;  // "sh" | "shvar" | "uniform" | "fc2fb-pekhn"
  double delta0_nats = 1.0;
  std::uint64_t q = 1;
  bool shvar_per_round_means = false;

  // Stable label used in output rows and seed mixing, e.g. "fc2fb-pekhn".
  const std::string& label() const { return name; }
};

struct ExperimentConfig {
  std::string experiment_id;  // defaults to "exp-" + hex(master_seed)
  InstanceSpec instance;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> budgets;  // budget sweep axis
  std::vector<std::size_t> arm_counts;  // arm sweep axis
  std::uint64_t fixed_budget = 0;       // used by arm sweeps
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  bool resample_per_trial = false;  // regenerate the instance every trial
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

// Misidentification summary of one (algorithm, axis value) cell with a
// Wilson 95% interval.
struct CellSummary {
  std::string algorithm;
  std::string axis_name;  // "budget" | "arms"
  std::uint64_t axis_value = 0;
  std::size_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t misid_count = 0;
  double misid_prob = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SkippedCell {
  std::string algorithm;
  std::string axis_name;
  std::uint64_t axis_value = 0;
  std::string reason;
};

struct SweepResult {
  std::vector<CellSummary> rows;
  std::vector<SkippedCell> skipped;
};

struct RunOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Wilson score interval for `successes` out of `n` at critical value z.
std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t n,
                                    double z);

// Runs `fn(i)` for i in [0, n) on a worker pool. Work items must be
// independent; exceptions are rethrown on the caller thread.
void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& fn);

// A runnable algorithm bound to nothing: feasibility is checked per
// (instance, budget) before any trial runs.
struct RegisteredAlgorithm {
  std::string label;
  std::function<std::optional<std::string>(const BanditInstance&,
                                           std::uint64_t budget)>
      feasibility;
  std::function<FbOutcome(const BanditInstance&, std::uint64_t budget,
                          RandomStream&)>
      run;
};

RegisteredAlgorithm make_registered_algorithm(const AlgorithmSpec& spec);

// One Monte Carlo cell. Trial t runs on a stream seeded with
// mix(mix(mix(master_seed, fnv1a64(label)), axis_value), t), so results are
// independent of thread count and of any other cell. Throws InfeasibleError
// when the algorithm cannot run at this budget.
CellSummary run_cell(const BanditInstance& instance,
                     const RegisteredAlgorithm& algorithm,
                     std::uint64_t budget, std::uint64_t trials,
                     std::uint64_t master_seed, const std::string& axis_name,
                     std::uint64_t axis_value, const RunOptions& options = {});

// Cross product of the config's algorithms and budget axis on one shared
// instance built from the instance seed.
SweepResult budget_sweep(const ExperimentConfig& config,
                         const RunOptions& options = {});

// Fixed budget, varying K; the instance is regenerated per K from
// mix(instance seed, K).
SweepResult arm_sweep(const ExperimentConfig& config,
                      const RunOptions& options = {});

// CSV with the exact column set used by every sweep; reals are printed with
// 17 significant digits and parse back bit-exactly. No timestamps.
std::string export_csv(const std::string& experiment_id,
                       const std::vector<CellSummary>& rows);
std::vector<CellSummary> parse_csv(const std::string& text);

// Sidecar metadata: config echo, library version, wall time, skipped cells.
std::string export_metadata(const ExperimentConfig& config,
                            const SweepResult& result, double wall_seconds);

BanditInstance build_instance(const InstanceSpec& spec);

}  // namespace bai
