#include "bai/harness.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bai/errors.hpp"
#include "bai/pekhn.hpp"
#include "bai/reductions.hpp"
#include "bai/version.hpp"
#include "json.hpp"

namespace bai {

namespace {

std::uint64_t ceil_log2(std::size_t k) {
  std::uint64_t r = 0;
  while ((std::size_t{1} << r) < k) ++r;
  return r;
}

unsigned effective_threads(const RunOptions& options) {
  if (options.threads > 0) return options.threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace

std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t n,
                                    double z) {
  if (n < 1) throw UsageError("wilson_ci: need n >= 1");
  if (successes > n) throw UsageError("wilson_ci: successes > n");
  double p = static_cast<double>(successes) / static_cast<double>(n);
  double nn = static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = (p + z2 / (2.0 * nn)) / denom;
  double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

BanditInstance build_instance(const InstanceSpec& spec) {
  if (spec.generator == "figure") {
    RandomStream rng(spec.seed);
    return make_figure_instance(spec.k, spec.gap2, spec.gap_rest, spec.var_lo,
                                spec.var_hi, rng);
  }
  if (spec.generator == "adversarial") {
    return make_adversarial_shvar_instance(spec.k, spec.budget);
  }
  if (spec.generator == "explicit") {
    return BanditInstance(spec.arms);
  }
  throw UsageError("build_instance: unknown generator \"" + spec.generator +
                   "\"");
}

RegisteredAlgorithm make_registered_algorithm(const AlgorithmSpec& spec) {
  RegisteredAlgorithm reg;
  reg.label = spec.label();
  if (spec.name == "sh") {
    reg.feasibility = [](const BanditInstance& inst, std::uint64_t budget)
        -> std::optional<std::string> {
      if (budget < inst.size() * ceil_log2(inst.size())) {
        return "budget below K * ceil(log2 K)";
      }
      return std::nullopt;
    };
    reg.run = [](const BanditInstance& inst, std::uint64_t budget,
                 RandomStream& rng) {
      RewardFn rewards = [&inst](std::size_t arm, RandomStream& r) {
        return sample_reward(inst, arm, r);
      };
      return sh_run(budget, inst.size(), rewards, rng);
    };
  } else if (spec.name == "shvar") {
    bool per_round = spec.shvar_per_round_means;
    reg.feasibility = [](const BanditInstance& inst, std::uint64_t budget)
        -> std::optional<std::string> {
      if (budget < inst.size() * ceil_log2(inst.size())) {
        return "budget below K * ceil(log2 K)";
      }
      for (const auto& a : inst.arms()) {
        if (!(a.variance > 0.0)) return "nonpositive variance";
      }
      return std::nullopt;
    };
    reg.run = [per_round](const BanditInstance& inst, std::uint64_t budget,
                          RandomStream& rng) {
      RewardFn rewards = [&inst](std::size_t arm, RandomStream& r) {
        return sample_reward(inst, arm, r);
      };
      ShvarOptions opt;
      opt.per_round_means = per_round;
      return shvar_run(budget, inst.size(), inst.variances(), rewards, rng,
                       opt);
    };
  } else if (spec.name == "uniform") {
    reg.feasibility = [](const BanditInstance& inst, std::uint64_t budget)
        -> std::optional<std::string> {
      if (budget < inst.size()) return "budget below K";
      return std::nullopt;
    };
    reg.run = [](const BanditInstance& inst, std::uint64_t budget,
                 RandomStream& rng) {
      RewardFn rewards = [&inst](std::size_t arm, RandomStream& r) {
        return sample_reward(inst, arm, r);
      };
      return uniform_fb_run(budget, inst.size(), rewards, rng);
    };
  } else if (spec.name == "fc2fb-pekhn") {
    double delta0_nats = spec.delta0_nats;
    std::uint64_t q = spec.q;
    if (!(delta0_nats > 0.0)) {
      throw UsageError("fc2fb-pekhn: delta0 must be < 1 (nats > 0)");
    }
    reg.feasibility = [q](const BanditInstance&, std::uint64_t budget)
        -> std::optional<std::string> {
      if (2 * q > budget) return "budget below 2 * Q";
      return std::nullopt;
    };
    reg.run = [delta0_nats, q](const BanditInstance& inst,
                               std::uint64_t budget, RandomStream& rng) {
      RewardFn rewards = [&inst](std::size_t arm, RandomStream& r) {
        return sample_reward(inst, arm, r);
      };
      FbAlgorithm algo = fc2fb_as_fb(
          pekhn_factory(inst.size(), inst.variances()),
          LogConfidence::from_nats(delta0_nats), q);
      return algo.run(budget, inst.size(), rewards, rng);
    };
  } else {
    throw UsageError("unknown algorithm \"" + spec.name + "\"");
  }
  return reg;
}

CellSummary run_cell(const BanditInstance& instance,
                     const RegisteredAlgorithm& algorithm,
                     std::uint64_t budget, std::uint64_t trials,
                     std::uint64_t master_seed, const std::string& axis_name,
                     std::uint64_t axis_value, const RunOptions& options) {
  if (trials < 1) throw UsageError("run_cell: need trials >= 1");
  if (auto reason = algorithm.feasibility(instance, budget)) {
    throw InfeasibleError(*reason);
  }
  std::size_t truth = best_arm(instance);
  std::uint64_t cell_seed =
      mix_seed(mix_seed(master_seed, fnv1a64(algorithm.label)), axis_value);

  // One flag per trial keeps the reduction order-insensitive, so thread
  // scheduling cannot change the summary.
  std::vector<std::uint8_t> misid(trials, 0);
  parallel_for(trials, effective_threads(options), [&](std::uint64_t t) {
    RandomStream rng(mix_seed(cell_seed, t));
    FbOutcome out = algorithm.run(instance, budget, rng);
    misid[t] = out.chosen != truth ? 1 : 0;
  });

  CellSummary cell;
  cell.algorithm = algorithm.label;
  cell.axis_name = axis_name;
  cell.axis_value = axis_value;
  cell.k = instance.size();
  cell.trials = trials;
  for (std::uint8_t m : misid) cell.misid_count += m;
  cell.misid_prob =
      static_cast<double>(cell.misid_count) / static_cast<double>(trials);
  auto [lo, hi] = wilson_ci(cell.misid_count, trials, 1.96);
  cell.ci_low = lo;
  cell.ci_high = hi;
  return cell;
}

namespace {

// Per-trial instance resampling variant of run_cell; trial t regenerates the
// instance from mix(instance seed, axis, t).
CellSummary run_cell_resampled(const InstanceSpec& spec,
                               const RegisteredAlgorithm& algorithm,
                               std::uint64_t budget, std::uint64_t trials,
                               std::uint64_t master_seed,
                               const std::string& axis_name,
                               std::uint64_t axis_value,
                               const RunOptions& options) {
  if (trials < 1) throw UsageError("run_cell: need trials >= 1");
  BanditInstance probe = build_instance(spec);
  if (auto reason = algorithm.feasibility(probe, budget)) {
    throw InfeasibleError(*reason);
  }
  std::uint64_t cell_seed =
      mix_seed(mix_seed(master_seed, fnv1a64(algorithm.label)), axis_value);
  std::vector<std::uint8_t> misid(trials, 0);
  parallel_for(trials, effective_threads(options), [&](std::uint64_t t) {
    InstanceSpec trial_spec = spec;
    trial_spec.seed = mix_seed(mix_seed(spec.seed, axis_value), t);
    BanditInstance inst = build_instance(trial_spec);
    RandomStream rng(mix_seed(cell_seed, t));
    FbOutcome out = algorithm.run(inst, budget, rng);
    misid[t] = out.chosen != best_arm(inst) ? 1 : 0;
  });
  CellSummary cell;
  cell.algorithm = algorithm.label;
  cell.axis_name = axis_name;
  cell.axis_value = axis_value;
  cell.k = probe.size();
  cell.trials = trials;
  for (std::uint8_t m : misid) cell.misid_count += m;
  cell.misid_prob =
      static_cast<double>(cell.misid_count) / static_cast<double>(trials);
  auto [lo, hi] = wilson_ci(cell.misid_count, trials, 1.96);
  cell.ci_low = lo;
  cell.ci_high = hi;
  return cell;
}

void validate_common(const ExperimentConfig& config) {
  if (config.trials < 1) throw UsageError("config: need trials >= 1");
  if (config.algorithms.empty()) {
    throw UsageError("config: need at least one algorithm");
  }
}

}  // namespace

SweepResult budget_sweep(const ExperimentConfig& config,
                         const RunOptions& options) {
  validate_common(config);
  if (config.budgets.empty()) {
    throw UsageError("budget_sweep: need a nonempty budget axis");
  }
  SweepResult result;
  BanditInstance instance = build_instance(config.instance);
  for (const auto& spec : config.algorithms) {
    RegisteredAlgorithm algo = make_registered_algorithm(spec);
    for (std::uint64_t budget : config.budgets) {
      try {
        if (config.resample_per_trial) {
          result.rows.push_back(run_cell_resampled(
              config.instance, algo, budget, config.trials,
              config.master_seed, "budget", budget, options));
        } else {
          result.rows.push_back(run_cell(instance, algo, budget,
                                         config.trials, config.master_seed,
                                         "budget", budget, options));
        }
      } catch (const InfeasibleError& e) {
        result.skipped.push_back({algo.label, "budget", budget, e.what()});
      }
    }
  }
  return result;
}

SweepResult arm_sweep(const ExperimentConfig& config,
                      const RunOptions& options) {
  validate_common(config);
  if (config.arm_counts.empty()) {
    throw UsageError("arm_sweep: need a nonempty arm axis");
  }
  if (config.fixed_budget == 0) {
    throw UsageError("arm_sweep: need a fixed budget");
  }
  SweepResult result;
  for (const auto& spec : config.algorithms) {
    RegisteredAlgorithm algo = make_registered_algorithm(spec);
    for (std::size_t k : config.arm_counts) {
      InstanceSpec inst_spec = config.instance;
      inst_spec.k = k;
      inst_spec.seed = mix_seed(config.instance.seed, k);
      if (inst_spec.generator == "adversarial") {
        inst_spec.budget = config.fixed_budget;
      }
      try {
        if (inst_spec.generator == "explicit" && inst_spec.arms.size() != k) {
          throw InfeasibleError("explicit instance does not match axis K");
        }
        if (config.resample_per_trial) {
          result.rows.push_back(run_cell_resampled(
              inst_spec, algo, config.fixed_budget, config.trials,
              config.master_seed, "arms", k, options));
        } else {
          BanditInstance instance = build_instance(inst_spec);
          result.rows.push_back(run_cell(instance, algo, config.fixed_budget,
                                         config.trials, config.master_seed,
                                         "arms", k, options));
        }
      } catch (const InfeasibleError& e) {
        result.skipped.push_back({algo.label, "arms", k, e.what()});
      }
    }
  }
  return result;
}

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string export_csv(const std::string& experiment_id,
                       const std::vector<CellSummary>& rows) {
  std::ostringstream out;
  out << "experiment_id,algorithm,axis_name,axis_value,K,trials,misid_count,"
         "misid_prob,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << experiment_id << ',' << r.algorithm << ',' << r.axis_name << ','
        << r.axis_value << ',' << r.k << ',' << r.trials << ','
        << r.misid_count << ',' << format_real(r.misid_prob) << ','
        << format_real(r.ci_low) << ',' << format_real(r.ci_high) << '\n';
  }
  return out.str();
}

std::vector<CellSummary> parse_csv(const std::string& text) {
  std::vector<CellSummary> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw UsageError("parse_csv: malformed row");
    CellSummary r;
    r.algorithm = fields[1];
    r.axis_name = fields[2];
    r.axis_value = std::stoull(fields[3]);
    r.k = std::stoull(fields[4]);
    r.trials = std::stoull(fields[5]);
    r.misid_count = std::stoull(fields[6]);
    r.misid_prob = std::stod(fields[7]);
    r.ci_low = std::stod(fields[8]);
    r.ci_high = std::stod(fields[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

nlohmann::json instance_spec_to_json(const InstanceSpec& s) {
  nlohmann::json j;
  j["generator"] = s.generator;
  j["k"] = s.k;
  j["seed"] = s.seed;
  if (s.generator == "figure") {
    j["gap2"] = s.gap2;
    j["gap_rest"] = s.gap_rest;
    j["var_lo"] = s.var_lo;
    j["var_hi"] = s.var_hi;
  } else if (s.generator == "adversarial") {
    j["budget"] = s.budget;
  } else if (s.generator == "explicit") {
    j["arms"] = nlohmann::json::array();
    for (const auto& a : s.arms) {
      j["arms"].push_back({{"mean", a.mean}, {"variance", a.variance}});
    }
  }
  return j;
}

InstanceSpec instance_spec_from_json(const nlohmann::json& j) {
  InstanceSpec s;
  s.generator = j.at("generator").get<std::string>();
  s.k = j.value("k", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
  s.gap2 = j.value("gap2", 0.1);
  s.gap_rest = j.value("gap_rest", 0.8);
  s.var_lo = j.value("var_lo", 1.0);
  s.var_hi = j.value("var_hi", 2.0);
  s.budget = j.value("budget", std::uint64_t{0});
  if (j.contains("arms")) {
    for (const auto& a : j["arms"]) {
      s.arms.push_back(
          {a.at("mean").get<double>(), a.at("variance").get<double>()});
    }
    if (s.k == 0) s.k = s.arms.size();
  }
  return s;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.instance = instance_spec_from_json(j.at("instance"));
  for (const auto& a : j.at("algorithms")) {
    AlgorithmSpec spec;
    spec.name = a.at("name").get<std::string>();
    spec.delta0_nats = a.value("delta0_nats", 1.0);
    if (a.contains("delta0")) {
      spec.delta0_nats = -std::log(a["delta0"].get<double>());
    }
    spec.q = a.value("q", std::uint64_t{1});
    spec.shvar_per_round_means = a.value("per_round_means", false);
    c.algorithms.push_back(std::move(spec));
  }
  if (j.contains("axis")) {
    const auto& axis = j["axis"];
    if (axis.contains("budgets")) {
      c.budgets = axis["budgets"].get<std::vector<std::uint64_t>>();
    }
    if (axis.contains("arms")) {
      c.arm_counts = axis["arms"].get<std::vector<std::size_t>>();
    }
    if (axis.contains("budget")) {
      c.fixed_budget = axis["budget"].get<std::uint64_t>();
    }
  }
  c.trials = j.at("trials").get<std::uint64_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.resample_per_trial = j.value("resample_per_trial", false);
  char fallback[32];
  std::snprintf(fallback, sizeof(fallback), "exp-%016" PRIx64, c.master_seed);
  c.experiment_id = j.value("experiment_id", std::string(fallback));
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment_id"] = c.experiment_id;
  j["instance"] = instance_spec_to_json(c.instance);
  j["algorithms"] = nlohmann::json::array();
  for (const auto& a : c.algorithms) {
    nlohmann::json ja;
    ja["name"] = a.name;
    ja["delta0_nats"] = a.delta0_nats;
    ja["q"] = a.q;
    if (a.shvar_per_round_means) ja["per_round_means"] = true;
    j["algorithms"].push_back(ja);
  }
  nlohmann::json axis;
  if (!c.budgets.empty()) axis["budgets"] = c.budgets;
  if (!c.arm_counts.empty()) axis["arms"] = c.arm_counts;
  if (c.fixed_budget != 0) axis["budget"] = c.fixed_budget;
  j["axis"] = axis;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["resample_per_trial"] = c.resample_per_trial;
  return j.dump(2);
}

std::string export_metadata(const ExperimentConfig& config,
                            const SweepResult& result, double wall_seconds) {
  nlohmann::json j;
  j["experiment_id"] = config.experiment_id;
  j["library_version"] = kVersion;
  j["wall_time_seconds"] = wall_seconds;
  j["config"] = nlohmann::json::parse(config_to_json(config));
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : result.skipped) {
    j["skipped"].push_back({{"algorithm", s.algorithm},
                            {"axis_name", s.axis_name},
                            {"axis_value", s.axis_value},
                            {"reason", s.reason}});
  }
  return j.dump(2);
}

}  // namespace bai
