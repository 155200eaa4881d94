// Command-line front end: instance generation, single runs, sweeps, and
// closed-form bound evaluation.
//
// Exit codes: 0 success, 2 usage error, 3 success with skipped cells,
// 4 I/O error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bai/errors.hpp"
#include "bai/harness.hpp"
#include "bai/instance.hpp"
#include "bai/theory.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kPartial = 3;
constexpr int kIo = 4;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(std::stod(field));
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(std::stoull(field));
  return out;
}

// "lo:hi" variance range.
std::pair<double, double> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    double v = std::stod(text);
    return {v, v};
  }
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

void write_file_or_stdout(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << body;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

unsigned resolve_threads(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BAI_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;  // harness default: hardware concurrency
}

// Confidence given either as delta or as nats; exactly one must be set.
struct ConfFlags {
  std::optional<double> delta;
  std::optional<double> nats;

  bai::LogConfidence resolve(const std::string& what) const {
    if (delta && nats) {
      throw bai::UsageError(what + ": give either a delta or nats, not both");
    }
    if (delta) return bai::LogConfidence::from_delta(*delta);
    if (nats) return bai::LogConfidence::from_nats(*nats);
    throw bai::UsageError(what + ": missing confidence");
  }
};

void add_conf_flags(CLI::App* cmd, ConfFlags& flags, const std::string& name) {
  cmd->add_option("--" + name, [&flags](const CLI::results_t& res) {
    flags.delta = std::stod(res[0]);
    return true;
  }, "failure rate as a probability");
  cmd->add_option("--" + name + "-nats", [&flags](const CLI::results_t& res) {
    flags.nats = std::stod(res[0]);
    return true;
  }, "failure rate as ln(1/delta)");
}

struct InstanceFlags {
  std::string gen;
  std::size_t k = 0;
  double gap2 = 0.1;
  double gap_rest = 0.8;
  std::string var_range = "1:2";
  std::uint64_t budget = 0;
  std::string means;
  std::string vars;

  bai::InstanceSpec to_spec(std::uint64_t seed) const {
    bai::InstanceSpec spec;
    spec.generator = gen;
    spec.k = k;
    spec.seed = seed;
    spec.gap2 = gap2;
    spec.gap_rest = gap_rest;
    auto [lo, hi] = parse_range(var_range);
    spec.var_lo = lo;
    spec.var_hi = hi;
    spec.budget = budget;
    if (gen == "explicit") {
      auto ms = parse_double_list(means);
      auto vs = parse_double_list(vars);
      if (ms.size() != vs.size() || ms.empty()) {
        throw bai::UsageError("explicit instance: --means and --vars must be "
                              "nonempty lists of equal length");
      }
      for (std::size_t i = 0; i < ms.size(); ++i) {
        spec.arms.push_back({ms[i], vs[i]});
      }
      spec.k = ms.size();
    }
    return spec;
  }
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
  cmd->add_option("--gen", flags.gen, "figure | adversarial | explicit")
      ->required();
  cmd->add_option("--k", flags.k, "number of arms");
  cmd->add_option("--gap2", flags.gap2, "gap of the runner-up arm");
  cmd->add_option("--gap-rest", flags.gap_rest, "gap of the remaining arms");
  cmd->add_option("--var", flags.var_range, "variance range lo:hi");
  cmd->add_option("--budget", flags.budget,
                  "budget parameter of the adversarial family");
  cmd->add_option("--means", flags.means, "comma list (explicit)");
  cmd->add_option("--vars", flags.vars, "comma list (explicit)");
}

int cmd_instance(const InstanceFlags& flags, std::uint64_t seed,
                 const std::string& out_path) {
  bai::BanditInstance instance = bai::build_instance(flags.to_spec(seed));
  write_file_or_stdout(out_path, bai::instance_to_json(instance) + "\n");
  return kOk;
}

bai::ExperimentConfig load_or_build_config(
    const std::string& config_path, const InstanceFlags& inst,
    const std::string& algos, const std::string& budgets,
    const std::string& arms, std::uint64_t fixed_budget, std::uint64_t trials,
    std::uint64_t seed, const std::string& experiment_id) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::ios_base::failure("cannot open " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return bai::config_from_json(buf.str());
  }
  bai::ExperimentConfig config;
  config.instance = inst.to_spec(seed);
  for (const auto& name : [&] {
         std::vector<std::string> names;
         std::istringstream is(algos);
         std::string field;
         while (std::getline(is, field, ',')) names.push_back(field);
         return names;
       }()) {
    bai::AlgorithmSpec spec;
    spec.name = name;
    config.algorithms.push_back(spec);
  }
  if (!budgets.empty()) config.budgets = parse_u64_list(budgets);
  if (!arms.empty()) {
    for (auto v : parse_u64_list(arms)) {
      config.arm_counts.push_back(static_cast<std::size_t>(v));
    }
  }
  config.fixed_budget = fixed_budget;
  config.trials = trials;
  config.master_seed = seed;
  if (!experiment_id.empty()) {
    config.experiment_id = experiment_id;
  } else {
    char fallback[32];
    std::snprintf(fallback, sizeof(fallback), "exp-%016llx",
                  static_cast<unsigned long long>(seed));
    config.experiment_id = fallback;
  }
  return config;
}

int run_sweep(const bai::ExperimentConfig& config, bool is_arm_sweep,
              unsigned threads, const std::string& out_path) {
  bai::RunOptions options;
  options.threads = resolve_threads(threads);
  auto start = std::chrono::steady_clock::now();
  bai::SweepResult result =
      is_arm_sweep ? bai::arm_sweep(config, options)
                   : bai::budget_sweep(config, options);
  double wall = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  write_file_or_stdout(out_path,
                       bai::export_csv(config.experiment_id, result.rows));
  if (!out_path.empty() && out_path != "-") {
    write_file_or_stdout(out_path + ".meta.json",
                         bai::export_metadata(config, result, wall) + "\n");
  }
  return result.skipped.empty() ? kOk : kPartial;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Best-arm identification toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  // instance
  auto* instance_cmd =
      app.add_subcommand("instance", "generate a bandit instance file");
  InstanceFlags inst_flags;
  add_instance_flags(instance_cmd, inst_flags);
  std::uint64_t inst_seed = 0;
  std::string inst_out = "-";
  instance_cmd->add_option("--seed", inst_seed, "instance seed")->required();
  instance_cmd->add_option("--out", inst_out, "output path (default stdout)");

  // run
  auto* run_cmd = app.add_subcommand("run", "run one algorithm cell");
  InstanceFlags run_inst;
  add_instance_flags(run_cmd, run_inst);
  std::string run_instance_file;
  run_cmd->add_option("--instance", run_instance_file,
                      "instance JSON file (instead of --gen)");
  run_cmd->get_option("--gen")->required(false);
  std::string run_algo;
  std::uint64_t run_budget = 0;
  std::uint64_t run_trials = 1;
  std::uint64_t run_seed = 0;
  unsigned run_threads = 0;
  double run_delta0_nats = 1.0;
  std::uint64_t run_q = 1;
  std::string run_out = "-";
  run_cmd->add_option("--algo", run_algo, "sh | shvar | uniform | fc2fb-pekhn")
      ->required();
  run_cmd->add_option("--budget", run_budget, "total pulls")->required();
  run_cmd->add_option("--trials", run_trials, "Monte Carlo trials");
  run_cmd->add_option("--seed", run_seed, "master seed")->required();
  run_cmd->add_option("--threads", run_threads, "worker threads");
  run_cmd->add_option("--delta0-nats", run_delta0_nats,
                      "fc2fb base failure rate in nats");
  run_cmd->add_option("--q", run_q, "fc2fb base budget Q");
  run_cmd->add_option("--out", run_out, "output CSV path (default stdout)");

  // sweeps
  std::string sweep_config, sweep_algos, sweep_budgets, sweep_arms;
  std::string sweep_out = "-";
  std::string sweep_id;
  std::uint64_t sweep_fixed_budget = 0, sweep_trials = 0, sweep_seed = 0;
  bool sweep_seed_set = false;
  unsigned sweep_threads = 0;
  InstanceFlags sweep_inst;
  auto add_sweep_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", sweep_config, "experiment config JSON");
    add_instance_flags(cmd, sweep_inst);
    cmd->get_option("--gen")->required(false);
    cmd->add_option("--algos", sweep_algos, "comma list of algorithms");
    cmd->add_option("--trials", sweep_trials, "trials per cell");
    cmd->add_option(
        "--seed",
        [&](const CLI::results_t& res) {
          sweep_seed = std::stoull(res[0]);
          sweep_seed_set = true;
          return true;
        },
        "master seed");
    cmd->add_option("--threads", sweep_threads, "worker threads");
    cmd->add_option("--out", sweep_out, "output CSV path");
    cmd->add_option("--id", sweep_id, "experiment id for the CSV");
  };
  auto* sweep_budget_cmd =
      app.add_subcommand("sweep-budget", "misidentification vs budget");
  add_sweep_flags(sweep_budget_cmd);
  sweep_budget_cmd->add_option("--budgets", sweep_budgets,
                               "comma list of budgets");
  auto* sweep_arms_cmd =
      app.add_subcommand("sweep-arms", "misidentification vs number of arms");
  add_sweep_flags(sweep_arms_cmd);
  sweep_arms_cmd->add_option("--arms", sweep_arms, "comma list of K values");
  sweep_arms_cmd->add_option("--budget-fixed", sweep_fixed_budget,
                             "budget shared by all cells");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "evaluate a closed-form bound");
  bound_cmd->require_subcommand(1);
  double b_a = 0.0, b_c = 0.0, b_h = 0.0, b_f = 1.0, b_gap = 0.0;
  std::uint64_t b_budget = 0, b_q = 1, b_t = 0, b_b0 = 0, b_l = 0, b_fd = 0;
  std::size_t b_k = 0;
  std::string b_sigma2;
  ConfFlags b_delta, b_delta0;

  auto* bound_fc2fb = bound_cmd->add_subcommand(
      "fc2fb", "error bound of the staged reduction");
  bound_fc2fb->add_option("--b", b_budget, "budget")->required();
  bound_fc2fb->add_option("--a", b_a, "samples per nat")->required();
  bound_fc2fb->add_option("--q", b_q, "base budget Q");
  add_conf_flags(bound_fc2fb, b_delta0, "delta0");

  auto* bound_thresh = bound_cmd->add_subcommand(
      "fc2fb-threshold", "budget sufficiency threshold");
  bound_thresh->add_option("--a", b_a)->required();
  bound_thresh->add_option("--c", b_c);
  bound_thresh->add_option("--q", b_q);
  add_conf_flags(bound_thresh, b_delta0, "delta0");

  auto* bound_fc2at =
      bound_cmd->add_subcommand("fc2at", "error bound of the anytime wrapper");
  bound_fc2at->add_option("--t", b_t, "global time")->required();
  bound_fc2at->add_option("--a", b_a)->required();
  bound_fc2at->add_option("--c", b_c);
  bound_fc2at->add_option("--q", b_q);
  add_conf_flags(bound_fc2at, b_delta0, "delta0");

  auto* bound_pekhn = bound_cmd->add_subcommand(
      "pekhn", "stopping-time bound of phased elimination");
  bound_pekhn->add_option("--k", b_k)->required();
  bound_pekhn->add_option("--sigma2", b_sigma2, "comma list or one value")
      ->required();
  bound_pekhn->add_option("--gap", b_gap, "suboptimal gap (broadcast)")
      ->required();
  add_conf_flags(bound_pekhn, b_delta, "delta");

  auto* bound_fcw2s_l = bound_cmd->add_subcommand(
      "fcw2s-l", "copies needed by the weak-to-strong booster");
  add_conf_flags(bound_fcw2s_l, b_delta, "delta");
  add_conf_flags(bound_fcw2s_l, b_delta0, "delta0");

  auto* bound_fcw2s_stop =
      bound_cmd->add_subcommand("fcw2s-stop", "booster stopping bound");
  bound_fcw2s_stop->add_option("--l", b_l)->required();
  bound_fcw2s_stop->add_option("--f", b_fd, "weak stopping time f(delta0)")
      ->required();

  auto* bound_fbsc = bound_cmd->add_subcommand(
      "fb-sc", "budget solving F * exp(-B/H) = delta");
  bound_fbsc->add_option("--f", b_f)->required();
  bound_fbsc->add_option("--h", b_h)->required();
  bound_fbsc->add_option("--b0", b_b0, "warm-up floor");
  add_conf_flags(bound_fbsc, b_delta, "delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (instance_cmd->parsed()) {
      return cmd_instance(inst_flags, inst_seed, inst_out);
    }
    if (run_cmd->parsed()) {
      bai::AlgorithmSpec spec;
      spec.name = run_algo;
      spec.delta0_nats = run_delta0_nats;
      spec.q = run_q;
      bai::RegisteredAlgorithm algo = bai::make_registered_algorithm(spec);
      bai::BanditInstance instance = [&]() {
        if (!run_instance_file.empty()) {
          std::ifstream in(run_instance_file);
          if (!in) {
            throw std::ios_base::failure("cannot open " + run_instance_file);
          }
          std::stringstream buf;
          buf << in.rdbuf();
          return bai::instance_from_json(buf.str());
        }
        if (run_inst.gen.empty()) {
          throw bai::UsageError("run: need --instance or --gen");
        }
        return bai::build_instance(run_inst.to_spec(run_seed));
      }();
      bai::RunOptions options;
      options.threads = resolve_threads(run_threads);
      bai::CellSummary cell =
          bai::run_cell(instance, algo, run_budget, run_trials, run_seed,
                        "budget", run_budget, options);
      write_file_or_stdout(run_out, bai::export_csv("run", {cell}));
      return kOk;
    }
    if (sweep_budget_cmd->parsed() || sweep_arms_cmd->parsed()) {
      bool is_arm_sweep = sweep_arms_cmd->parsed();
      if (sweep_config.empty() && !sweep_seed_set) {
        throw bai::UsageError("sweep: missing --seed");
      }
      bai::ExperimentConfig config = load_or_build_config(
          sweep_config, sweep_inst, sweep_algos, sweep_budgets, sweep_arms,
          sweep_fixed_budget, sweep_trials, sweep_seed, sweep_id);
      return run_sweep(config, is_arm_sweep, sweep_threads, sweep_out);
    }
    if (bound_cmd->parsed()) {
      char buf[64];
      if (bound_fc2fb->parsed()) {
        double v = bai::theory::fc2fb_error_bound(
            b_budget, b_a, b_delta0.resolve("delta0"), b_q);
        std::snprintf(buf, sizeof(buf), "%.12g\n", v);
        std::cout << buf;
      } else if (bound_thresh->parsed()) {
        double v = bai::theory::fc2fb_budget_threshold(
            {b_a, b_c}, b_delta0.resolve("delta0"), b_q);
        std::snprintf(buf, sizeof(buf), "%.12g\n", v);
        std::cout << buf;
      } else if (bound_fc2at->parsed()) {
        double v = bai::theory::fc2at_error_bound(
            b_t, {b_a, b_c}, b_delta0.resolve("delta0"), b_q);
        std::snprintf(buf, sizeof(buf), "%.12g\n", v);
        std::cout << buf;
      } else if (bound_pekhn->parsed()) {
        auto sigma2 = parse_double_list(b_sigma2);
        if (sigma2.size() == 1) sigma2.assign(b_k, sigma2[0]);
        if (sigma2.size() != b_k) {
          throw bai::UsageError("bound pekhn: --sigma2 must have K entries");
        }
        std::vector<bai::GaussianArm> arms;
        arms.push_back({1.0, sigma2[0]});
        for (std::size_t i = 1; i < b_k; ++i) {
          arms.push_back({1.0 - b_gap, sigma2[i]});
        }
        std::uint64_t v = bai::theory::pekhn_sample_bound(
            bai::BanditInstance(std::move(arms)), b_delta.resolve("delta"));
        std::cout << v << "\n";
      } else if (bound_fcw2s_l->parsed()) {
        std::cout << bai::fcw2s_required_trials(b_delta.resolve("delta"),
                                                b_delta0.resolve("delta0"))
                  << "\n";
      } else if (bound_fcw2s_stop->parsed()) {
        std::cout << bai::theory::fcw2s_stop_bound(b_l, b_fd) << "\n";
      } else if (bound_fbsc->parsed()) {
        std::cout << bai::theory::fb_error_to_sample_complexity(
                         b_f, b_h, b_delta.resolve("delta"), b_b0)
                  << "\n";
      }
      return kOk;
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const bai::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bai::InvalidInstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bai::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
