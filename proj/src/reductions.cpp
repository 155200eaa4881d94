#include "bai/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bai/errors.hpp"

namespace bai {

Fc2FbSchedule fc2fb_schedule(std::uint64_t budget, std::uint64_t q) {
  if (q < 1) throw UsageError("fc2fb_schedule: Q must be >= 1");
  if (2 * q > budget) throw UsageError("fc2fb_schedule: need Q <= B / 2");
  // R = floor(log2(B / Q)) in exact integer arithmetic, overflow-safe.
  std::uint64_t stages = 0;
  while (stages + 1 < 63 && (budget >> (stages + 1)) >= q) ++stages;
  Fc2FbSchedule s;
  s.stages = stages;
  s.stage_budget = budget / stages;
  s.ladder.resize(stages);
  for (std::uint64_t r = 1; r <= stages; ++r) {
    s.ladder[r - 1] = std::uint64_t{1} << (stages - r);
  }
  return s;
}

namespace {

// Drives one session until it stops on its own or the pull cap is hit.
// Returns the stopped arm, if any.
std::optional<std::size_t> drive_session(FcSession& session,
                                         const RewardFn& rewards,
                                         std::uint64_t pull_cap,
                                         RandomStream& rng) {
  while (session.status().running() && session.pulls() < pull_cap) {
    std::size_t arm = session.next_arm();
    session.observe(rewards(arm, rng));
  }
  return session.status().stopped_arm;
}

}  // namespace

std::size_t fc2fb_run(const FcFactory& factory, const RewardFn& rewards,
                      std::size_t k, std::uint64_t budget,
                      LogConfidence delta0, std::uint64_t q,
                      RandomStream& rng) {
  if (!(delta0.nats > 0.0)) {
    throw UsageError("fc2fb_run: delta0 must be < 1 (nats > 0)");
  }
  if (k < 1) throw UsageError("fc2fb_run: need K >= 1");
  Fc2FbSchedule schedule = fc2fb_schedule(budget, q);
  for (std::uint64_t r = 1; r <= schedule.stages; ++r) {
    // Independent randomness per stage, for both the session and its rewards.
    RandomStream stage_rng = rng.split(r);
    LogConfidence stage_conf =
        delta0.scaled(static_cast<double>(schedule.ladder[r - 1]));
    auto session = factory(stage_conf, stage_rng);
    auto out = drive_session(*session, rewards, schedule.stage_budget,
                             stage_rng);
    if (out) return *out;  // first self-terminating stage wins
  }
  return rng.uniform_index(k);
}

std::size_t naive_fc2fb(const FcFactory& factory, const RewardFn& rewards,
                        std::size_t k, std::uint64_t budget, double a,
                        double c, RandomStream& rng) {
  if (!(a > 0.0)) throw UsageError("naive_fc2fb: A must be > 0");
  if (!(static_cast<double>(budget) > c)) {
    throw UsageError("naive_fc2fb: need B > C");
  }
  LogConfidence conf =
      LogConfidence::from_nats((static_cast<double>(budget) - c) / a);
  RandomStream session_rng = rng.split(1);
  auto session = factory(conf, session_rng);
  auto out = drive_session(*session, rewards, budget, session_rng);
  if (out) return *out;
  return rng.uniform_index(k);
}

std::uint64_t fcw2s_required_trials(LogConfidence target_conf,
                                    LogConfidence base_conf) {
  double log_boost = base_conf.nats - 1.0 - std::log(4.0);  // ln(1/(4e*d0))
  if (!(log_boost > 0.0)) {
    throw UsageError("fcw2s_required_trials: need delta0 < 1/(4e)");
  }
  return static_cast<std::uint64_t>(
      std::ceil(4.0 * target_conf.nats / log_boost));
}

Fcw2sResult fcw2s_run(const FcFactory& factory, const RewardFn& rewards,
                      std::uint64_t l, LogConfidence delta0,
                      RandomStream& rng) {
  if (l < 2) throw UsageError("fcw2s_run: need L >= 2");
  std::vector<RandomStream> streams;
  streams.reserve(l);
  std::vector<std::unique_ptr<FcSession>> sessions;
  sessions.reserve(l);
  for (std::uint64_t i = 0; i < l; ++i) {
    streams.push_back(rng.split(i + 1));
    sessions.push_back(factory(delta0, streams.back()));
  }

  std::vector<bool> alive(l, true);
  std::vector<std::size_t> votes_by_copy(l, 0);
  std::uint64_t surviving = l;
  std::uint64_t total_pulls = 0;

  while (surviving >= l / 2) {
    // Surviving copy with the fewest pulls; ties to the lowest copy index.
    std::size_t pick = l;
    std::uint64_t fewest = 0;
    for (std::size_t i = 0; i < l; ++i) {
      if (!alive[i]) continue;
      if (pick == l || sessions[i]->pulls() < fewest) {
        pick = i;
        fewest = sessions[i]->pulls();
      }
    }
    FcSession& s = *sessions[pick];
    std::size_t arm = s.next_arm();
    s.observe(rewards(arm, streams[pick]));
    ++total_pulls;
    if (s.status().stopped()) {
      alive[pick] = false;
      votes_by_copy[pick] = *s.status().stopped_arm;
      --surviving;
    }
  }

  // Majority vote over stopped copies; ties to the lowest arm index.
  std::map<std::size_t, std::uint64_t> votes;
  for (std::size_t i = 0; i < l; ++i) {
    if (!alive[i]) ++votes[votes_by_copy[i]];
  }
  std::size_t winner = 0;
  std::uint64_t best = 0;
  for (const auto& [arm, n] : votes) {
    if (n > best) {
      winner = arm;
      best = n;
    }
  }
  return {winner, total_pulls};
}

std::size_t AnytimeTrace::at(std::uint64_t t) const {
  if (t < 1 || t > horizon) {
    throw UsageError("AnytimeTrace::at: t out of [1, horizon]");
  }
  std::size_t rec = initial;
  for (const auto& [when, arm] : changes) {
    if (when > t) break;
    rec = arm;
  }
  return rec;
}

AnytimeTrace fc2at_run(const FcFactory& factory, const RewardFn& rewards,
                       std::size_t k, LogConfidence delta0, std::uint64_t q,
                       std::uint64_t horizon, RandomStream& rng) {
  if (q < 1) throw UsageError("fc2at_run: Q must be >= 1");
  if (horizon < 2 * q) throw UsageError("fc2at_run: need horizon >= 2 * Q");
  AnytimeTrace trace;
  trace.initial = 0;
  trace.horizon = horizon;
  std::uint64_t clock = 0;
  for (std::uint64_t phase = 1; phase < 63; ++phase) {
    if (q > (horizon >> phase)) break;  // T_i would overflow the horizon
    std::uint64_t phase_budget = q << phase;  // T_i = 2^i * Q
    if (horizon - clock < phase_budget) break;  // incomplete phase: no update
    RandomStream phase_rng = rng.split(phase);
    std::size_t out =
        fc2fb_run(factory, rewards, k, phase_budget, delta0, q, phase_rng);
    // The phase occupies its full budget on the global clock even when the
    // inner run stopped early; idle steps repeat its recommendation.
    clock += phase_budget;
    trace.changes.emplace_back(clock, out);
    if (clock >= horizon) break;
  }
  return trace;
}

}  // namespace bai
