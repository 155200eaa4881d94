#include "bai/scripted.hpp"

#include "bai/errors.hpp"

namespace bai {

ScriptedSession::ScriptedSession(const ScriptedConfig& config,
                                 RandomStream& rng)
    : config_(config), rng_(&rng) {
  if (config_.fail_prob < 0.0 || config_.fail_prob > 1.0) {
    throw UsageError("ScriptedSession: fail_prob must be in [0, 1]");
  }
}

std::size_t ScriptedSession::next_arm() {
  protocol_.on_next_arm(status_.running());
  return 0;
}

void ScriptedSession::observe(double /*reward*/) {
  protocol_.on_observe();
  if (config_.stop_time && protocol_.pulls() >= *config_.stop_time) {
    bool fail = rng_->uniform01() < config_.fail_prob;
    status_ = FcStatus::stopped_status(fail ? config_.wrong_output
                                            : config_.output);
  }
}

std::unique_ptr<FcSession> scripted_session(const ScriptedConfig& config,
                                            RandomStream& rng) {
  return std::make_unique<ScriptedSession>(config, rng);
}

FcFactory scripted_factory(const ScriptedConfig& config) {
  return [config](LogConfidence, RandomStream& rng) {
    return scripted_session(config, rng);
  };
}

}  // namespace bai
