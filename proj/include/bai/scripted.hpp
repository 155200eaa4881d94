#pragma once

#include <cstdint>
#include <optional>

#include "bai/fc.hpp"

namespace bai {

// A controllable weak fixed-confidence mock for testing reductions. Pulls
// arm 0 repeatedly and ignores rewards. At pull `stop_time` it stops and
// reports `output` with probability 1 - fail_prob, else `wrong_output`; with
// stop_time unset it never stops.
struct ScriptedConfig {
  std::optional<std::uint64_t> stop_time;
  std::size_t output = 0;
  double fail_prob = 0.0;
  std::size_t wrong_output = 0;
};

class ScriptedSession final : public FcSession {
 public:
  // The stream must outlive the session; one uniform draw is consumed when
  // the stop decision is made.
  ScriptedSession(const ScriptedConfig& config, RandomStream& rng);

  std::size_t next_arm() override;
  void observe(double reward) override;
  FcStatus status() const override { return status_; }
  std::uint64_t pulls() const override { return protocol_.pulls(); }

 private:
  ScriptedConfig config_;
  RandomStream* rng_;
  FcStatus status_;
  SessionProtocol protocol_;
};

std::unique_ptr<FcSession> scripted_session(const ScriptedConfig& config,
                                            RandomStream& rng);

// Factory producing identically scripted sessions (confidence is ignored;
// the mock realizes a weak algorithm at one fixed failure rate).
FcFactory scripted_factory(const ScriptedConfig& config);

}  // namespace bai
