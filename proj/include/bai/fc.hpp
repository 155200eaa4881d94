#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "bai/log_confidence.hpp"
#include "bai/random.hpp"

namespace bai {

// Status of a fixed-confidence session: still sampling, or stopped with a
// recommended arm. A stopped session accepts no further pulls.
struct FcStatus {
  std::optional<std::size_t> stopped_arm;

  bool running() const { return !stopped_arm.has_value(); }
  bool stopped() const { return stopped_arm.has_value(); }

  static FcStatus running_status() { return {}; }
  static FcStatus stopped_status(std::size_t arm) { return {arm}; }
};

// A fixed-confidence algorithm as a pull/observe state machine. The caller
// alternates strictly: each next_arm() is answered by exactly one observe()
// before the next next_arm(). Out-of-order calls throw UsageError, as does
// pulling a stopped session. Sessions are single-threaded state machines.
class FcSession {
 public:
  virtual ~FcSession() = default;

  // Arm the algorithm wants sampled next.
  virtual std::size_t next_arm() = 0;

  // Delivers the reward for the arm returned by the pending next_arm().
  virtual void observe(double reward) = 0;

  virtual FcStatus status() const = 0;

  // Number of completed (next_arm, observe) pairs.
  virtual std::uint64_t pulls() const = 0;
};

// Makes a fresh, independent session at the given confidence. Sessions that
// need randomness draw from the supplied stream, which must outlive the
// session; the caller interleaves its own draws (e.g. environment rewards)
// on the same stream, never concurrently.
using FcFactory =
    std::function<std::unique_ptr<FcSession>(LogConfidence, RandomStream&)>;

// Reward source for one pull of an arm.
using RewardFn = std::function<double(std::size_t arm, RandomStream&)>;

// Reward source bound to nothing; for algorithm mocks that ignore rewards.
inline RewardFn null_rewards() {
  return [](std::size_t, RandomStream&) { return 0.0; };
}

// Helper enforcing the pull/observe alternation shared by all sessions.
class SessionProtocol {
 public:
  void on_next_arm(bool session_running) {
    if (!session_running) {
      throw UsageError("FcSession: next_arm() on a stopped session");
    }
    if (awaiting_observe_) {
      throw UsageError("FcSession: next_arm() called twice without observe()");
    }
    awaiting_observe_ = true;
  }

  void on_observe() {
    if (!awaiting_observe_) {
      throw UsageError("FcSession: observe() without a pending next_arm()");
    }
    awaiting_observe_ = false;
    ++pulls_;
  }

  std::uint64_t pulls() const { return pulls_; }

 private:
  bool awaiting_observe_ = false;
  std::uint64_t pulls_ = 0;
};

}  // namespace bai
