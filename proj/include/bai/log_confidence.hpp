#pragma once

#include <cmath>

#include "bai/errors.hpp"

namespace bai {

// A failure rate delta carried as ln(1/delta) in nats. Raw deltas underflow
// double precision as soon as a reduction squares them a few dozen times
// (delta0^(2^k)), so every interface in this library takes and returns nats.
// Composing failure rates by multiplying deltas is adding nats.
struct LogConfidence {
  double nats = 0.0;  // ln(1/delta) >= 0

  static LogConfidence from_nats(double nats) {
    if (!(nats >= 0.0)) {
      throw UsageError("LogConfidence: nats must be >= 0 (delta <= 1)");
    }
    return LogConfidence{nats};
  }

  static LogConfidence from_delta(double delta) {
    if (!(delta > 0.0) || delta > 1.0) {
      throw UsageError("LogConfidence: delta must be in (0, 1]");
    }
    return LogConfidence{-std::log(delta)};
  }

  // For display only; underflows to 0 for large nats.
  double delta() const { return std::exp(-nats); }

  // delta^factor expressed in nats.
  LogConfidence scaled(double factor) const {
    return from_nats(nats * factor);
  }
};

}  // namespace bai
