#pragma once

// Deadlines and the error type shared by the factoring algorithms.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "factorbench/arith.hpp"

namespace factorbench {

using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

/// A point on the monotonic clock after which cooperative algorithms give up.
class Deadline {
 public:
  static Deadline never() { return Deadline(Clock::time_point::max()); }

  static Deadline after(Seconds budget) {
    const auto now = Clock::now();
    const auto room = std::chrono::duration_cast<Clock::duration>(Clock::time_point::max() - now);
    if (budget >= Seconds(room)) {
      return never();
    }
    return Deadline(now + std::chrono::duration_cast<Clock::duration>(budget));
  }

  explicit Deadline(Clock::time_point at) : at_(at) {}

  [[nodiscard]] bool expired() const {
    return at_ != Clock::time_point::max() && Clock::now() >= at_;
  }

  [[nodiscard]] Clock::time_point at() const { return at_; }

 private:
  Clock::time_point at_;
};

enum class FactorErrc {
  not_composite,
  budget_exceeded,
  restarts_exhausted,
  rounds_exhausted,
  perfect_square,
};

inline const char* to_string(FactorErrc code) {
  switch (code) {
    case FactorErrc::not_composite: return "not composite";
    case FactorErrc::budget_exceeded: return "budget exceeded";
    case FactorErrc::restarts_exhausted: return "restarts exhausted";
    case FactorErrc::rounds_exhausted: return "rounds exhausted";
    case FactorErrc::perfect_square: return "perfect square";
  }
  return "unknown";
}

/// Progress counters an algorithm had reached when it failed.
struct FailureProgress {
  std::uint64_t iterations = 0;
  std::optional<std::uint64_t> b_param;
  std::optional<std::uint64_t> m_param;
};

class FactorError : public std::runtime_error {
 public:
  FactorError(FactorErrc code, FailureProgress progress = {}, std::optional<Natural> root = {})
      : std::runtime_error(to_string(code)), code_(code), progress_(progress), root_(std::move(root)) {}

  [[nodiscard]] FactorErrc code() const { return code_; }
  [[nodiscard]] const FailureProgress& progress() const { return progress_; }
  /// Square root of n for perfect_square.
  [[nodiscard]] const std::optional<Natural>& root() const { return root_; }

 private:
  FactorErrc code_;
  FailureProgress progress_;
  std::optional<Natural> root_;
};

}  // namespace factorbench
