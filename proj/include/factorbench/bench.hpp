#pragma once

// Runs both factoring algorithms over a dataset under a per-attempt time budget.
//
// Budgets are cooperative. Pollard rho polls its deadline every
// `rho_check_interval` iterations and the quadratic sieve polls before every
// candidate, before elimination and before every dependency, so an attempt
// can overrun its budget by one polling interval. kTimeoutSlackSeconds is the
// documented bound on that overrun.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "factorbench/arith.hpp"
#include "factorbench/common.hpp"
#include "factorbench/pollard_rho.hpp"
#include "factorbench/primegen.hpp"
#include "factorbench/quadratic_sieve.hpp"

namespace factorbench {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr double kDefaultBudgetSeconds = 180.0;
inline constexpr double kTimeoutSlackSeconds = 0.025;

enum class Algorithm { pollard, qs };
enum class Status { success, timeout, error };

inline const char* to_string(Algorithm a) { return a == Algorithm::pollard ? "pollard" : "qs"; }

inline const char* to_string(Status s) {
  switch (s) {
    case Status::success: return "success";
    case Status::timeout: return "timeout";
    case Status::error: return "error";
  }
  return "error";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "pollard") return Algorithm::pollard;
  if (s == "qs") return Algorithm::qs;
  throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

inline Status parse_status(std::string_view s) {
  if (s == "success") return Status::success;
  if (s == "timeout") return Status::timeout;
  if (s == "error") return Status::error;
  throw std::invalid_argument("unknown status: " + std::string(s));
}

struct FactorOutcome {
  Algorithm algorithm = Algorithm::pollard;
  Natural n;
  Status status = Status::error;
  std::optional<Natural> factor;
  double elapsed_seconds = 0.0;
  std::optional<std::uint64_t> b_param;
  std::optional<std::uint64_t> m_param;
  std::uint64_t iterations = 0;  // rho iterations, or sieve rounds for qs
  std::uint64_t seed = 0;
};

struct BenchRecord {
  Semiprime semiprime;
  FactorOutcome outcome;
};

struct BenchConfig {
  double budget_seconds = kDefaultBudgetSeconds;
  std::vector<Algorithm> algorithms{Algorithm::pollard, Algorithm::qs};
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  QsParams qs{};
  unsigned rho_max_restarts = 20;
  unsigned rho_check_interval = 1024;
};

inline std::uint64_t record_seed(std::uint64_t base, std::size_t row, Algorithm algo) {
  return derive_seed(base, row, static_cast<std::uint64_t>(algo) + 1);
}

inline bool is_proper_factor(const Natural& n, const Natural& f) {
  return f > 1 && f < n && mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t()) != 0;
}

/// One timed attempt. Algorithm failures become statuses, never exceptions.
inline FactorOutcome run_one(const Natural& n, Algorithm algo, std::uint64_t seed, const BenchConfig& cfg) {
  FactorOutcome out;
  out.algorithm = algo;
  out.n = n;
  out.seed = seed;

  const auto start = Clock::now();
  const Deadline deadline = Deadline::after(Seconds(cfg.budget_seconds));
  try {
    if (algo == Algorithm::pollard) {
      RhoResult r = pollard_factor(n, RhoConfig{seed, cfg.rho_max_restarts, cfg.rho_check_interval}, deadline);
      out.factor = std::move(r.factor);
      out.iterations = r.trace.iterations;
    } else {
      QsResult r = qs_factor(n, cfg.qs, deadline);
      out.factor = std::move(r.factor);
      out.iterations = r.trace.rounds;
      out.b_param = r.trace.final_b;
      out.m_param = r.trace.final_m;
    }
    out.status = Status::success;
  } catch (const FactorError& e) {
    out.iterations = e.progress().iterations;
    out.b_param = e.progress().b_param;
    out.m_param = e.progress().m_param;
    if (e.code() == FactorErrc::perfect_square && e.root()) {
      out.factor = *e.root();
      out.status = Status::success;
    } else {
      out.status = e.code() == FactorErrc::budget_exceeded ? Status::timeout : Status::error;
    }
  } catch (const std::exception&) {
    out.status = Status::error;
  }
  out.elapsed_seconds = Seconds(Clock::now() - start).count();

  if (out.status == Status::success && !(out.factor && is_proper_factor(n, *out.factor))) {
    out.status = Status::error;
  }
  if (out.status != Status::success) {
    out.factor.reset();
  }
  return out;
}

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/**
 * One record per (row, algorithm), in dataset order and then in
 * cfg.algorithms order. Seeds depend only on (cfg.seed, row, algorithm), so
 * statuses and factors do not depend on the worker count.
 */
inline std::vector<BenchRecord> run_bench(std::span<const Semiprime> dataset, const BenchConfig& cfg,
                                          const ProgressFn& progress = {}) {
  if (dataset.empty()) {
    throw std::invalid_argument("run_bench: empty dataset");
  }
  if (!(cfg.budget_seconds > 0.0)) {
    throw std::invalid_argument("run_bench: budget_seconds must be > 0");
  }
  if (cfg.workers < 1) {
    throw std::invalid_argument("run_bench: workers must be >= 1");
  }
  if (cfg.algorithms.empty()) {
    throw std::invalid_argument("run_bench: no algorithms selected");
  }

  const std::size_t per_row = cfg.algorithms.size();
  const std::size_t total = dataset.size() * per_row;
  std::vector<BenchRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto work = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t row = job / per_row;
      const Algorithm algo = cfg.algorithms[job % per_row];
      records[job].semiprime = dataset[row];
      records[job].outcome = run_one(dataset[row].n, algo, record_seed(cfg.seed, row, algo), cfg);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  if (cfg.workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < cfg.workers; ++i) {
      pool.emplace_back(work);
    }
  }
  return records;
}

struct Violation {
  std::size_t index = 0;
  std::string reason;
};

/// Re-checks every success record; other statuses carry no factor and are not inspected.
inline std::vector<Violation> verify_outcomes(std::span<const BenchRecord> records) {
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FactorOutcome& o = records[i].outcome;
    if (o.status != Status::success) {
      continue;
    }
    if (o.n != records[i].semiprime.n) {
      violations.push_back({i, "outcome n differs from dataset n"});
    } else if (!o.factor) {
      violations.push_back({i, "success without a factor"});
    } else if (!is_proper_factor(o.n, *o.factor)) {
      violations.push_back({i, to_string(*o.factor) + " is not a proper factor of " + to_string(o.n)});
    }
  }
  return violations;
}

}  // namespace factorbench
