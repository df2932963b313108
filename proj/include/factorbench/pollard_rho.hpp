#pragma once

// Pollard's rho factorisation with Floyd cycle detection.
//
// Before the main loop n is screened for primality (the loop never
// terminates on a prime) and trial-divided by the first ten primes. The
// loop itself walks x one step and y two steps per iteration under
// f(v) = v^2 + c mod n and stops at the first gcd(|x - y|, n) strictly
// between 1 and n. A gcd equal to n means the cycle closed without
// separating the factors; the walk is restarted with fresh c and x0.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "factorbench/arith.hpp"
#include "factorbench/common.hpp"

namespace factorbench {

struct RhoConfig {
  std::uint64_t seed = 0;
  unsigned max_restarts = 20;
  unsigned deadline_check_interval = 1024;
};

struct RhoTrace {
  std::uint64_t iterations = 0;
  unsigned restarts = 0;
  std::vector<Natural> c_values;
  bool small_prime_hit = false;
};

struct RhoResult {
  Natural factor;
  RhoTrace trace;
};

/// (x*x + c) mod n
inline Natural rho_step(const Natural& x, const Natural& c, const Natural& n) {
  if (n < 2) {
    throw std::domain_error("rho_step: modulus must be >= 2");
  }
  Natural r = x * x + c;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace detail {

// In-place f(v) = v^2 + c mod n on a scratch value; avoids temporaries in the hot loop.
inline void rho_advance(mpz_t v, mpz_srcptr c, mpz_srcptr n) {
  mpz_mul(v, v, v);
  mpz_add(v, v, c);
  mpz_mod(v, v, n);
}

}  // namespace detail

inline RhoResult pollard_factor(const Natural& n, const RhoConfig& cfg, const Deadline& deadline) {
  if (n < 2) {
    throw std::domain_error("pollard_factor: n must be >= 2");
  }
  if (cfg.max_restarts < 1 || cfg.deadline_check_interval < 1) {
    throw std::domain_error("pollard_factor: max_restarts and deadline_check_interval must be >= 1");
  }
  RhoResult result;
  RhoTrace& trace = result.trace;

  if (is_probable_prime(n)) {
    throw FactorError(FactorErrc::not_composite);
  }
  for (std::uint64_t p : first_ten_primes()) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      result.factor = natural(p);
      trace.small_prime_hit = true;
      return result;
    }
  }

  Rng rng(cfg.seed);
  const Natural hi = n - 1;
  Natural x, y, diff, d;
  std::uint64_t until_check = cfg.deadline_check_interval;

  // Attempt 0 plus at most max_restarts restarts.
  for (unsigned attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
    Natural c = random_between(rng, Natural(1), hi);
    x = random_between(rng, Natural(1), hi);
    y = x;
    detail::rho_advance(y.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
    trace.c_values.push_back(c);
    trace.restarts = attempt;

    for (;;) {
      detail::rho_advance(x.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
      detail::rho_advance(y.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
      detail::rho_advance(y.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
      mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      ++trace.iterations;

      if (d != 1 && d != n) {
        result.factor = d;
        return result;
      }
      if (d == n) {
        break;
      }
      if (--until_check == 0) {
        until_check = cfg.deadline_check_interval;
        if (deadline.expired()) {
          throw FactorError(FactorErrc::budget_exceeded, {trace.iterations, {}, {}});
        }
      }
    }
  }
  throw FactorError(FactorErrc::restarts_exhausted, {trace.iterations, {}, {}});
}

inline RhoResult pollard_factor(const Natural& n, const RhoConfig& cfg, Seconds budget) {
  return pollard_factor(n, cfg, Deadline::after(budget));
}

}  // namespace factorbench
