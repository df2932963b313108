#pragma once

// The basic (single-polynomial) quadratic sieve.
//
// One round with smoothness bound B and candidate count M:
//
//   1. factor base = all primes <= B
//   2. for b = ceil(sqrt n) .. ceil(sqrt n) + M - 1 keep (b, a = b^2 mod n)
//      whenever a is B-smooth, with a's exponent vector
//   3. reduce the exponent vectors mod 2 and find dependencies over GF(2)
//   4. each dependency gives x = prod b, y = sqrt(prod a) with
//      x^2 = y^2 (mod n); gcd(|x - y|, n) is tried as a factor
//
// When no dependency separates the factors, B and M are both increased and
// the round is repeated from scratch. Smoothness is decided by trial
// division over the whole factor base; there is no log-threshold sieving
// and no quadratic-residue filtering of the base.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "factorbench/arith.hpp"
#include "factorbench/common.hpp"
#include "factorbench/gf2.hpp"

namespace factorbench {

namespace detail {

// Exact-division test by an odd constant: p | a  <=>  a * p^-1 (mod 2^64) <= floor((2^64 - 1) / p),
// and when it holds a * p^-1 is the quotient.
struct OddDivisor {
  std::uint64_t inverse = 0;
  std::uint64_t limit = 0;

  explicit OddDivisor(std::uint64_t p) : limit(std::numeric_limits<std::uint64_t>::max() / p) {
    std::uint64_t inv = p;  // correct to 3 bits for odd p
    for (int i = 0; i < 5; ++i) {
      inv *= 2 - p * inv;
    }
    inverse = inv;
  }
};

}  // namespace detail

class FactorBase {
 public:
  FactorBase() = default;

  /// All primes <= bound by a sieve of Eratosthenes.
  explicit FactorBase(std::uint64_t bound) : bound_(bound) {
    if (bound < 2) {
      throw std::domain_error("FactorBase: bound must be >= 2");
    }
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
      if (composite[i]) {
        continue;
      }
      primes_.push_back(i);
      divisors_.emplace_back(i | 1);  // unused for 2
      for (std::uint64_t j = i * i; j <= bound; j += i) {
        composite[j] = true;
      }
    }
  }

  [[nodiscard]] std::uint64_t bound() const { return bound_; }
  [[nodiscard]] const std::vector<std::uint64_t>& primes() const { return primes_; }
  [[nodiscard]] std::size_t size() const { return primes_.size(); }

  /// Exponent vector of a over the base, or nullopt when a is not smooth.
  [[nodiscard]] std::optional<std::vector<std::uint32_t>> decompose(std::uint64_t a) const {
    if (a == 0) {
      throw std::domain_error("smooth_decompose: a must be >= 1");
    }
    std::vector<std::uint32_t> exponents(primes_.size(), 0);
    for (std::size_t i = 0; i < primes_.size() && a != 1; ++i) {
      if (primes_[i] == 2) {
        const int tz = __builtin_ctzll(a);
        exponents[i] = static_cast<std::uint32_t>(tz);
        a >>= tz;
        continue;
      }
      const detail::OddDivisor& d = divisors_[i];
      std::uint64_t quotient = a * d.inverse;
      while (quotient <= d.limit) {
        ++exponents[i];
        a = quotient;
        quotient = a * d.inverse;
      }
    }
    if (a != 1) {
      return std::nullopt;
    }
    return exponents;
  }

  [[nodiscard]] std::optional<std::vector<std::uint32_t>> decompose(const Natural& a) const {
    if (fits_u64(a)) {
      return decompose(a.get_ui());
    }
    if (sgn(a) <= 0) {
      throw std::domain_error("smooth_decompose: a must be >= 1");
    }
    Natural rest = a;
    std::vector<std::uint32_t> exponents(primes_.size(), 0);
    for (std::size_t i = 0; i < primes_.size() && rest != 1; ++i) {
      const unsigned long p = primes_[i];
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++exponents[i];
      }
    }
    if (rest != 1) {
      return std::nullopt;
    }
    return exponents;
  }

 private:
  std::uint64_t bound_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<detail::OddDivisor> divisors_;
};

inline FactorBase build_factor_base(std::uint64_t bound) { return FactorBase(bound); }

inline std::optional<std::vector<std::uint32_t>> smooth_decompose(const Natural& a, const FactorBase& fb) {
  return fb.decompose(a);
}

struct Relation {
  Natural b;
  Natural a;  // b^2 mod n
  std::vector<std::uint32_t> exponents;
  std::vector<bool> parity;

  [[nodiscard]] bool parity_is_zero() const {
    for (bool bit : parity) {
      if (bit) {
        return false;
      }
    }
    return true;
  }
};

namespace detail {

inline Relation make_relation(Natural b, Natural a, std::vector<std::uint32_t> exponents) {
  Relation rel{std::move(b), std::move(a), std::move(exponents), {}};
  rel.parity.resize(rel.exponents.size());
  for (std::size_t i = 0; i < rel.exponents.size(); ++i) {
    rel.parity[i] = (rel.exponents[i] & 1U) != 0;
  }
  return rel;
}

}  // namespace detail

/**
 * Scans b = ceil(sqrt n) + i for i in [0, m_count) in order and keeps every
 * smooth, nonzero residue. Throws FactorError(budget_exceeded) when the
 * deadline passes mid-scan.
 */
inline std::vector<Relation> collect_relations(const Natural& n, const FactorBase& fb, std::uint64_t m_count,
                                               const Deadline& deadline) {
  if (n < 4) {
    throw std::domain_error("collect_relations: n must be >= 4");
  }
  if (is_perfect_square(n)) {
    throw std::domain_error("collect_relations: n is a perfect square");
  }
  std::vector<Relation> relations;
  const Natural first = isqrt_ceil(n);

  if (fits_u64(n) && fits_u64(Natural(first + natural(m_count)))) {
    const std::uint64_t nn = n.get_ui();
    std::uint64_t b = first.get_ui();
    for (std::uint64_t i = 0; i < m_count; ++i, ++b) {
      if (deadline.expired()) {
        throw FactorError(FactorErrc::budget_exceeded);
      }
      const auto wide = static_cast<unsigned __int128>(b) * b;
      const auto a = static_cast<std::uint64_t>(wide % nn);
      if (a == 0) {
        continue;
      }
      if (auto exps = fb.decompose(a)) {
        relations.push_back(detail::make_relation(natural(b), natural(a), std::move(*exps)));
      }
    }
    return relations;
  }

  Natural b = first;
  Natural a;
  for (std::uint64_t i = 0; i < m_count; ++i, ++b) {
    if (deadline.expired()) {
      throw FactorError(FactorErrc::budget_exceeded);
    }
    mpz_mul(a.get_mpz_t(), b.get_mpz_t(), b.get_mpz_t());
    mpz_mod(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    if (sgn(a) == 0) {
      continue;
    }
    if (auto exps = fb.decompose(a)) {
      relations.push_back(detail::make_relation(b, a, std::move(*exps)));
    }
  }
  return relations;
}

/// The (x, y) pair a dependency produces: x = prod b mod n and y = prod p^(e/2) mod n
/// over the summed exponent vector e, so that x^2 = y^2 (mod n).
struct SquareCongruence {
  Natural x;
  Natural y;
};

inline SquareCongruence square_congruence(const Natural& n, const FactorBase& fb,
                                          const std::vector<Relation>& relations, const Dependency& dep) {
  if (dep.rows.empty()) {
    throw std::domain_error("square_congruence: empty dependency");
  }
  std::vector<std::uint64_t> summed(fb.size(), 0);
  Natural x = 1;
  for (std::size_t idx : dep.rows) {
    if (idx >= relations.size()) {
      throw std::out_of_range("square_congruence: relation index " + std::to_string(idx) + " out of range");
    }
    const Relation& rel = relations[idx];
    if (rel.exponents.size() != fb.size()) {
      throw std::domain_error("square_congruence: relation does not match the factor base");
    }
    x = (x * rel.b) % n;
    for (std::size_t i = 0; i < summed.size(); ++i) {
      summed[i] += rel.exponents[i];
    }
  }
  Natural y = 1;
  for (std::size_t i = 0; i < summed.size(); ++i) {
    if (summed[i] % 2 != 0) {
      throw std::domain_error("square_congruence: selected parity vectors do not sum to zero");
    }
    if (summed[i] != 0) {
      y = (y * mod_pow(natural(fb.primes()[i]), natural(summed[i] / 2), n)) % n;
    }
  }
  return {std::move(x), std::move(y)};
}

/// gcd(|x - y|, n) when it is a proper divisor, otherwise nullopt (a trivial congruence).
inline std::optional<Natural> extract_factor(const Natural& n, const FactorBase& fb,
                                             const std::vector<Relation>& relations, const Dependency& dep) {
  const SquareCongruence sq = square_congruence(n, fb, relations, dep);
  const Natural diff = abs_diff(sq.x, sq.y);
  if (sgn(diff) == 0) {
    return std::nullopt;
  }
  Natural g = gcd(diff, n);
  if (g > 1 && g < n) {
    return g;
  }
  return std::nullopt;
}

struct QsParams {
  std::uint64_t b_bound = 10;
  std::uint64_t m_count = 100;
  std::uint64_t b_increment = 10;
  std::uint64_t m_increment = 100;
  unsigned max_rounds = 500;
};

struct QsTrace {
  unsigned rounds = 0;
  std::uint64_t relations_found = 0;  // summed over rounds
  std::uint64_t dependencies_tried = 0;
  std::uint64_t final_b = 0;
  std::uint64_t final_m = 0;
  bool small_factor = false;
};

struct QsResult {
  Natural factor;
  QsTrace trace;
};

inline QsResult qs_factor(const Natural& n, const QsParams& params, const Deadline& deadline) {
  if (n < 4) {
    throw std::domain_error("qs_factor: n must be >= 4");
  }
  if (params.b_bound < 2 || params.m_count < 1 || params.b_increment < 1 || params.m_increment < 1) {
    throw std::domain_error("qs_factor: invalid parameters");
  }
  if (is_perfect_square(n)) {
    throw FactorError(FactorErrc::perfect_square, {}, isqrt(n));
  }
  if (is_probable_prime(n)) {
    throw FactorError(FactorErrc::not_composite);
  }

  QsResult result;
  QsTrace& trace = result.trace;
  std::uint64_t bound = params.b_bound;
  std::uint64_t m_count = params.m_count;
  trace.final_b = bound;
  trace.final_m = m_count;

  for (std::uint64_t p : FactorBase(bound).primes()) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      result.factor = natural(p);
      trace.small_factor = true;
      return result;
    }
  }

  auto progress = [&] { return FailureProgress{trace.rounds, trace.final_b, trace.final_m}; };

  for (unsigned round = 1; round <= params.max_rounds; ++round) {
    if (deadline.expired()) {
      throw FactorError(FactorErrc::budget_exceeded, progress());
    }
    trace.rounds = round;
    trace.final_b = bound;
    trace.final_m = m_count;

    const FactorBase fb(bound);
    std::vector<Relation> relations;
    try {
      relations = collect_relations(n, fb, m_count, deadline);
    } catch (const FactorError& e) {
      throw FactorError(e.code(), progress());
    }
    trace.relations_found += relations.size();

    // A relation with an all-even exponent vector is a congruence of squares on its own.
    for (std::size_t i = 0; i < relations.size(); ++i) {
      if (!relations[i].parity_is_zero()) {
        continue;
      }
      ++trace.dependencies_tried;
      if (auto g = extract_factor(n, fb, relations, Dependency{{i}})) {
        result.factor = std::move(*g);
        return result;
      }
    }

    if (deadline.expired()) {
      throw FactorError(FactorErrc::budget_exceeded, progress());
    }
    BitMatrix matrix(relations.size(), fb.size());
    for (std::size_t r = 0; r < relations.size(); ++r) {
      for (std::size_t c = 0; c < fb.size(); ++c) {
        if (relations[r].parity[c]) {
          matrix.set(r, c, true);
        }
      }
    }
    for (const Dependency& dep : eliminate(matrix)) {
      if (dep.rows.size() == 1 && relations[dep.rows.front()].parity_is_zero()) {
        continue;  // already tried above
      }
      if (deadline.expired()) {
        throw FactorError(FactorErrc::budget_exceeded, progress());
      }
      ++trace.dependencies_tried;
      if (auto g = extract_factor(n, fb, relations, dep)) {
        result.factor = std::move(*g);
        return result;
      }
    }

    bound += params.b_increment;
    m_count += params.m_increment;
  }
  throw FactorError(FactorErrc::rounds_exhausted, progress());
}

inline QsResult qs_factor(const Natural& n, const QsParams& params, Seconds budget) {
  return qs_factor(n, params, Deadline::after(budget));
}

}  // namespace factorbench
