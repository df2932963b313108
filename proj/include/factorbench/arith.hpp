#pragma once

// Arbitrary-precision number-theory primitives.
//
// Natural is GMP's mpz_class restricted by convention to non-negative
// values; every public entry point that accepts a Natural rejects negative
// inputs. All functions here are pure and thread-safe.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace factorbench {

using Natural = mpz_class;

/// The one generator type used everywhere randomness is needed.
using Rng = std::mt19937_64;

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "factorbench assumes an LP64 platform");

namespace detail {

inline void require_natural(const Natural& v, const char* what) {
  if (sgn(v) < 0) {
    throw std::domain_error(std::string(what) + ": negative input");
  }
}

}  // namespace detail

inline Natural natural(std::uint64_t v) { return Natural(static_cast<unsigned long>(v)); }

/// Parses a base-10 string of digits. Signs, whitespace and empty input are rejected.
inline Natural parse_natural(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("parse_natural: empty string");
  }
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw std::invalid_argument("parse_natural: not a decimal integer: " + std::string(text));
    }
  }
  return Natural(std::string(text), 10);
}

inline std::string to_string(const Natural& v) { return v.get_str(10); }

inline bool fits_u64(const Natural& v) { return sgn(v) >= 0 && mpz_fits_ulong_p(v.get_mpz_t()) != 0; }

inline std::uint64_t to_u64(const Natural& v) {
  if (!fits_u64(v)) {
    throw std::overflow_error("to_u64: value does not fit in 64 bits");
  }
  return v.get_ui();
}

/// floor(log2 v) + 1, and 0 for v = 0.
inline std::size_t bit_length(const Natural& v) {
  detail::require_natural(v, "bit_length");
  if (sgn(v) == 0) {
    return 0;
  }
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline Natural gcd(const Natural& a, const Natural& b) {
  detail::require_natural(a, "gcd");
  detail::require_natural(b, "gcd");
  if (sgn(a) == 0 && sgn(b) == 0) {
    throw std::domain_error("gcd: both arguments are zero");
  }
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Natural abs_diff(const Natural& a, const Natural& b) {
  return a >= b ? Natural(a - b) : Natural(b - a);
}

/// base^exp mod modulus by left-to-right square-and-multiply.
inline Natural mod_pow(const Natural& base, const Natural& exp, const Natural& modulus) {
  detail::require_natural(base, "mod_pow");
  detail::require_natural(exp, "mod_pow");
  detail::require_natural(modulus, "mod_pow");
  if (sgn(modulus) == 0) {
    throw std::domain_error("mod_pow: modulus is zero");
  }
  Natural r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

/// Largest r with r*r <= n.
inline Natural isqrt(const Natural& n) {
  detail::require_natural(n, "isqrt");
  Natural r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Smallest r with r*r >= n.
inline Natural isqrt_ceil(const Natural& n) {
  Natural r = isqrt(n);
  if (r * r < n) {
    ++r;
  }
  return r;
}

inline bool is_perfect_square(const Natural& n) {
  detail::require_natural(n, "is_perfect_square");
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

constexpr std::array<std::uint64_t, 10> first_ten_primes() {
  return {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
}

// Seeded randomness

/// SplitMix64 finaliser; used to fold indices into seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

/// Uniform integer in [0, bound) by masked rejection; bound > 0.
/// Portable: depends only on the raw 64-bit output sequence of the engine.
inline std::uint64_t random_u64_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw std::domain_error("random_u64_below: empty range");
  }
  if (bound == 1) {
    return 0;
  }
  const int width = 64 - __builtin_clzll(bound - 1);
  const std::uint64_t mask = width == 64 ? ~0ULL : ((1ULL << width) - 1);
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < bound) {
      return v;
    }
  }
}

/// Uniform value with at most `bits` bits.
inline Natural random_bits(Rng& rng, std::size_t bits) {
  Natural v = 0;
  std::size_t remaining = bits;
  while (remaining > 0) {
    const std::size_t take = remaining < 64 ? remaining : 64;
    std::uint64_t chunk = rng();
    if (take < 64) {
      chunk &= (1ULL << take) - 1;
    }
    v <<= static_cast<mp_bitcnt_t>(take);
    v += natural(chunk);
    remaining -= take;
  }
  return v;
}

/// Uniform value in [0, bound).
inline Natural random_below(Rng& rng, const Natural& bound) {
  if (sgn(bound) <= 0) {
    throw std::domain_error("random_below: empty range");
  }
  const std::size_t bits = bit_length(Natural(bound - 1));
  for (;;) {
    Natural v = random_bits(rng, bits);
    if (v < bound) {
      return v;
    }
  }
}

/// Uniform value in [lo, hi].
inline Natural random_between(Rng& rng, const Natural& lo, const Natural& hi) {
  if (hi < lo) {
    throw std::domain_error("random_between: empty range");
  }
  return lo + random_below(rng, Natural(hi - lo + 1));
}

// Primality

inline constexpr unsigned kDefaultPrimalityRounds = 40;

namespace detail {

inline constexpr std::array<std::uint32_t, 25> kSmallPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

// One strong-pseudoprime round: n - 1 = d * 2^s with d odd.
inline bool strong_probable_prime(const Natural& n, const Natural& n_minus_1, const Natural& d,
                                  unsigned long s, const Natural& witness) {
  Natural x = mod_pow(witness, d, n);
  if (x == 1 || x == n_minus_1) {
    return true;
  }
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n_minus_1) {
      return true;
    }
    if (x == 1) {
      return false;
    }
  }
  return false;
}

}  // namespace detail

/**
 * Miller-Rabin test. Values below 97^2 are decided exactly by trial division.
 * Witnesses are drawn from a generator seeded by n itself, so the answer is a
 * pure function of (n, rounds).
 */
inline bool is_probable_prime(const Natural& n, unsigned rounds = kDefaultPrimalityRounds) {
  detail::require_natural(n, "is_probable_prime");
  if (rounds == 0) {
    throw std::domain_error("is_probable_prime: rounds must be >= 1");
  }
  if (n < 2) {
    return false;
  }
  for (std::uint32_t p : detail::kSmallPrimes) {
    if (n == p) {
      return true;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      return false;
    }
  }
  if (n < 97 * 97) {
    return true;
  }

  const Natural n_minus_1 = n - 1;
  const unsigned long s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  Natural d;
  mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  Rng rng(mix_seed(mpz_get_ui(n.get_mpz_t()) ^ bit_length(n)));
  const Natural hi = n - 2;
  for (unsigned i = 0; i < rounds; ++i) {
    const Natural witness = random_between(rng, Natural(2), hi);
    if (!detail::strong_probable_prime(n, n_minus_1, d, s, witness)) {
      return false;
    }
  }
  return true;
}

}  // namespace factorbench
