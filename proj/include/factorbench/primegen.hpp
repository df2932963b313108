#pragma once

// Seeded generation of probable primes and semiprime datasets.
//
// Datasets come in two flavours: fixed groups, where every composite has
// prescribed factor and product bit lengths, and random groups, where the
// factor bit lengths are drawn per row subject to a cap on the product size.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "factorbench/arith.hpp"

namespace factorbench {

/// Attempts random_semiprime makes before giving up.
inline constexpr unsigned kMaxSemiprimeAttempts = 10'000;

/// Smallest prime size drawn for random-bit-length groups; (2, 2) admits no
/// product of two distinct primes with an exact 4-bit result.
inline constexpr unsigned kMinRandomPrimeBits = 3;

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Semiprime {
  Natural n;
  Natural p;  // p <= q
  Natural q;
  unsigned p_bits = 0;
  unsigned q_bits = 0;
  unsigned n_bits = 0;

  friend bool operator==(const Semiprime&, const Semiprime&) = default;
};

struct FixedGroup {
  unsigned count = 0;
  unsigned p_bits = 0;
  unsigned q_bits = 0;
  unsigned n_bits = 0;
};

struct RandomGroup {
  unsigned count = 0;
  unsigned max_product_bits = 0;
};

struct DatasetSpec {
  std::vector<FixedGroup> groups;
  std::vector<RandomGroup> random_groups;
  std::uint64_t seed = 0;
};

/// Probable prime with exactly `bits` bits. The top bit is forced and, above
/// two bits, so is the low bit.
inline Natural random_prime(unsigned bits, Rng& rng) {
  if (bits < 2) {
    throw std::domain_error("random_prime: bits must be >= 2");
  }
  if (bits == 2) {
    return natural(2 + (rng() & 1));
  }
  Natural top = 1;
  top <<= bits - 1;
  for (;;) {
    Natural candidate = random_bits(rng, bits - 1);
    candidate |= top;
    candidate |= 1;
    if (is_probable_prime(candidate)) {
      return candidate;
    }
  }
}

inline Semiprime random_semiprime(unsigned p_bits, unsigned q_bits, unsigned n_bits, Rng& rng) {
  if (p_bits < 2 || q_bits < 2) {
    throw std::domain_error("random_semiprime: prime sizes must be >= 2 bits");
  }
  if (p_bits + q_bits != n_bits) {
    throw std::domain_error("random_semiprime: p_bits + q_bits must equal n_bits");
  }
  for (unsigned attempt = 0; attempt < kMaxSemiprimeAttempts; ++attempt) {
    Natural p = random_prime(p_bits, rng);
    Natural q = random_prime(q_bits, rng);
    if (p == q) {
      continue;
    }
    Natural n = p * q;
    if (bit_length(n) != n_bits) {
      continue;
    }
    if (q < p) {
      std::swap(p, q);
    }
    Semiprime s;
    s.p_bits = static_cast<unsigned>(bit_length(p));
    s.q_bits = static_cast<unsigned>(bit_length(q));
    s.n_bits = n_bits;
    s.n = std::move(n);
    s.p = std::move(p);
    s.q = std::move(q);
    return s;
  }
  throw GenerationError("random_semiprime: no " + std::to_string(n_bits) + "-bit product of distinct " +
                        std::to_string(p_bits) + "- and " + std::to_string(q_bits) + "-bit primes after " +
                        std::to_string(kMaxSemiprimeAttempts) + " attempts");
}

inline void validate(const DatasetSpec& spec) {
  for (const FixedGroup& g : spec.groups) {
    if (g.count < 1) {
      throw std::invalid_argument("dataset spec: group count must be >= 1");
    }
    if (g.p_bits < 2 || g.q_bits < 2) {
      throw std::invalid_argument("dataset spec: prime sizes must be >= 2 bits");
    }
    if (g.p_bits + g.q_bits != g.n_bits) {
      throw std::invalid_argument("dataset spec: p_bits + q_bits != n_bits (" + std::to_string(g.p_bits) + " + " +
                                  std::to_string(g.q_bits) + " != " + std::to_string(g.n_bits) + ")");
    }
  }
  for (const RandomGroup& g : spec.random_groups) {
    if (g.count < 1) {
      throw std::invalid_argument("dataset spec: random group count must be >= 1");
    }
    if (g.max_product_bits < 2 * kMinRandomPrimeBits) {
      throw std::invalid_argument("dataset spec: max_product_bits must be >= " +
                                  std::to_string(2 * kMinRandomPrimeBits));
    }
  }
}

/// Unordered (p_bits <= q_bits) size pairs whose product size fits in max_bits.
inline std::vector<std::pair<unsigned, unsigned>> admissible_size_pairs(unsigned max_bits) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned p = kMinRandomPrimeBits; 2 * p <= max_bits; ++p) {
    for (unsigned q = p; p + q <= max_bits; ++q) {
      pairs.emplace_back(p, q);
    }
  }
  return pairs;
}

/// Fixed groups first, then random groups, each in spec order. Group i uses
/// its own generator seeded from (spec.seed, i).
inline std::vector<Semiprime> generate_dataset(const DatasetSpec& spec) {
  validate(spec);
  std::vector<Semiprime> out;
  std::uint64_t group_index = 0;
  for (const FixedGroup& g : spec.groups) {
    Rng rng(derive_seed(spec.seed, group_index++));
    for (unsigned i = 0; i < g.count; ++i) {
      out.push_back(random_semiprime(g.p_bits, g.q_bits, g.n_bits, rng));
    }
  }
  for (const RandomGroup& g : spec.random_groups) {
    Rng rng(derive_seed(spec.seed, group_index++));
    const auto pairs = admissible_size_pairs(g.max_product_bits);
    for (unsigned i = 0; i < g.count; ++i) {
      const auto [p_bits, q_bits] = pairs[random_u64_below(rng, pairs.size())];
      out.push_back(random_semiprime(p_bits, q_bits, p_bits + q_bits, rng));
    }
  }
  return out;
}

/// The fifteen (n, p, q) bit-size rows of the fixed-size benchmark design.
inline std::vector<FixedGroup> grid_groups(unsigned count_per_group) {
  static constexpr unsigned kRows[][3] = {
      {40, 5, 35}, {40, 10, 30}, {40, 15, 25}, {40, 20, 20},
      {50, 5, 45}, {50, 10, 40}, {50, 15, 35}, {50, 20, 30}, {50, 25, 25},
      {60, 5, 55}, {60, 10, 50}, {60, 15, 45}, {60, 20, 40}, {60, 25, 35}, {60, 30, 30},
  };
  std::vector<FixedGroup> groups;
  for (const auto& row : kRows) {
    groups.push_back({count_per_group, row[1], row[2], row[0]});
  }
  return groups;
}

}  // namespace factorbench
