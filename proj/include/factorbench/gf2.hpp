#pragma once

// Dense bit matrices and Gaussian elimination over GF(2).
//
// eliminate() finds linear dependencies among the rows: subsets of rows
// whose XOR is the zero vector. Each working row carries a history bit
// vector (an adjoined identity) recording which original rows it is the
// sum of, so a row that reduces to zero names its dependency directly.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace factorbench {

class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * stride_, 0) {}

  /// Builds from 0/1 literals; every row must have the same width.
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
    BitMatrix m(rows.size(), cols);
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != cols) {
        throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
      }
      std::size_t c = 0;
      for (int bit : row) {
        m.set(r, c++, bit != 0);
      }
      ++r;
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t words_per_row() const { return stride_; }

  [[nodiscard]] bool get(std::size_t r, std::size_t c) const {
    return ((bits_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U) != 0;
  }

  void set(std::size_t r, std::size_t c, bool value) {
    Word& w = bits_[r * stride_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  [[nodiscard]] std::span<const Word> row(std::size_t r) const {
    return {bits_.data() + r * stride_, stride_};
  }
  [[nodiscard]] std::span<Word> row(std::size_t r) { return {bits_.data() + r * stride_, stride_}; }

  static constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
};

/// Original row indices, ascending.
struct Dependency {
  std::vector<std::size_t> rows;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

namespace detail {

inline void xor_into(std::span<BitMatrix::Word> dst, std::span<const BitMatrix::Word> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] ^= src[i];
  }
}

inline bool all_zero(std::span<const BitMatrix::Word> words) {
  for (BitMatrix::Word w : words) {
    if (w != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/**
 * Forward elimination with history tracking. Columns are scanned left to
 * right; the pivot for a column is the lowest-indexed row not yet used as a
 * pivot that has the column bit set, and it is XORed into every other unused
 * row with that bit. Rows never chosen as a pivot end up zero and each
 * yields one Dependency, in ascending order of the row they came from.
 */
inline std::vector<Dependency> eliminate(const BitMatrix& m) {
  const std::size_t rows = m.rows();
  BitMatrix work = m;
  BitMatrix history(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    history.set(r, r, true);
  }
  std::vector<bool> used(rows, false);

  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t pivot = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!used[r] && work.get(r, c)) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) {
      continue;
    }
    used[pivot] = true;
    for (std::size_t r = pivot + 1; r < rows; ++r) {
      if (!used[r] && work.get(r, c)) {
        detail::xor_into(work.row(r), work.row(pivot));
        detail::xor_into(history.row(r), history.row(pivot));
      }
    }
  }

  std::vector<Dependency> deps;
  for (std::size_t r = 0; r < rows; ++r) {
    if (used[r]) {
      continue;
    }
    Dependency dep;
    for (std::size_t i = 0; i < rows; ++i) {
      if (history.get(r, i)) {
        dep.rows.push_back(i);
      }
    }
    deps.push_back(std::move(dep));
  }
  return deps;
}

/// True iff the XOR of the selected rows is zero.
inline bool row_xor_check(const BitMatrix& m, const Dependency& dep) {
  if (dep.rows.empty()) {
    throw std::invalid_argument("row_xor_check: empty dependency");
  }
  std::vector<BitMatrix::Word> acc(m.words_per_row(), 0);
  for (std::size_t r : dep.rows) {
    if (r >= m.rows()) {
      throw std::domain_error("row_xor_check: row index " + std::to_string(r) + " out of range");
    }
    detail::xor_into(acc, m.row(r));
  }
  return detail::all_zero(acc);
}

}  // namespace factorbench
