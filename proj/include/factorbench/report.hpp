#pragma once

// Aggregations over benchmark results and their Markdown rendering.
//
// Grouped tables are ordered by ascending product size and then by
// descending bit difference (|p_bits - q_bits|), or ascending p_bits for
// the failure counts. Runtime means cover successful attempts only; a group
// without successes has no mean rather than a zero one.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "factorbench/bench.hpp"
#include "factorbench/io.hpp"

namespace factorbench {

struct GroupStat {
  unsigned n_bits = 0;
  std::optional<unsigned> p_bits;  // absent when the group mixes factor sizes
  std::optional<unsigned> q_bits;
  unsigned bit_difference = 0;
  std::size_t total = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  double success_fraction = 0.0;
  std::optional<double> mean_elapsed_success;
};

namespace detail {

inline unsigned bit_difference(const Semiprime& s) {
  return s.p_bits > s.q_bits ? s.p_bits - s.q_bits : s.q_bits - s.p_bits;
}

inline unsigned low_bits(const Semiprime& s) { return std::min(s.p_bits, s.q_bits); }
inline unsigned high_bits(const Semiprime& s) { return std::max(s.p_bits, s.q_bits); }

struct Accumulator {
  GroupStat stat;
  double elapsed_sum = 0.0;
  bool mixed_sizes = false;
};

inline void add(Accumulator& acc, const BenchRecord& r) {
  GroupStat& g = acc.stat;
  const unsigned lo = low_bits(r.semiprime);
  const unsigned hi = high_bits(r.semiprime);
  if (g.total == 0) {
    g.p_bits = lo;
    g.q_bits = hi;
  } else if (g.p_bits != lo || g.q_bits != hi) {
    acc.mixed_sizes = true;
  }
  ++g.total;
  if (r.outcome.status == Status::success) {
    ++g.successes;
    acc.elapsed_sum += r.outcome.elapsed_seconds;
  } else {
    ++g.failures;
  }
}

inline GroupStat finish(Accumulator acc) {
  GroupStat g = std::move(acc.stat);
  g.success_fraction = g.total == 0 ? 0.0 : static_cast<double>(g.successes) / static_cast<double>(g.total);
  if (g.successes > 0) {
    g.mean_elapsed_success = acc.elapsed_sum / static_cast<double>(g.successes);
  }
  if (acc.mixed_sizes) {
    g.p_bits.reset();
    g.q_bits.reset();
  }
  return g;
}

// Groups by (n_bits, bit difference): ascending size, descending difference.
inline std::vector<GroupStat> by_bit_difference(std::span<const BenchRecord> records, Algorithm algo) {
  std::map<std::pair<unsigned, unsigned>, Accumulator, std::less<>> groups;
  for (const BenchRecord& r : records) {
    if (r.outcome.algorithm != algo) continue;
    const unsigned diff = bit_difference(r.semiprime);
    Accumulator& acc = groups[{r.semiprime.n_bits, diff}];
    acc.stat.n_bits = r.semiprime.n_bits;
    acc.stat.bit_difference = diff;
    add(acc, r);
  }
  std::vector<GroupStat> out;
  for (auto& [key, acc] : groups) {
    out.push_back(finish(std::move(acc)));
  }
  std::stable_sort(out.begin(), out.end(), [](const GroupStat& a, const GroupStat& b) {
    return a.n_bits != b.n_bits ? a.n_bits < b.n_bits : a.bit_difference > b.bit_difference;
  });
  return out;
}

}  // namespace detail

/// Non-success counts per (n_bits, p_bits, q_bits).
inline std::vector<GroupStat> failure_counts(std::span<const BenchRecord> records, Algorithm algo) {
  std::map<std::tuple<unsigned, unsigned, unsigned>, detail::Accumulator> groups;
  for (const BenchRecord& r : records) {
    if (r.outcome.algorithm != algo) continue;
    const unsigned lo = detail::low_bits(r.semiprime);
    const unsigned hi = detail::high_bits(r.semiprime);
    detail::Accumulator& acc = groups[{r.semiprime.n_bits, lo, hi}];
    acc.stat.n_bits = r.semiprime.n_bits;
    acc.stat.bit_difference = hi - lo;
    detail::add(acc, r);
  }
  std::vector<GroupStat> out;
  for (auto& [key, acc] : groups) {
    out.push_back(detail::finish(std::move(acc)));
  }
  return out;
}

inline std::vector<GroupStat> success_rate_by_bitdiff(std::span<const BenchRecord> records, Algorithm algo) {
  return detail::by_bit_difference(records, algo);
}

inline std::vector<GroupStat> avg_runtime_by_bitdiff(std::span<const BenchRecord> records, Algorithm algo) {
  return detail::by_bit_difference(records, algo);
}

// ---------------------------------------------------------------------------
// Head to head
// ---------------------------------------------------------------------------

struct HeadToHeadRow {
  Semiprime semiprime;
  Status pollard_status = Status::error;
  double pollard_seconds = 0.0;
  Status qs_status = Status::error;
  double qs_seconds = 0.0;
  bool qs_faster = false;
};

struct HeadToHead {
  std::vector<HeadToHeadRow> rows;
  std::size_t unmatched = 0;  // records whose n has no partner from the other algorithm

  [[nodiscard]] std::size_t qs_faster_count() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.qs_faster; }));
  }
};

/// QS wins a pairing when it succeeded and pollard either failed or was strictly slower.
inline bool qs_wins(Status pollard, double pollard_s, Status qs, double qs_s) {
  if (qs != Status::success) return false;
  if (pollard != Status::success) return true;
  return qs_s < pollard_s;
}

/**
 * Pairs the k-th pollard record for a given n with the k-th qs record for
 * the same n. Rows follow the order in which each n first appears.
 */
inline HeadToHead head_to_head(std::span<const BenchRecord> records) {
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_n;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string key = to_string(records[i].semiprime.n);
    auto [it, inserted] = by_n.try_emplace(key);
    if (inserted) order.push_back(key);
    (records[i].outcome.algorithm == Algorithm::pollard ? it->second.first : it->second.second).push_back(i);
  }
  HeadToHead out;
  for (const std::string& key : order) {
    const auto& [pollard, qs] = by_n.at(key);
    const std::size_t pairs = std::min(pollard.size(), qs.size());
    out.unmatched += pollard.size() + qs.size() - 2 * pairs;
    for (std::size_t k = 0; k < pairs; ++k) {
      const FactorOutcome& po = records[pollard[k]].outcome;
      const FactorOutcome& qo = records[qs[k]].outcome;
      HeadToHeadRow row;
      row.semiprime = records[pollard[k]].semiprime;
      row.pollard_status = po.status;
      row.pollard_seconds = po.elapsed_seconds;
      row.qs_status = qo.status;
      row.qs_seconds = qo.elapsed_seconds;
      row.qs_faster = qs_wins(po.status, po.elapsed_seconds, qo.status, qo.elapsed_seconds);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complexity models
// ---------------------------------------------------------------------------

struct ComplexityRow {
  unsigned n_bits = 0;
  double pollard_model = 0.0;  // N^(1/4)
  double qs_model = 0.0;       // exp(sqrt(1.125 ln N ln ln N))
  double ratio = 0.0;          // pollard / qs
};

inline ComplexityRow complexity_model(unsigned n_bits) {
  if (n_bits < 8) {
    throw std::domain_error("complexity_model: n_bits must be >= 8");
  }
  const double ln_n = static_cast<double>(n_bits) * std::log(2.0);
  ComplexityRow row;
  row.n_bits = n_bits;
  row.pollard_model = std::exp2(static_cast<double>(n_bits) / 4.0);
  row.qs_model = std::exp(std::sqrt(1.125 * ln_n * std::log(ln_n)));
  row.ratio = row.pollard_model / row.qs_model;
  return row;
}

inline std::vector<ComplexityRow> complexity_models(std::span<const unsigned> n_bits) {
  std::vector<ComplexityRow> out;
  for (unsigned b : n_bits) {
    out.push_back(complexity_model(b));
  }
  return out;
}

inline std::vector<ComplexityRow> complexity_models(unsigned from_bits, unsigned to_bits, unsigned step) {
  if (step == 0) {
    throw std::domain_error("complexity_models: step must be >= 1");
  }
  std::vector<unsigned> bits;
  for (unsigned b = from_bits; b <= to_bits; b += step) {
    bits.push_back(b);
  }
  return complexity_models(bits);
}

/// Median elapsed seconds of successful attempts per product size.
inline std::map<unsigned, double> measured_medians(std::span<const BenchRecord> records, Algorithm algo) {
  std::map<unsigned, std::vector<double>> samples;
  for (const BenchRecord& r : records) {
    if (r.outcome.algorithm == algo && r.outcome.status == Status::success) {
      samples[r.semiprime.n_bits].push_back(r.outcome.elapsed_seconds);
    }
  }
  std::map<unsigned, double> out;
  for (auto& [bits, v] : samples) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    out[bits] = v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

enum class Table : unsigned {
  failure_counts = 1U << 0,
  success_by_bitdiff = 1U << 1,
  avg_runtime = 1U << 2,
  head_to_head = 1U << 3,
  complexity = 1U << 4,
};

struct TableSelection {
  unsigned mask = 0x1F;

  static TableSelection all() { return {}; }
  static TableSelection none() { return {0}; }
  [[nodiscard]] bool has(Table t) const { return (mask & static_cast<unsigned>(t)) != 0; }
  void add(Table t) { mask |= static_cast<unsigned>(t); }
};

inline constexpr std::pair<std::string_view, Table> kTableNames[] = {
    {"failure-counts", Table::failure_counts},
    {"success-by-bitdiff", Table::success_by_bitdiff},
    {"avg-runtime", Table::avg_runtime},
    {"head-to-head", Table::head_to_head},
    {"complexity", Table::complexity},
};

inline Table parse_table_name(std::string_view name) {
  for (const auto& [key, table] : kTableNames) {
    if (key == name) return table;
  }
  std::string valid;
  for (const auto& [key, table] : kTableNames) {
    valid += valid.empty() ? "" : ", ";
    valid += key;
  }
  throw std::invalid_argument("unknown table '" + std::string(name) + "' (valid: " + valid + ")");
}

struct AlgorithmStats {
  Algorithm algorithm = Algorithm::pollard;
  std::vector<GroupStat> failure_counts;
  std::vector<GroupStat> by_bitdiff;
  std::map<unsigned, double> medians;
};

/// Everything render_report needs; computed once from the records.
struct ReportStats {
  std::vector<AlgorithmStats> algorithms;  // pollard before qs, only those present
  HeadToHead head_to_head;
  std::vector<ComplexityRow> complexity;
};

inline ReportStats compute_report_stats(std::span<const BenchRecord> records) {
  ReportStats stats;
  std::set<unsigned> bits;
  for (unsigned b = 40; b <= 120; b += 10) bits.insert(b);
  for (Algorithm algo : {Algorithm::pollard, Algorithm::qs}) {
    const bool present =
        std::any_of(records.begin(), records.end(), [&](const BenchRecord& r) { return r.outcome.algorithm == algo; });
    if (!present) continue;
    AlgorithmStats a;
    a.algorithm = algo;
    a.failure_counts = failure_counts(records, algo);
    a.by_bitdiff = success_rate_by_bitdiff(records, algo);
    a.medians = measured_medians(records, algo);
    for (const auto& [b, median] : a.medians) {
      if (b >= 8) bits.insert(b);
    }
    stats.algorithms.push_back(std::move(a));
  }
  stats.head_to_head = head_to_head(records);
  stats.complexity = complexity_models(std::vector<unsigned>(bits.begin(), bits.end()));
  return stats;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string opt_bits(const std::optional<unsigned>& v) { return v ? std::to_string(*v) : "mixed"; }

inline void no_data_row(std::ostringstream& out, std::size_t columns) {
  out << "| no data |";
  for (std::size_t i = 1; i < columns; ++i) out << " |";
  out << '\n';
}

inline void render_failure_counts(std::ostringstream& out, const ReportStats& stats) {
  out << "## Failure counts\n\n";
  if (stats.algorithms.empty()) {
    out << "| n bits | p bits | q bits | total | failures |\n|---:|---:|---:|---:|---:|\n";
    no_data_row(out, 5);
    out << '\n';
    return;
  }
  for (const AlgorithmStats& a : stats.algorithms) {
    out << "### " << to_string(a.algorithm) << "\n\n";
    out << "| n bits | p bits | q bits | total | failures |\n|---:|---:|---:|---:|---:|\n";
    for (const GroupStat& g : a.failure_counts) {
      out << "| " << g.n_bits << " | " << opt_bits(g.p_bits) << " | " << opt_bits(g.q_bits) << " | " << g.total
          << " | " << g.failures << " |\n";
    }
    if (a.failure_counts.empty()) no_data_row(out, 5);
    out << '\n';
  }
}

inline void render_success(std::ostringstream& out, const ReportStats& stats) {
  out << "## Success rate by bit difference\n\n";
  const char* header =
      "| n bits | bit difference | p bits | q bits | total | successes | success fraction |\n"
      "|---:|---:|---:|---:|---:|---:|---:|\n";
  if (stats.algorithms.empty()) {
    out << header;
    no_data_row(out, 7);
    out << '\n';
    return;
  }
  for (const AlgorithmStats& a : stats.algorithms) {
    out << "### " << to_string(a.algorithm) << "\n\n" << header;
    for (const GroupStat& g : a.by_bitdiff) {
      out << "| " << g.n_bits << " | " << g.bit_difference << " | " << opt_bits(g.p_bits) << " | "
          << opt_bits(g.q_bits) << " | " << g.total << " | " << g.successes << " | " << fixed(g.success_fraction, 4)
          << " |\n";
    }
    if (a.by_bitdiff.empty()) no_data_row(out, 7);
    out << '\n';
  }
}

inline void render_runtime(std::ostringstream& out, const ReportStats& stats) {
  out << "## Average runtime by bit difference\n\n";
  const char* header =
      "| n bits | bit difference | successes | mean seconds (successes only) |\n"
      "|---:|---:|---:|---:|\n";
  if (stats.algorithms.empty()) {
    out << header;
    no_data_row(out, 4);
    out << '\n';
    return;
  }
  for (const AlgorithmStats& a : stats.algorithms) {
    out << "### " << to_string(a.algorithm) << "\n\n" << header;
    for (const GroupStat& g : a.by_bitdiff) {
      out << "| " << g.n_bits << " | " << g.bit_difference << " | " << g.successes << " | "
          << (g.mean_elapsed_success ? fixed(*g.mean_elapsed_success, 7) : std::string("-")) << " |\n";
    }
    if (a.by_bitdiff.empty()) no_data_row(out, 4);
    out << '\n';
  }
}

inline void render_head_to_head(std::ostringstream& out, const ReportStats& stats) {
  const HeadToHead& h = stats.head_to_head;
  out << "## Head to head: products where QS beat pollard\n\n";
  out << "Pairs compared: " << h.rows.size() << ". QS faster: " << h.qs_faster_count()
      << ". Unmatched records: " << h.unmatched << ".\n\n";
  out << "| n | p | q | p bits | q bits | pollard status | pollard seconds | qs status | qs seconds |\n"
         "|---:|---:|---:|---:|---:|---|---:|---|---:|\n";
  std::size_t shown = 0;
  for (const HeadToHeadRow& r : h.rows) {
    if (!r.qs_faster) continue;
    ++shown;
    out << "| " << to_string(r.semiprime.n) << " | " << to_string(r.semiprime.p) << " | " << to_string(r.semiprime.q)
        << " | " << r.semiprime.p_bits << " | " << r.semiprime.q_bits << " | " << to_string(r.pollard_status) << " | "
        << format_seconds(r.pollard_seconds) << " | " << to_string(r.qs_status) << " | "
        << format_seconds(r.qs_seconds) << " |\n";
  }
  if (shown == 0) no_data_row(out, 9);
  out << '\n';
}

inline void render_complexity(std::ostringstream& out, const ReportStats& stats) {
  const AlgorithmStats* pollard = nullptr;
  const AlgorithmStats* qs = nullptr;
  for (const AlgorithmStats& a : stats.algorithms) {
    (a.algorithm == Algorithm::pollard ? pollard : qs) = &a;
  }
  auto median = [](const AlgorithmStats* a, unsigned bits) {
    if (a == nullptr) return std::string("-");
    const auto it = a->medians.find(bits);
    return it == a->medians.end() ? std::string("-") : format_seconds(it->second);
  };
  out << "## Complexity models\n\n";
  out << "Predicted relative cost: pollard N^(1/4), QS exp(sqrt(1.125 ln N ln ln N)) with N = 2^bits. "
         "Measured columns are median seconds of successful attempts.\n\n";
  out << "| n bits | pollard model | qs model | pollard/qs | pollard median s | qs median s |\n"
         "|---:|---:|---:|---:|---:|---:|\n";
  for (const ComplexityRow& row : stats.complexity) {
    out << "| " << row.n_bits << " | " << sci(row.pollard_model) << " | " << sci(row.qs_model) << " | "
        << sci(row.ratio) << " | " << median(pollard, row.n_bits) << " | " << median(qs, row.n_bits) << " |\n";
  }
  if (stats.complexity.empty()) no_data_row(out, 6);
  out << '\n';
}

}  // namespace detail

/// Markdown document; a pure function of its inputs.
inline std::string render_report(const ReportStats& stats, TableSelection selection = TableSelection::all()) {
  std::ostringstream out;
  out << "# Factoring benchmark report\n\n";
  if (selection.has(Table::failure_counts)) detail::render_failure_counts(out, stats);
  if (selection.has(Table::success_by_bitdiff)) detail::render_success(out, stats);
  if (selection.has(Table::avg_runtime)) detail::render_runtime(out, stats);
  if (selection.has(Table::head_to_head)) detail::render_head_to_head(out, stats);
  if (selection.has(Table::complexity)) detail::render_complexity(out, stats);
  return out.str();
}

inline void write_points_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "n_bits,algorithm,elapsed_seconds,status\n";
  for (const BenchRecord& r : records) {
    out << r.semiprime.n_bits << ',' << to_string(r.outcome.algorithm) << ','
        << format_seconds(r.outcome.elapsed_seconds) << ',' << to_string(r.outcome.status) << '\n';
  }
}

}  // namespace factorbench
