#pragma once

// Dataset spec JSON, dataset CSV and results CSV.
//
// All numbers are base 10. CSV fields never need quoting (integers, enum
// names and fixed-point seconds); missing optional values are empty fields.

#include <cstdio>
#include <istream>
#include <locale>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "factorbench/bench.hpp"
#include "factorbench/primegen.hpp"

namespace factorbench {

inline constexpr std::string_view kDatasetHeader = "n,p,q,p_bits,q_bits,n_bits";
inline constexpr std::string_view kResultsHeader =
    "n,p,q,p_bits,q_bits,n_bits,algorithm,status,factor,elapsed_seconds,b_param,m_param,iterations,seed";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed seven fractional digits, independent of locale.
inline std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7f", seconds);
  return buf;
}

// Dataset spec

namespace detail {

inline unsigned json_count(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(where + ": missing key '" + key + "'");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw FormatError(where + ": '" + key + "' must be a non-negative integer");
  }
  return v.get<unsigned>();
}

}  // namespace detail

inline DatasetSpec parse_dataset_spec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("dataset spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw FormatError("dataset spec: top level must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "seed" && key != "groups" && key != "random_groups") {
      throw FormatError("dataset spec: unknown key '" + key + "'");
    }
  }
  DatasetSpec spec;
  if (!doc.contains("seed") || !doc["seed"].is_number_integer()) {
    throw FormatError("dataset spec: 'seed' must be an integer");
  }
  spec.seed = doc["seed"].is_number_unsigned() ? doc["seed"].get<std::uint64_t>()
                                               : static_cast<std::uint64_t>(doc["seed"].get<std::int64_t>());
  if (doc.contains("groups")) {
    if (!doc["groups"].is_array()) {
      throw FormatError("dataset spec: 'groups' must be an array");
    }
    for (std::size_t i = 0; i < doc["groups"].size(); ++i) {
      const auto& g = doc["groups"][i];
      const std::string where = "dataset spec: groups[" + std::to_string(i) + "]";
      spec.groups.push_back({detail::json_count(g, "count", where), detail::json_count(g, "p_bits", where),
                             detail::json_count(g, "q_bits", where), detail::json_count(g, "n_bits", where)});
    }
  }
  if (doc.contains("random_groups")) {
    if (!doc["random_groups"].is_array()) {
      throw FormatError("dataset spec: 'random_groups' must be an array");
    }
    for (std::size_t i = 0; i < doc["random_groups"].size(); ++i) {
      const auto& g = doc["random_groups"][i];
      const std::string where = "dataset spec: random_groups[" + std::to_string(i) + "]";
      spec.random_groups.push_back(
          {detail::json_count(g, "count", where), detail::json_count(g, "max_product_bits", where)});
    }
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return spec;
}

inline std::string dataset_spec_json(const DatasetSpec& spec) {
  nlohmann::json doc;
  doc["seed"] = spec.seed;
  doc["groups"] = nlohmann::json::array();
  for (const FixedGroup& g : spec.groups) {
    doc["groups"].push_back({{"count", g.count}, {"p_bits", g.p_bits}, {"q_bits", g.q_bits}, {"n_bits", g.n_bits}});
  }
  doc["random_groups"] = nlohmann::json::array();
  for (const RandomGroup& g : spec.random_groups) {
    doc["random_groups"].push_back({{"count", g.count}, {"max_product_bits", g.max_product_bits}});
  }
  return doc.dump(2) + "\n";
}

// CSV

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) {
      return fields;
    }
    start = comma + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  return line;
}

inline unsigned long long parse_u64_field(const std::string& s, const char* name, std::size_t line_no) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("line " + std::to_string(line_no) + ": field '" + name + "' is not an integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw FormatError("line " + std::to_string(line_no) + ": field '" + name + "' out of range");
  }
}

inline Natural parse_natural_field(const std::string& s, const char* name, std::size_t line_no) {
  try {
    return parse_natural(s);
  } catch (const std::invalid_argument&) {
    throw FormatError("line " + std::to_string(line_no) + ": field '" + name + "' is not an integer: '" + s + "'");
  }
}

inline double parse_seconds_field(const std::string& s, std::size_t line_no) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0;
  if (s.empty() || !(in >> v) || !in.eof() || v < 0) {
    throw FormatError("line " + std::to_string(line_no) + ": bad elapsed_seconds '" + s + "'");
  }
  return v;
}

// Consumes the header line and checks it.
inline void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("missing CSV header (expected '" + std::string(header) + "')");
  }
  if (strip_cr(line) != header) {
    throw FormatError("unexpected CSV header '" + std::string(strip_cr(line)) + "' (expected '" +
                      std::string(header) + "')");
  }
}

inline Semiprime semiprime_from_fields(const std::vector<std::string>& f, std::size_t line_no) {
  Semiprime s;
  s.n = parse_natural_field(f[0], "n", line_no);
  s.p = parse_natural_field(f[1], "p", line_no);
  s.q = parse_natural_field(f[2], "q", line_no);
  s.p_bits = static_cast<unsigned>(parse_u64_field(f[3], "p_bits", line_no));
  s.q_bits = static_cast<unsigned>(parse_u64_field(f[4], "q_bits", line_no));
  s.n_bits = static_cast<unsigned>(parse_u64_field(f[5], "n_bits", line_no));
  if (s.p * s.q != s.n) {
    throw FormatError("line " + std::to_string(line_no) + ": p * q != n");
  }
  return s;
}

inline void write_semiprime_fields(std::ostream& out, const Semiprime& s) {
  out << to_string(s.n) << ',' << to_string(s.p) << ',' << to_string(s.q) << ',' << s.p_bits << ',' << s.q_bits
      << ',' << s.n_bits;
}

}  // namespace detail

inline void write_dataset_csv(std::ostream& out, std::span<const Semiprime> rows) {
  out << kDatasetHeader << '\n';
  for (const Semiprime& s : rows) {
    detail::write_semiprime_fields(out, s);
    out << '\n';
  }
}

inline std::vector<Semiprime> read_dataset_csv(std::istream& in) {
  detail::expect_header(in, kDatasetHeader);
  std::vector<Semiprime> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::strip_cr(line);
    if (view.empty()) {
      continue;
    }
    const auto f = detail::split_csv(view);
    if (f.size() != 6) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 6 fields, got " + std::to_string(f.size()));
    }
    rows.push_back(detail::semiprime_from_fields(f, line_no));
  }
  return rows;
}

inline void write_results_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kResultsHeader << '\n';
  for (const BenchRecord& r : records) {
    const FactorOutcome& o = r.outcome;
    detail::write_semiprime_fields(out, r.semiprime);
    out << ',' << to_string(o.algorithm) << ',' << to_string(o.status) << ',';
    if (o.factor) out << to_string(*o.factor);
    out << ',' << format_seconds(o.elapsed_seconds) << ',';
    if (o.b_param) out << *o.b_param;
    out << ',';
    if (o.m_param) out << *o.m_param;
    out << ',' << o.iterations << ',' << o.seed << '\n';
  }
}

inline std::vector<BenchRecord> read_results_csv(std::istream& in) {
  detail::expect_header(in, kResultsHeader);
  std::vector<BenchRecord> records;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::strip_cr(line);
    if (view.empty()) {
      continue;
    }
    const auto f = detail::split_csv(view);
    if (f.size() != 14) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 14 fields, got " + std::to_string(f.size()));
    }
    BenchRecord r;
    r.semiprime = detail::semiprime_from_fields(f, line_no);
    FactorOutcome& o = r.outcome;
    try {
      o.algorithm = parse_algorithm(f[6]);
      o.status = parse_status(f[7]);
    } catch (const std::invalid_argument& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    o.n = r.semiprime.n;
    if (!f[8].empty()) o.factor = detail::parse_natural_field(f[8], "factor", line_no);
    o.elapsed_seconds = detail::parse_seconds_field(f[9], line_no);
    if (!f[10].empty()) o.b_param = detail::parse_u64_field(f[10], "b_param", line_no);
    if (!f[11].empty()) o.m_param = detail::parse_u64_field(f[11], "m_param", line_no);
    o.iterations = detail::parse_u64_field(f[12], "iterations", line_no);
    o.seed = detail::parse_u64_field(f[13], "seed", line_no);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace factorbench
