#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "factorbench/report.hpp"
#include "oracles.hpp"

namespace fb = factorbench;
using fb::Natural;

namespace {

fb::BenchRecord record(const fb::Semiprime& s, fb::Algorithm algo, fb::Status status, double secs) {
  fb::BenchRecord r;
  r.semiprime = s;
  r.outcome.algorithm = algo;
  r.outcome.n = s.n;
  r.outcome.status = status;
  if (status == fb::Status::success) r.outcome.factor = s.p;
  r.outcome.elapsed_seconds = secs;
  return r;
}

fb::Semiprime semiprime(std::uint64_t p, std::uint64_t q) {
  fb::Semiprime s;
  s.p = p;
  s.q = q;
  s.n = s.p * s.q;
  s.p_bits = fb::bit_length(s.p);
  s.q_bits = fb::bit_length(s.q);
  s.n_bits = fb::bit_length(s.n);
  return s;
}

// The 15-group size grid with synthetic statuses and times; no factoring involved.
std::vector<fb::BenchRecord> grid_fixture(unsigned per_group, std::uint64_t seed) {
  fb::DatasetSpec spec;
  spec.groups = fb::grid_groups(per_group);
  spec.seed = seed;
  fb::Rng rng(seed);
  std::vector<fb::BenchRecord> out;
  for (const auto& s : fb::generate_dataset(spec)) {
    for (auto algo : {fb::Algorithm::pollard, fb::Algorithm::qs}) {
      const auto status = static_cast<fb::Status>(rng() % 4 == 0 ? 1 : 0);
      out.push_back(record(s, algo, status, static_cast<double>(rng() % 1'000'000) / 1e6));
    }
  }
  return out;
}

std::size_t count_table_rows(const std::string& section) {
  std::size_t rows = 0;
  std::istringstream in(section);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("| ", 0) == 0 && line.rfind("| n bits", 0) != 0) ++rows;
  }
  return rows;
}

}  // namespace

TEST(FailureCounts, SyntheticGroup) {
  const auto s = semiprime(1021, 1073741827);  // 10 and 31 bits
  std::vector<fb::BenchRecord> records;
  for (int i = 0; i < 3; ++i) records.push_back(record(s, fb::Algorithm::qs, fb::Status::timeout, 180));
  records.push_back(record(s, fb::Algorithm::qs, fb::Status::success, 0.5));
  records.push_back(record(s, fb::Algorithm::pollard, fb::Status::success, 0.1));
  const auto groups = fb::failure_counts(records, fb::Algorithm::qs);
  ASSERT_EQ(groups.size(), 1U);
  EXPECT_EQ(groups[0].failures, 3U);
  EXPECT_EQ(groups[0].successes, 1U);
  EXPECT_EQ(groups[0].total, 4U);
  EXPECT_EQ(groups[0].p_bits, 10U);
  EXPECT_EQ(groups[0].q_bits, 31U);
  EXPECT_EQ(fb::failure_counts(records, fb::Algorithm::pollard)[0].failures, 0U);
}

TEST(FailureCounts, FiftyBitGridShape) {
  const auto all = grid_fixture(3, 1);
  std::vector<fb::BenchRecord> fifty;
  for (const auto& r : all) {
    if (r.semiprime.n_bits == 50) fifty.push_back(r);
  }
  const auto groups = fb::failure_counts(fifty, fb::Algorithm::qs);
  ASSERT_EQ(groups.size(), 5U);
  const unsigned expected[][2] = {{5, 45}, {10, 40}, {15, 35}, {20, 30}, {25, 25}};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(groups[i].p_bits, expected[i][0]);
    EXPECT_EQ(groups[i].q_bits, expected[i][1]);
  }
}

TEST(GroupStats, MatchARecount) {
  const auto records = grid_fixture(7, 2);
  for (auto algo : {fb::Algorithm::pollard, fb::Algorithm::qs}) {
    // Independent recount keyed by (n_bits, bit difference).
    std::map<std::pair<unsigned, unsigned>, std::tuple<std::size_t, std::size_t, double>> recount;
    for (const auto& r : records) {
      if (r.outcome.algorithm != algo) continue;
      const unsigned diff = r.semiprime.q_bits > r.semiprime.p_bits ? r.semiprime.q_bits - r.semiprime.p_bits
                                                                     : r.semiprime.p_bits - r.semiprime.q_bits;
      auto& [total, ok, sum] = recount[{r.semiprime.n_bits, diff}];
      ++total;
      if (r.outcome.status == fb::Status::success) {
        ++ok;
        sum += r.outcome.elapsed_seconds;
      }
    }
    const auto stats = fb::success_rate_by_bitdiff(records, algo);
    ASSERT_EQ(stats.size(), recount.size());
    for (const auto& g : stats) {
      const auto& [total, ok, sum] = recount.at({g.n_bits, g.bit_difference});
      EXPECT_EQ(g.total, total);
      EXPECT_EQ(g.successes, ok);
      EXPECT_EQ(g.successes + g.failures, g.total);
      EXPECT_DOUBLE_EQ(g.success_fraction, static_cast<double>(ok) / static_cast<double>(total));
      EXPECT_GE(g.success_fraction, 0.0);
      EXPECT_LE(g.success_fraction, 1.0);
      if (ok > 0) {
        ASSERT_TRUE(g.mean_elapsed_success);
        EXPECT_NEAR(*g.mean_elapsed_success, sum / static_cast<double>(ok), 1e-12);
      } else {
        EXPECT_FALSE(g.mean_elapsed_success);
      }
    }
  }
}

TEST(SuccessRate, FractionsAndOrdering) {
  const auto even = semiprime(1048583, 1048589);         // 21/21
  const auto uneven = semiprime(17, 2199023255579ULL);
  std::vector<fb::BenchRecord> records{
      record(even, fb::Algorithm::qs, fb::Status::success, 0.1),
      record(even, fb::Algorithm::qs, fb::Status::success, 0.3),
  };
  for (int i = 0; i < 4; ++i) records.push_back(record(uneven, fb::Algorithm::qs, fb::Status::timeout, 180));
  const auto stats = fb::success_rate_by_bitdiff(records, fb::Algorithm::qs);
  ASSERT_EQ(stats.size(), 2U);
  // Different sizes, so the smaller product comes first.
  ASSERT_LT(even.n_bits, uneven.n_bits);
  EXPECT_EQ(stats[0].bit_difference, 0U);
  EXPECT_DOUBLE_EQ(stats[0].success_fraction, 1.0);
  EXPECT_EQ(stats[1].bit_difference, uneven.q_bits - uneven.p_bits);
  EXPECT_DOUBLE_EQ(stats[1].success_fraction, 0.0);

  const std::string md = fb::render_report(fb::compute_report_stats(records), [] {
    auto sel = fb::TableSelection::none();
    sel.add(fb::Table::success_by_bitdiff);
    return sel;
  }());
  EXPECT_NE(md.find("| 1.0000 |"), std::string::npos);
  EXPECT_NE(md.find("| 0.0000 |"), std::string::npos);
}

TEST(SuccessRate, SixtyBitDifferencesDescend) {
  const auto records = grid_fixture(2, 3);
  std::vector<unsigned> diffs;
  for (const auto& g : fb::success_rate_by_bitdiff(records, fb::Algorithm::qs)) {
    if (g.n_bits == 60) diffs.push_back(g.bit_difference);
  }
  EXPECT_EQ(diffs, (std::vector<unsigned>{50, 40, 30, 20, 10, 0}));
}

TEST(AvgRuntime, MeanOverSuccessesOnly) {
  const auto s = semiprime(1048583, 1048589);
  const auto t = semiprime(17, 2199023255579ULL);
  const std::vector<fb::BenchRecord> records{
      record(s, fb::Algorithm::qs, fb::Status::success, 0.1),
      record(s, fb::Algorithm::qs, fb::Status::success, 0.3),
      record(s, fb::Algorithm::qs, fb::Status::timeout, 180),
      record(t, fb::Algorithm::qs, fb::Status::timeout, 180),
  };
  const auto stats = fb::avg_runtime_by_bitdiff(records, fb::Algorithm::qs);
  ASSERT_EQ(stats.size(), 2U);
  ASSERT_TRUE(stats[0].mean_elapsed_success);
  EXPECT_NEAR(*stats[0].mean_elapsed_success, 0.2, 1e-12);
  EXPECT_FALSE(stats[1].mean_elapsed_success);
}

TEST(HeadToHead, PublishedRowIsFlagged) {
  const auto s = semiprime(17410997, 19124933);
  ASSERT_EQ(s.p_bits, 25U);
  ASSERT_EQ(s.q_bits, 25U);
  const std::vector<fb::BenchRecord> records{
      record(s, fb::Algorithm::pollard, fb::Status::success, 0.0147488),
      record(s, fb::Algorithm::qs, fb::Status::success, 0.0138339996),
  };
  const auto h = fb::head_to_head(records);
  ASSERT_EQ(h.rows.size(), 1U);
  EXPECT_TRUE(h.rows[0].qs_faster);
  EXPECT_EQ(h.qs_faster_count(), 1U);
  EXPECT_EQ(h.unmatched, 0U);
}

TEST(HeadToHead, Rules) {
  EXPECT_FALSE(fb::qs_wins(fb::Status::success, 0.5, fb::Status::success, 0.5));
  EXPECT_TRUE(fb::qs_wins(fb::Status::timeout, 180, fb::Status::success, 3));
  EXPECT_FALSE(fb::qs_wins(fb::Status::success, 0.5, fb::Status::timeout, 0.1));
  EXPECT_FALSE(fb::qs_wins(fb::Status::timeout, 180, fb::Status::timeout, 180));
  EXPECT_FALSE(fb::qs_wins(fb::Status::success, 0.1, fb::Status::success, 0.2));
}

TEST(HeadToHead, UnmatchedAreCountedNotPaired) {
  const auto a = semiprime(1021, 1031);
  const auto b = semiprime(1033, 1039);
  const std::vector<fb::BenchRecord> records{
      record(a, fb::Algorithm::pollard, fb::Status::success, 0.2),
      record(b, fb::Algorithm::qs, fb::Status::success, 0.1),
      record(a, fb::Algorithm::qs, fb::Status::success, 0.1),
      record(a, fb::Algorithm::qs, fb::Status::success, 0.1),
  };
  const auto h = fb::head_to_head(records);
  ASSERT_EQ(h.rows.size(), 1U);
  EXPECT_EQ(h.rows[0].semiprime.n, a.n);
  EXPECT_EQ(h.unmatched, 2U);
}

TEST(Complexity, FortyBitPollardModel) {
  const auto row = fb::complexity_model(40);
  EXPECT_DOUBLE_EQ(row.pollard_model, 1024.0);
  EXPECT_DOUBLE_EQ(row.ratio, row.pollard_model / row.qs_model);
  EXPECT_THROW(fb::complexity_model(7), std::domain_error);
}

TEST(Complexity, MatchesHighPrecisionEvaluation) {
  for (unsigned bits = 8; bits <= 200; ++bits) {
    const auto row = fb::complexity_model(bits);
    const double qs = static_cast<double>(oracle::qs_cost(bits));
    const double pollard = static_cast<double>(oracle::pollard_cost(bits));
    EXPECT_LE(std::fabs(row.qs_model - qs) / qs, 1e-9) << bits;
    EXPECT_LE(std::fabs(row.pollard_model - pollard) / pollard, 1e-9) << bits;
  }
  const double qs64 = static_cast<double>(oracle::qs_cost(64));
  EXPECT_LE(std::fabs(fb::complexity_model(64).qs_model - qs64) / qs64, 1e-9);
}

TEST(Complexity, RatioIncreasesOverFortyToOneTwenty) {
  const auto rows = fb::complexity_models(40, 120, 1);
  ASSERT_EQ(rows.size(), 81U);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].ratio, rows[i - 1].ratio) << rows[i].n_bits;
  }
  EXPECT_THROW(fb::complexity_models(40, 120, 0), std::domain_error);
}

TEST(Render, EmptyStatsSayNoData) {
  const std::string md = fb::render_report(fb::compute_report_stats({}));
  for (const char* heading : {"## Failure counts", "## Success rate by bit difference",
                              "## Average runtime by bit difference", "## Head to head", "## Complexity models"}) {
    EXPECT_NE(md.find(heading), std::string::npos) << heading;
  }
  EXPECT_NE(md.find("| no data |"), std::string::npos);
}

TEST(Render, DeterministicAndComplete) {
  const auto records = grid_fixture(4, 5);
  const std::string a = fb::render_report(fb::compute_report_stats(records));
  const std::string b = fb::render_report(fb::compute_report_stats(records));
  EXPECT_EQ(a, b);
  std::size_t sections = 0;
  for (std::size_t pos = a.find("\n## "); pos != std::string::npos; pos = a.find("\n## ", pos + 1)) ++sections;
  EXPECT_EQ(sections, 5U);
}

TEST(Render, RuntimeTableOnTheGridHasFifteenRows) {
  std::vector<fb::BenchRecord> qs_only;
  for (const auto& r : grid_fixture(3, 6)) {
    if (r.outcome.algorithm == fb::Algorithm::qs) qs_only.push_back(r);
  }
  auto sel = fb::TableSelection::none();
  sel.add(fb::Table::avg_runtime);
  const std::string md = fb::render_report(fb::compute_report_stats(qs_only), sel);
  EXPECT_EQ(md.find("## Failure counts"), std::string::npos);
  EXPECT_EQ(count_table_rows(md), 15U);
}

TEST(Render, TableNames) {
  EXPECT_EQ(fb::parse_table_name("avg-runtime"), fb::Table::avg_runtime);
  EXPECT_EQ(fb::parse_table_name("complexity"), fb::Table::complexity);
  try {
    fb::parse_table_name("scatter");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("failure-counts"), std::string::npos);
  }
}

TEST(PointsCsv, OneLinePerRecord) {
  const auto records = grid_fixture(1, 7);
  std::ostringstream out;
  fb::write_points_csv(out, records);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("n_bits,algorithm,elapsed_seconds,status\n", 0), 0U);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), records.size() + 1);
}
