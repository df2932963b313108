#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "factorbench/io.hpp"

namespace fb = factorbench;
using fb::Natural;

namespace {

fb::BenchRecord make_record(std::uint64_t p, std::uint64_t q, fb::Algorithm algo, fb::Status status, double secs) {
  fb::BenchRecord r;
  r.semiprime.p = p;
  r.semiprime.q = q;
  r.semiprime.n = r.semiprime.p * r.semiprime.q;
  r.semiprime.p_bits = fb::bit_length(r.semiprime.p);
  r.semiprime.q_bits = fb::bit_length(r.semiprime.q);
  r.semiprime.n_bits = fb::bit_length(r.semiprime.n);
  r.outcome.algorithm = algo;
  r.outcome.n = r.semiprime.n;
  r.outcome.status = status;
  if (status == fb::Status::success) r.outcome.factor = r.semiprime.p;
  r.outcome.elapsed_seconds = secs;
  r.outcome.iterations = 17;
  r.outcome.seed = 99;
  return r;
}

}  // namespace

TEST(DatasetSpecJson, Parses) {
  const auto spec = fb::parse_dataset_spec(R"({
    "seed": 5,
    "groups": [{"count": 2, "p_bits": 5, "q_bits": 35, "n_bits": 40}],
    "random_groups": [{"count": 3, "max_product_bits": 70}]
  })");
  EXPECT_EQ(spec.seed, 5U);
  ASSERT_EQ(spec.groups.size(), 1U);
  EXPECT_EQ(spec.groups[0].count, 2U);
  EXPECT_EQ(spec.groups[0].p_bits, 5U);
  EXPECT_EQ(spec.groups[0].q_bits, 35U);
  EXPECT_EQ(spec.groups[0].n_bits, 40U);
  ASSERT_EQ(spec.random_groups.size(), 1U);
  EXPECT_EQ(spec.random_groups[0].max_product_bits, 70U);
}

TEST(DatasetSpecJson, RoundTrips) {
  fb::DatasetSpec spec;
  spec.groups = fb::grid_groups(10);
  spec.random_groups = {{4, 60}};
  spec.seed = 1234567890123ULL;
  const auto back = fb::parse_dataset_spec(fb::dataset_spec_json(spec));
  EXPECT_EQ(back.seed, spec.seed);
  ASSERT_EQ(back.groups.size(), spec.groups.size());
  for (std::size_t i = 0; i < spec.groups.size(); ++i) {
    EXPECT_EQ(back.groups[i].p_bits, spec.groups[i].p_bits);
    EXPECT_EQ(back.groups[i].q_bits, spec.groups[i].q_bits);
    EXPECT_EQ(back.groups[i].n_bits, spec.groups[i].n_bits);
    EXPECT_EQ(back.groups[i].count, spec.groups[i].count);
  }
  EXPECT_EQ(back.random_groups[0].count, 4U);
}

TEST(DatasetSpecJson, Rejects) {
  for (const char* bad : {
           "not json",
           "[]",
           R"({"groups": []})",
           R"({"seed": "1"})",
           R"({"seed": 1, "extra": 0})",
           R"({"seed": 1, "groups": {}})",
           R"({"seed": 1, "groups": [{"count": 1, "p_bits": 5, "q_bits": 30}]})",
           R"({"seed": 1, "groups": [{"count": -1, "p_bits": 5, "q_bits": 35, "n_bits": 40}]})",
           R"({"seed": 1, "groups": [{"count": 1, "p_bits": 5, "q_bits": 30, "n_bits": 40}]})",
       }) {
    EXPECT_THROW(fb::parse_dataset_spec(bad), fb::FormatError) << bad;
  }
}

TEST(DatasetCsv, RoundTrip) {
  fb::DatasetSpec spec;
  spec.groups = fb::grid_groups(2);
  spec.seed = 3;
  const auto rows = fb::generate_dataset(spec);
  std::stringstream buf;
  fb::write_dataset_csv(buf, rows);
  EXPECT_EQ(buf.str().substr(0, fb::kDatasetHeader.size()), fb::kDatasetHeader);
  EXPECT_EQ(fb::read_dataset_csv(buf), rows);
}

TEST(DatasetCsv, AcceptsCrlfAndBlankLines) {
  std::stringstream in("n,p,q,p_bits,q_bits,n_bits\r\n21,3,7,2,3,5\r\n\r\n");
  const auto rows = fb::read_dataset_csv(in);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_EQ(rows[0].n, 21);
}

TEST(DatasetCsv, Rejects) {
  for (const char* bad : {
           "",
           "n,p,q\n",
           "n,p,q,p_bits,q_bits,n_bits\n21,3,7,2,3\n",
           "n,p,q,p_bits,q_bits,n_bits\n21,3,x,2,3,5\n",
           "n,p,q,p_bits,q_bits,n_bits\n22,3,7,2,3,5\n",
           "n,p,q,p_bits,q_bits,n_bits\n21,3,7,-2,3,5\n",
       }) {
    std::stringstream in(bad);
    EXPECT_THROW(fb::read_dataset_csv(in), fb::FormatError) << bad;
  }
}

TEST(ResultsCsv, RoundTripKeepsAbsentFields) {
  std::vector<fb::BenchRecord> records{
      make_record(17410997, 19124933, fb::Algorithm::pollard, fb::Status::success, 0.0147488),
      make_record(17410997, 19124933, fb::Algorithm::qs, fb::Status::timeout, 180.0000312),
      make_record(613, 653, fb::Algorithm::qs, fb::Status::error, 0.0000472),
  };
  records[1].outcome.b_param = 410;
  records[1].outcome.m_param = 4100;
  std::stringstream buf;
  fb::write_results_csv(buf, records);

  const std::string text = buf.str();
  EXPECT_NE(text.find(",pollard,success,17410997,0.0147488,,,17,99\n"), std::string::npos) << text;
  EXPECT_NE(text.find(",qs,timeout,,180.0000312,410,4100,17,99\n"), std::string::npos) << text;
  EXPECT_NE(text.find(",qs,error,,0.0000472,,,17,99\n"), std::string::npos) << text;

  const auto back = fb::read_results_csv(buf);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].semiprime, records[i].semiprime);
    EXPECT_EQ(back[i].outcome.algorithm, records[i].outcome.algorithm);
    EXPECT_EQ(back[i].outcome.status, records[i].outcome.status);
    EXPECT_EQ(back[i].outcome.factor, records[i].outcome.factor);
    EXPECT_EQ(back[i].outcome.b_param, records[i].outcome.b_param);
    EXPECT_EQ(back[i].outcome.m_param, records[i].outcome.m_param);
    EXPECT_NEAR(back[i].outcome.elapsed_seconds, records[i].outcome.elapsed_seconds, 5e-8);
  }
}

TEST(ResultsCsv, WriteReadWriteIsAFixedPoint) {
  fb::Rng rng(4);
  std::vector<fb::BenchRecord> records;
  for (int i = 0; i < 200; ++i) {
    auto r = make_record(fb::to_u64(fb::random_prime(20, rng)), fb::to_u64(fb::random_prime(21, rng)),
                         rng() % 2 ? fb::Algorithm::qs : fb::Algorithm::pollard,
                         static_cast<fb::Status>(rng() % 3), static_cast<double>(rng() % 10'000'000) / 1e6);
    if (rng() % 2) r.outcome.b_param = rng() % 1000;
    records.push_back(r);
  }
  std::stringstream first;
  fb::write_results_csv(first, records);
  std::stringstream copy(first.str());
  const auto back = fb::read_results_csv(copy);
  std::stringstream second;
  fb::write_results_csv(second, back);
  EXPECT_EQ(first.str(), second.str());
}

TEST(ResultsCsv, Rejects) {
  const std::string header = std::string(fb::kResultsHeader) + "\n";
  for (const std::string& bad : {
           std::string("n,p,q,p_bits,q_bits,n_bits\n"),
           header + "21,3,7,2,3,5,pollard,success,3,0.1,,,1\n",
           header + "21,3,7,2,3,5,ecm,success,3,0.1,,,1,1\n",
           header + "21,3,7,2,3,5,pollard,done,3,0.1,,,1,1\n",
           header + "21,3,7,2,3,5,pollard,success,3,fast,,,1,1\n",
           header + "21,3,7,2,3,5,pollard,success,3,-1,,,1,1\n",
           header + "21,3,7,2,3,5,pollard,success,3,0.1,,,,1\n",
       }) {
    std::stringstream in(bad);
    EXPECT_THROW(fb::read_results_csv(in), fb::FormatError) << bad;
  }
  std::stringstream empty(header);
  EXPECT_TRUE(fb::read_results_csv(empty).empty());
}

TEST(FormatSeconds, SevenDigits) {
  EXPECT_EQ(fb::format_seconds(0.0000472), "0.0000472");
  EXPECT_EQ(fb::format_seconds(180), "180.0000000");
  EXPECT_EQ(fb::format_seconds(0.01383399960), "0.0138340");
}
