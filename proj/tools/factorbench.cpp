// factorbench: factor integers, generate semiprime datasets, benchmark
// Pollard rho against the quadratic sieve and report on the results.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 prime input (factor),
// 3 timeout (factor), 4 the algorithm gave up without a factor (factor).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "factorbench/factorbench.hpp"

namespace fb = factorbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPrime = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitGaveUp = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FACTORBENCH_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable FACTORBENCH_SEED='" << env << "'\n";
    }
  }
  return fb::kDefaultSeed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void write_file(const std::string& path, Fn&& emit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  emit(out);
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

// ---------------------------------------------------------------------------

struct FactorOptions {
  std::string n;
  std::string algo = "auto";
  double timeout = fb::kDefaultBudgetSeconds;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> b;
  std::optional<std::uint64_t> m;
  unsigned auto_threshold = 80;
};

int factor_cmd(const FactorOptions& opt) {
  fb::Natural n;
  try {
    n = fb::parse_natural(opt.n);
  } catch (const std::invalid_argument&) {
    std::cerr << "error: n must be a decimal integer, got '" << opt.n << "'\n";
    return kExitUsage;
  }
  if (n < 2) {
    std::cerr << "error: n must be >= 2\n";
    return kExitUsage;
  }

  fb::Algorithm algo;
  if (opt.algo == "auto") {
    algo = fb::bit_length(n) < opt.auto_threshold ? fb::Algorithm::pollard : fb::Algorithm::qs;
  } else {
    algo = fb::parse_algorithm(opt.algo);
  }

  const auto start = fb::Clock::now();
  const fb::Deadline deadline = fb::Deadline::after(fb::Seconds(opt.timeout));
  fb::Natural factor;
  try {
    if (algo == fb::Algorithm::pollard) {
      fb::RhoConfig cfg;
      cfg.seed = opt.seed.value_or(default_seed());
      factor = fb::pollard_factor(n, cfg, deadline).factor;
    } else {
      fb::QsParams params;
      if (opt.b) params.b_bound = *opt.b;
      if (opt.m) params.m_count = *opt.m;
      try {
        factor = fb::qs_factor(n, params, deadline).factor;
      } catch (const fb::FactorError& e) {
        if (e.code() != fb::FactorErrc::perfect_square) throw;
        factor = *e.root();
      }
    }
  } catch (const fb::FactorError& e) {
    switch (e.code()) {
      case fb::FactorErrc::not_composite:
        std::cout << fb::to_string(n) << " is prime\n";
        return kExitPrime;
      case fb::FactorErrc::budget_exceeded:
        std::cout << fb::to_string(n) << ": timeout after " << opt.timeout << " s\n";
        return kExitTimeout;
      default:
        std::cout << fb::to_string(n) << ": no factor found (" << e.what() << ")\n";
        return kExitGaveUp;
    }
  }
  const double elapsed = fb::Seconds(fb::Clock::now() - start).count();

  fb::Natural cofactor = n / factor;
  if (cofactor < factor) std::swap(factor, cofactor);
  std::cout << fb::to_string(n) << " = " << fb::to_string(factor) << " * " << fb::to_string(cofactor) << "\n";
  std::cout << "algorithm " << fb::to_string(algo) << " elapsed_seconds " << fb::format_seconds(elapsed) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

int gen_dataset_cmd(const GenOptions& opt) {
  fb::DatasetSpec spec;
  try {
    spec = fb::parse_dataset_spec(read_file(opt.spec_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << opt.spec_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  if (opt.seed) spec.seed = *opt.seed;
  const std::vector<fb::Semiprime> rows = fb::generate_dataset(spec);
  write_file(opt.out_path, [&](std::ostream& out) { fb::write_dataset_csv(out, rows); });
  std::cout << rows.size() << " rows written to " << opt.out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
  std::string dataset_path;
  std::string out_path;
  std::vector<std::string> algos{"pollard", "qs"};
  double timeout = fb::kDefaultBudgetSeconds;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  bool progress = false;
};

int bench_cmd(const BenchOptions& opt) {
  std::vector<fb::Semiprime> dataset;
  try {
    std::istringstream in(read_file(opt.dataset_path));
    dataset = fb::read_dataset_csv(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << opt.dataset_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  if (dataset.empty()) {
    std::cerr << "error: " << opt.dataset_path << ": no rows\n";
    return kExitUsage;
  }

  fb::BenchConfig cfg;
  cfg.budget_seconds = opt.timeout;
  cfg.workers = opt.workers;
  cfg.seed = opt.seed.value_or(default_seed());
  cfg.algorithms.clear();
  for (const std::string& a : opt.algos) cfg.algorithms.push_back(fb::parse_algorithm(a));

  fb::ProgressFn progress;
  if (opt.progress) {
    progress = [](std::size_t done, std::size_t total) { std::cerr << "\r" << done << "/" << total << std::flush; };
  }
  const auto records = fb::run_bench(dataset, cfg, progress);
  if (opt.progress) std::cerr << "\n";

  write_file(opt.out_path, [&](std::ostream& out) { fb::write_results_csv(out, records); });

  for (fb::Algorithm algo : cfg.algorithms) {
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : records) {
      if (r.outcome.algorithm == algo) ++counts[static_cast<int>(r.outcome.status)];
    }
    std::cout << fb::to_string(algo) << " success " << counts[0] << " timeout " << counts[1] << " error " << counts[2]
              << "\n";
  }
  const auto violations = fb::verify_outcomes(records);
  for (const auto& v : violations) {
    std::cerr << "violation at record " << v.index << ": " << v.reason << "\n";
  }
  return violations.empty() ? kExitOk : kExitUsage;
}

// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string results_path;
  std::string out_path;
  std::vector<std::string> tables;
  std::string points_csv;
};

int report_cmd(const ReportOptions& opt) {
  fb::TableSelection selection = fb::TableSelection::all();
  if (!opt.tables.empty()) {
    selection = fb::TableSelection::none();
    for (const std::string& name : opt.tables) {
      try {
        selection.add(fb::parse_table_name(name));
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }
  std::vector<fb::BenchRecord> records;
  try {
    std::istringstream in(read_file(opt.results_path));
    records = fb::read_results_csv(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << opt.results_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string doc = fb::render_report(fb::compute_report_stats(records), selection);
  write_file(opt.out_path, [&](std::ostream& out) { out << doc; });
  if (!opt.points_csv.empty()) {
    write_file(opt.points_csv, [&](std::ostream& out) { fb::write_points_csv(out, records); });
  }
  std::cout << "report written to " << opt.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pollard rho and quadratic sieve factoring benchmark"};
  app.require_subcommand(1);

  FactorOptions factor_opt;
  auto* factor = app.add_subcommand("factor", "Factor one integer");
  factor->add_option("n", factor_opt.n, "Integer to factor (base 10)")->required();
  factor->add_option("--algo", factor_opt.algo, "pollard, qs or auto")
      ->check(CLI::IsMember({"pollard", "qs", "auto"}))
      ->capture_default_str();
  factor->add_option("--timeout", factor_opt.timeout, "Time budget in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  factor->add_option("--seed", factor_opt.seed, "Seed for pollard (default: $FACTORBENCH_SEED or 1)");
  factor->add_option("--b", factor_opt.b, "Initial QS smoothness bound")->check(CLI::Range(2ULL, ~0ULL));
  factor->add_option("--m", factor_opt.m, "Initial QS candidate count")->check(CLI::Range(1ULL, ~0ULL));
  factor->add_option("--auto-threshold", factor_opt.auto_threshold, "auto: pollard below this many bits")
      ->capture_default_str();

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen-dataset", "Generate a semiprime dataset from a JSON spec");
  gen->add_option("spec", gen_opt.spec_path, "Dataset spec JSON")->required();
  gen->add_option("-o,--out", gen_opt.out_path, "Output CSV")->required();
  gen->add_option("--seed", gen_opt.seed, "Override the spec's seed");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Run the algorithms over a dataset");
  bench->add_option("dataset", bench_opt.dataset_path, "Dataset CSV")->required();
  bench->add_option("-o,--out", bench_opt.out_path, "Results CSV")->required();
  bench->add_option("--algos", bench_opt.algos, "Algorithms to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"pollard", "qs"}))
      ->capture_default_str();
  bench->add_option("--timeout", bench_opt.timeout, "Per-attempt budget in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--workers", bench_opt.workers, "Worker threads")
      ->check(CLI::Range(1U, 1024U))
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "Base seed (default: $FACTORBENCH_SEED or 1)");
  bench->add_flag("--progress", bench_opt.progress, "Print a row counter to stderr");

  ReportOptions report_opt;
  auto* report = app.add_subcommand("report", "Aggregate a results CSV into Markdown tables");
  report->add_option("results", report_opt.results_path, "Results CSV")->required();
  report->add_option("-o,--out", report_opt.out_path, "Output Markdown")->required();
  report->add_option("--tables", report_opt.tables,
                     "Subset of failure-counts, success-by-bitdiff, avg-runtime, head-to-head, complexity")
      ->delimiter(',');
  report->add_option("--points-csv", report_opt.points_csv, "Also export runtime points as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*factor) return factor_cmd(factor_opt);
    if (*gen) return gen_dataset_cmd(gen_opt);
    if (*bench) return bench_cmd(bench_opt);
    if (*report) return report_cmd(report_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
