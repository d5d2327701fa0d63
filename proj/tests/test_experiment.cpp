#include "renyi/error.hpp"
#include "renyi/experiment.hpp"
#include "support.hpp"

#include <doctest.h>
#include <filesystem>
#include <fstream>

using namespace renyi;
namespace fs = std::filesystem;

namespace {

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return { std::istreambuf_iterator<char>(in), {} };
}

std::vector<MethodSpec>
three_methods()
{
  return { { Method::klnn }, { Method::kde }, { Method::leonenko } };
}

fs::path
tmp(const std::string& name)
{
  return fs::temp_directory_path() / ("renyi_test_" + name);
}

} // namespace

TEST_SUITE("experiment")
{
  TEST_CASE("r sweep shape")
  {
    auto spec = standard_experiment("I", SweepVar::r);
    spec.trials = 3;
    const auto rep = run_experiment(spec, three_methods(), testing::default_table());
    REQUIRE(rep.rows.size() == 15);
    for (const auto& row : rep.rows) {
      CHECK(row.n == 100);
      CHECK(row.trials == 3);
      CHECK(row.estimates.size() == 3);
      CHECK(row.ground_truth == ground_truth(Family::gauss2d, 2.0, row.r));
    }
    emit_csv(rep, tmp("shape.csv"));
    const auto text = slurp(tmp("shape.csv"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 16);
    CHECK(text.starts_with(std::string(report_csv_header) + "\n"));
  }

  TEST_CASE("missing bias entry fails before sampling")
  {
    BiasTable partial;
    for (const auto& e : testing::default_table().entries()) {
      if (!(e.key.kind == EstimatorKind::llde && e.key.d == 6))
        partial.insert(e);
    }
    auto spec = standard_experiment("III", SweepVar::r);
    try {
      run_experiment(spec, three_methods(), partial);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::missing_bias_entry);
      CHECK(std::string(e.what()).find("k=5, d=6") != std::string::npos);
    }
  }

  TEST_CASE("csv edge cases")
  {
    ExperimentReport empty;
    emit_csv(empty, tmp("empty.csv"));
    CHECK(slurp(tmp("empty.csv")) == std::string(report_csv_header) + "\n");

    ExperimentReport one;
    ReportRow row;
    row.experiment = "I";
    row.alpha = 2;
    row.r = 0.9;
    row.n = 100;
    row.method = "kde";
    row.k = 5;
    row.trials = 1;
    row.mean = 0.1;
    row.ground_truth = 0.2;
    row.rel_error = 0.5;
    row.seed = 7;
    one.rows.push_back(row);
    emit_csv(one, tmp("one.csv"));
    CHECK(slurp(tmp("one.csv")) == std::string(report_csv_header) +
                                     "\nI,gauss2d,2,0.9,100,kde,5,1,0.1,0,0.2,0.5,7\n");
    CHECK_THROWS_AS(emit_csv(one, "/nonexistent/dir/x.csv"), Error);
  }

  TEST_CASE("outputs are identical across runs and worker counts")
  {
    auto spec = standard_experiment("IV", SweepVar::n);
    spec.sweep.resize(3);
    spec.trials = 6;
    spec.seed = 99;
    RunOptions one, three;
    three.threads = 3;
    const auto a = run_experiment(spec, three_methods(), testing::default_table(), one);
    const auto b = run_experiment(spec, three_methods(), testing::default_table(), three);
    emit_csv(a, tmp("det_a.csv"));
    emit_csv(b, tmp("det_b.csv"));
    emit_plot(a, tmp("det_a.svg"));
    emit_plot(b, tmp("det_b.svg"));
    CHECK(slurp(tmp("det_a.csv")) == slurp(tmp("det_b.csv")));
    CHECK(slurp(tmp("det_a.svg")) == slurp(tmp("det_b.svg")));
    CHECK(slurp(tmp("det_a.svg")).starts_with("<svg"));
  }

  TEST_CASE("all methods approach the truth as n grows")
  {
    const auto spec = standard_experiment("I", SweepVar::n);
    const auto rep = run_experiment(spec, three_methods(), testing::default_table());
    for (const auto* m : { "klnn", "kde", "leonenko" }) {
      std::vector<double> err;
      for (const auto& row : rep.rows)
        if (row.method == m)
          err.push_back(row.rel_error);
      REQUIRE(err.size() == 6);
      MESSAGE(std::string(m) << " relative error n=100: " << err.front() << ", n=3200: " << err.back());
      CHECK(err.back() < err.front());
    }
  }

  TEST_CASE("names")
  {
    CHECK(parse_method("kde-fixed") == Method::kde_fixed);
    CHECK_THROWS_AS(parse_method("knn"), Error);
    CHECK_THROWS_AS(standard_experiment("V", SweepVar::r), Error);
  }
}
