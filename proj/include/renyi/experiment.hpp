#pragma once

#include "renyi/bias_mc.hpp"
#include "renyi/kernels.hpp"
#include "renyi/synthdata.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace renyi {

enum class Method
{
  klnn,
  kde,
  leonenko,
  kde_fixed
};

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct MethodSpec
{
  Method method = Method::klnn;
  std::size_t k = 5;
  // kde and kde-fixed only
  KernelFamily kernel = KernelFamily::gaussian;
  // kde-fixed only; Silverman when empty
  std::optional<double> bandwidth;
};

struct SweepPoint
{
  double r = 0.0;
  std::size_t n = 100;
};

enum class SweepVar
{
  r,
  n
};

struct ExperimentSpec
{
  std::string name;
  Family family = Family::gauss2d;
  double alpha = 2.0;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  SweepVar sweep_var = SweepVar::r;
  std::vector<SweepPoint> sweep;
};

//! The four synthetic experiments: "I" gauss2d alpha 2, "II" gauss2d
//! alpha 3, "III" gauss6d alpha 2, "IV" mixture2d alpha 2. The r sweep
//! runs r in {0.9, ..., 0.99999} at n = 100; the n sweep runs n in
//! {100, ..., 3200} at r = 0.99999.
ExperimentSpec standard_experiment(std::string_view id, SweepVar sweep_var);

struct ReportRow
{
  std::string experiment;
  Family family = Family::gauss2d;
  double alpha = 0.0;
  double r = 0.0;
  std::size_t n = 0;
  std::string method;
  std::size_t k = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double std = 0.0; // sample standard deviation over trials
  double ground_truth = 0.0;
  double rel_error = 0.0; // trial mean of |estimate - truth| / truth
  std::uint64_t seed = 0;
  std::vector<double> estimates;
};

struct ExperimentReport
{
  SweepVar sweep_var = SweepVar::r;
  std::vector<ReportRow> rows;
};

struct RunOptions
{
  unsigned threads = 1;
  double h_cap = 1e12;
};

//! Validates the spec and every needed bias entry before drawing any
//! sample (MissingBiasEntry names the key). Each trial's dataset is shared
//! by all methods. Estimator errors are rethrown with the method, sweep
//! point and trial prepended.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<MethodSpec>& methods,
                                const BiasTable& table,
                                const RunOptions& options = {});

constexpr std::string_view report_csv_header =
  "experiment,family,alpha,r,n,method,k,trials,mean,std,ground_truth,"
  "rel_error,seed";

void emit_csv(const ExperimentReport& report, const std::filesystem::path& path);
void emit_plot(const ExperimentReport& report, const std::filesystem::path& path);

} // namespace renyi
