#include "renyi/baselines.hpp"
#include "renyi/bias_mc.hpp"
#include "renyi/error.hpp"
#include "renyi/experiment.hpp"
#include "renyi/kde.hpp"
#include "renyi/llde.hpp"
#include "renyi/synthdata.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef RENYI_DEFAULT_BIAS_TABLE
#define RENYI_DEFAULT_BIAS_TABLE "data/bias_table.csv"
#endif

namespace fs = std::filesystem;
using namespace renyi;

namespace {

struct Globals
{
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string output_dir;
};

std::string
fmt(double x)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

fs::path
resolve_output(const Globals& g, const std::string& out)
{
  fs::path p(out);
  if (p.is_relative() && !g.output_dir.empty())
    p = fs::path(g.output_dir) / p;
  if (p.has_parent_path())
    fs::create_directories(p.parent_path());
  return p;
}

// Writes to `out` under the output directory, or stdout when out is empty.
void
write_text(const Globals& g, const std::string& out, const std::string& text)
{
  if (out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  const auto path = resolve_output(g, out);
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text))
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

void
write_options(std::ostream& f, const CLI::App& app, const std::string& prefix)
{
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty())
      continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config")
      continue;
    if (opt->get_type_size() == 0) {
      f << prefix << name << "=" << (opt->count() > 0 ? "true" : "false") << "\n";
      continue;
    }
    std::vector<std::string> vals;
    if (opt->count() > 0) {
      vals = opt->results();
    } else {
      std::string def = opt->get_default_str();
      if (def.size() >= 2 && def.front() == '[' && def.back() == ']')
        def = def.substr(1, def.size() - 2);
      if (def.empty())
        continue;
      vals = CLI::detail::split(def, ',');
    }
    f << prefix << name << "=";
    if (vals.size() > 1 || opt->get_expected_max() > 1) {
      f << "[";
      for (std::size_t i = 0; i < vals.size(); ++i)
        f << (i ? "," : "") << '"' << vals[i] << '"';
      f << "]\n";
    } else {
      f << '"' << vals.front() << "\"\n";
    }
  }
}

// config_to_str(true) quotes list defaults so they do not parse back; echo
// the globals and the active subcommand with resolved values instead
void
write_config_echo(const CLI::App& app, const fs::path& target)
{
  std::ofstream f(target.string() + ".config", std::ios::binary);
  if (!f)
    throw Error(ErrorCode::io_error, "cannot write config echo for " + target.string());
  write_options(f, app, "");
  for (const CLI::App* sub : app.get_subcommands())
    write_options(f, *sub, sub->get_name() + ".");
}

// ---- bias-table ----

struct BiasTableArgs
{
  std::vector<std::size_t> k_list{ 4, 5, 6, 7, 8, 9 };
  std::vector<std::size_t> d_list{ 1, 2, 3, 6 };
  std::vector<double> alpha_list{ 2.0, 3.0 };
  std::vector<std::string> estimators{ "kde" };
  std::string kernel = "gaussian";
  std::size_t trials = 1000000;
  std::size_t m_trunc = 5000;
  std::string out = "bias_table.csv";
  bool merge = false;
};

void
run_bias_table(const Globals& g, const BiasTableArgs& a, const CLI::App& app)
{
  std::vector<EstimatorKind> kinds;
  for (const auto& e : a.estimators)
    kinds.push_back(parse_estimator_kind(e));
  const KernelFamily family = parse_kernel_family(a.kernel);
  const auto path = resolve_output(g, a.out);

  BiasTable table;
  if (a.merge && fs::exists(path))
    table = load_table(path);

  McOptions opt;
  opt.trials = a.trials;
  opt.m_trunc = a.m_trunc;
  opt.seed = g.seed;
  opt.threads = g.threads;
  for (auto kind : kinds) {
    for (auto d : a.d_list) {
      for (auto alpha : a.alpha_list) {
        for (auto k : a.k_list) {
          const BiasEntry e = kind == EstimatorKind::kde
                                ? bias_kde(k, d, alpha, KernelSpec(family, d), opt)
                                : bias_llde(k, d, alpha, opt);
          std::cerr << describe(e.key) << " -> " << fmt(e.bias) << " +- "
                    << fmt(e.std_error) << '\n';
          table.insert(e);
        }
      }
    }
  }
  store_table(table, path);
  write_config_echo(app, path);
}

// ---- estimate ----

struct EstimateArgs
{
  std::string input;
  std::string method = "klnn";
  std::size_t k = 5;
  double alpha = 2.0;
  std::string kernel = "gaussian";
  std::string bias_table = RENYI_DEFAULT_BIAS_TABLE;
  std::string bandwidth = "silverman";
  double h_cap = 1e12;
  bool renyi = false;
  std::string out;
};

void
run_estimate(const Globals& g, const EstimateArgs& a)
{
  const Method method = parse_method(a.method);
  const KernelFamily family = parse_kernel_family(a.kernel);
  std::optional<double> bandwidth;
  if (a.bandwidth != "silverman") {
    double h = 0.0;
    auto [ptr, ec] = std::from_chars(a.bandwidth.data(),
                                     a.bandwidth.data() + a.bandwidth.size(), h);
    if (ec != std::errc() || ptr != a.bandwidth.data() + a.bandwidth.size())
      throw Error(ErrorCode::invalid_argument,
                  "--bandwidth expects a number or 'silverman'");
    bandwidth = h;
  }
  if (a.renyi && a.alpha == 1.0)
    throw Error(ErrorCode::alpha_one, "Renyi entropy needs alpha != 1");

  // load the bias before touching the data so a bad table fails first
  std::optional<BiasEntry> bias;
  const Dataset data = read_csv(a.input);
  const std::size_t d = data.dim();
  if (method == Method::kde || method == Method::klnn) {
    const BiasTable table = load_table(a.bias_table);
    const BiasKey key = method == Method::kde
                          ? BiasKey{ a.k, d, a.alpha, EstimatorKind::kde, family }
                          : BiasKey{ a.k, d, a.alpha, EstimatorKind::llde,
                                     KernelFamily::gaussian };
    bias = table.at(key);
  }

  EstimatorConfig cfg;
  cfg.k = a.k;
  cfg.alpha = a.alpha;
  cfg.kernel = family;
  cfg.h_cap = a.h_cap;
  cfg.threads = g.threads;

  double value = 0.0;
  switch (method) {
    case Method::kde:
      value = estimate_J_kde(data, cfg, *bias).value;
      break;
    case Method::klnn:
      value = estimate_J_klnn(data, cfg, *bias).value;
      break;
    case Method::leonenko:
      value = estimate_J_leonenko(data, a.k, a.alpha, g.threads).value;
      break;
    case Method::kde_fixed:
      value = estimate_J_kde_fixed(data, KernelSpec(family, d), a.alpha,
                                   bandwidth, g.threads)
                .value;
      break;
  }
  if (a.renyi) {
    if (!(value > 0.0))
      throw Error(ErrorCode::non_positive_j, "J estimate is not positive");
    value = std::log(value) / (1.0 - a.alpha);
  }

  std::ostringstream os;
  os << "method,n,d,k,alpha,value\n"
     << to_string(method) << ',' << data.size() << ',' << d << ','
     << (method == Method::kde_fixed ? 0 : a.k) << ',' << fmt(a.alpha) << ','
     << fmt(value) << '\n';
  write_text(g, a.out, os.str());
}

// ---- experiment ----

struct ExperimentArgs
{
  std::string experiment = "I";
  std::string sweep = "r";
  std::vector<double> r_list;
  std::vector<std::size_t> n_list;
  std::size_t trials = 100;
  std::vector<std::string> methods{ "klnn", "kde", "leonenko" };
  std::size_t k = 5;
  std::string kernel = "gaussian";
  std::string bias_table = RENYI_DEFAULT_BIAS_TABLE;
  double h_cap = 1e12;
  std::string out;
  std::string plot;
};

void
run_experiment_cmd(const Globals& g, const ExperimentArgs& a, const CLI::App& app)
{
  SweepVar var;
  if (a.sweep == "r")
    var = SweepVar::r;
  else if (a.sweep == "n")
    var = SweepVar::n;
  else
    throw Error(ErrorCode::invalid_argument, "--sweep expects r or n");

  ExperimentSpec spec = standard_experiment(a.experiment, var);
  spec.trials = a.trials;
  spec.seed = g.seed;
  if (var == SweepVar::r && !a.r_list.empty()) {
    const std::size_t n = a.n_list.empty() ? 100 : a.n_list.front();
    spec.sweep.clear();
    for (double r : a.r_list)
      spec.sweep.push_back({ r, n });
  } else if (var == SweepVar::n && !a.n_list.empty()) {
    const double r = a.r_list.empty() ? 0.99999 : a.r_list.front();
    spec.sweep.clear();
    for (auto n : a.n_list)
      spec.sweep.push_back({ r, n });
  } else if (var == SweepVar::r && !a.n_list.empty()) {
    for (auto& p : spec.sweep)
      p.n = a.n_list.front();
  } else if (var == SweepVar::n && !a.r_list.empty()) {
    for (auto& p : spec.sweep)
      p.r = a.r_list.front();
  }

  std::vector<MethodSpec> methods;
  for (const auto& m : a.methods) {
    MethodSpec ms;
    ms.method = parse_method(m);
    ms.k = a.k;
    ms.kernel = parse_kernel_family(a.kernel);
    methods.push_back(ms);
  }
  bool needs_table = false;
  for (const auto& m : methods)
    needs_table = needs_table || m.method == Method::kde || m.method == Method::klnn;
  const BiasTable table = needs_table ? load_table(a.bias_table) : BiasTable{};

  RunOptions opt;
  opt.threads = g.threads;
  opt.h_cap = a.h_cap;
  const auto report = run_experiment(spec, methods, table, opt);

  const std::string out = a.out.empty()
                            ? "experiment_" + a.experiment + "_" + a.sweep + ".csv"
                            : a.out;
  const auto path = resolve_output(g, out);
  emit_csv(report, path);
  write_config_echo(app, path);
  if (!a.plot.empty())
    emit_plot(report, resolve_output(g, a.plot));
}

// ---- ground-truth / sample ----

struct TruthArgs
{
  std::string family = "gauss2d";
  double alpha = 2.0;
  std::vector<double> r{ 0.0 };
  std::string out;
};

void
run_ground_truth(const Globals& g, const TruthArgs& a)
{
  const Family family = parse_family(a.family);
  std::ostringstream os;
  os << "family,alpha,r,ground_truth\n";
  for (double r : a.r) {
    os << to_string(family) << ',' << fmt(a.alpha) << ',' << fmt(r) << ','
       << fmt(ground_truth(family, a.alpha, r)) << '\n';
  }
  write_text(g, a.out, os.str());
}

struct SampleArgs
{
  std::string family = "gauss2d";
  double r = 0.0;
  std::size_t n = 100;
  std::uint64_t trial = 0;
  std::string out;
};

void
run_sample(const Globals& g, const SampleArgs& a)
{
  const SampleSpec spec{ parse_family(a.family), a.r, a.n, g.seed };
  const Dataset data = sample(spec, a.trial);
  std::ostringstream os;
  for (std::size_t c = 0; c < data.dim(); ++c)
    os << (c ? "," : "") << 'x' << (c + 1);
  os << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t c = 0; c < p.size(); ++c)
      os << (c ? "," : "") << fmt(p[c]);
    os << '\n';
  }
  write_text(g, a.out, os.str());
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Debiased kNN-bandwidth estimators of integral density "
                "functionals and Renyi entropy" };
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file");

  Globals g;
  if (const char* env = std::getenv("RENYI_OUTPUT_DIR"))
    g.output_dir = env;
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")
    ->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--output-dir", g.output_dir,
                 "Directory for relative output paths (env RENYI_OUTPUT_DIR)");

  BiasTableArgs bt;
  auto* c_bt = app.add_subcommand("bias-table", "Monte Carlo bias constants");
  c_bt->add_option("--k-list", bt.k_list)->delimiter(',')->capture_default_str();
  c_bt->add_option("--d-list", bt.d_list)->delimiter(',')->capture_default_str();
  c_bt->add_option("--alpha-list", bt.alpha_list)->delimiter(',')->capture_default_str();
  c_bt->add_option("--estimator", bt.estimators, "kde and/or llde")
    ->delimiter(',')
    ->capture_default_str();
  c_bt->add_option("--kernel", bt.kernel)->capture_default_str();
  c_bt->add_option("--trials", bt.trials)->capture_default_str();
  c_bt->add_option("--m-trunc", bt.m_trunc)->capture_default_str();
  c_bt->add_option("--out", bt.out)->capture_default_str();
  c_bt->add_flag("--merge", bt.merge, "Merge into an existing table at --out");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate J_alpha or H_alpha from a CSV");
  c_est->add_option("--input", est.input)->required();
  c_est->add_option("--method", est.method, "klnn, kde, leonenko or kde-fixed")
    ->capture_default_str();
  c_est->add_option("--k", est.k)->capture_default_str();
  c_est->add_option("--alpha", est.alpha)->capture_default_str();
  c_est->add_option("--kernel", est.kernel)->capture_default_str();
  c_est->add_option("--bias-table", est.bias_table)->capture_default_str();
  c_est->add_option("--bandwidth", est.bandwidth, "kde-fixed bandwidth or 'silverman'")
    ->capture_default_str();
  c_est->add_option("--h-cap", est.h_cap)->capture_default_str();
  c_est->add_flag("--renyi", est.renyi, "Report the Renyi entropy instead of J");
  c_est->add_option("--out", est.out, "Output CSV (default stdout)");

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "Run a synthetic experiment sweep");
  c_ex->add_option("--experiment", ex.experiment, "I, II, III or IV")
    ->capture_default_str();
  c_ex->add_option("--sweep", ex.sweep, "r or n")->capture_default_str();
  c_ex->add_option("--r-list", ex.r_list)->delimiter(',');
  c_ex->add_option("--n-list", ex.n_list)->delimiter(',');
  c_ex->add_option("--trials", ex.trials)->capture_default_str();
  c_ex->add_option("--methods", ex.methods)->delimiter(',')->capture_default_str();
  c_ex->add_option("--k", ex.k)->capture_default_str();
  c_ex->add_option("--kernel", ex.kernel)->capture_default_str();
  c_ex->add_option("--bias-table", ex.bias_table)->capture_default_str();
  c_ex->add_option("--h-cap", ex.h_cap)->capture_default_str();
  c_ex->add_option("--out", ex.out, "Report CSV");
  c_ex->add_option("--plot", ex.plot, "Also write an SVG plot here");

  TruthArgs tr;
  auto* c_tr = app.add_subcommand("ground-truth", "Closed-form J_alpha");
  c_tr->add_option("--family", tr.family)->capture_default_str();
  c_tr->add_option("--alpha", tr.alpha)->capture_default_str();
  c_tr->add_option("--r", tr.r)->delimiter(',')->capture_default_str();
  c_tr->add_option("--out", tr.out);

  SampleArgs sa;
  auto* c_sa = app.add_subcommand("sample", "Draw a synthetic dataset as CSV");
  c_sa->add_option("--family", sa.family)->capture_default_str();
  c_sa->add_option("--r", sa.r)->capture_default_str();
  c_sa->add_option("--n", sa.n)->capture_default_str();
  c_sa->add_option("--trial", sa.trial)->capture_default_str();
  c_sa->add_option("--out", sa.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_bt)
      run_bias_table(g, bt, app);
    else if (*c_est)
      run_estimate(g, est);
    else if (*c_ex)
      run_experiment_cmd(g, ex, app);
    else if (*c_tr)
      run_ground_truth(g, tr);
    else if (*c_sa)
      run_sample(g, sa);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
