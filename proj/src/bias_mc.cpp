#include "renyi/bias_mc.hpp"
#include "renyi/error.hpp"
#include "renyi/llde.hpp"
#include "renyi/parallel.hpp"
#include "renyi/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace renyi {

namespace {

// x^{p/d} with the common small cases done exactly.
double
ratio_pow(double x, std::size_t p, std::size_t d)
{
  if (p == d)
    return x;
  if (p == 2 * d)
    return x * x;
  if (d == 2 && p == 1)
    return std::sqrt(x);
  return std::pow(x, static_cast<double>(p) / static_cast<double>(d));
}

void
fill_partial_sums(std::mt19937_64& rng, std::vector<double>& out)
{
  std::exponential_distribution<double> expo(1.0);
  double acc = 0.0;
  for (auto& r : out) {
    // an exact 0 draw would repeat a radius; redraw
    double e;
    do {
      e = expo(rng);
    } while (!(e > 0.0));
    acc += e;
    r = acc;
  }
}

void
check_mc_args(std::size_t k, std::size_t d, double alpha, const McOptions& opt)
{
  if (k < 1)
    throw Error(ErrorCode::invalid_k, "k must be at least 1");
  if (d < 1)
    throw Error(ErrorCode::dimension_mismatch, "dimension must be at least 1");
  if (!std::isfinite(alpha))
    throw Error(ErrorCode::invalid_argument, "alpha must be finite");
  if (opt.trials < 1)
    throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
  if (opt.m_trunc < k) {
    throw Error(ErrorCode::invalid_argument,
                "m_trunc=" + std::to_string(opt.m_trunc) +
                  " is smaller than k=" + std::to_string(k));
  }
}

BiasEntry
reduce_trials(const BiasKey& key,
              const std::vector<double>& values,
              const McOptions& opt)
{
  const auto t = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double mean = sum / t;
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / t);

  BiasEntry e;
  e.key = key;
  e.bias = mean;
  e.std_error = sd / std::sqrt(t);
  e.trials = opt.trials;
  e.m_trunc = opt.m_trunc;
  e.seed = opt.seed;
  return e;
}

void
check_trial_value(double v, std::size_t trial)
{
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::non_finite,
                "Monte Carlo trial " + std::to_string(trial) +
                  " evaluated to a non-finite value");
  }
}

} // namespace

std::vector<double>
sample_partial_sums(std::uint64_t seed, std::uint64_t trial, std::size_t m)
{
  auto rng = make_stream(seed, trial, StreamPurpose::radii);
  std::vector<double> r(m);
  fill_partial_sums(rng, r);
  return r;
}

OrderStatSample
sample_order_stats(std::uint64_t seed,
                   std::uint64_t trial,
                   std::size_t m,
                   std::size_t d)
{
  if (m < 1 || d < 1)
    throw Error(ErrorCode::invalid_argument, "need m >= 1 and d >= 1");
  OrderStatSample s;
  s.m = m;
  s.d = d;
  s.partial_sums = sample_partial_sums(seed, trial, m);
  s.directions.resize(m * d);

  auto rng = make_stream(seed, trial, StreamPurpose::directions);
  if (d == 1) {
    for (auto& x : s.directions)
      x = (rng() >> 63) ? -1.0 : 1.0;
    return s;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    double* v = s.directions.data() + j * d;
    double norm2;
    do {
      norm2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        v[a] = gauss(rng);
        norm2 += v[a] * v[a];
      }
    } while (!(norm2 > 1e-200));
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t a = 0; a < d; ++a)
      v[a] *= inv;
  }
  return s;
}

double
s_tilde_kde(const OrderStatSample& s, std::size_t k, const KernelSpec& kernel)
{
  if (k < 1 || k > s.m)
    throw Error(ErrorCode::invalid_argument, "need 1 <= k <= m");
  if (kernel.dim() != s.d)
    throw Error(ErrorCode::dimension_mismatch, "kernel dimension differs");
  // radially symmetric: K(xi r) = profile(r^2) since |xi| = 1
  const double rk = s.partial_sums[k - 1];
  double total = 0.0;
  for (std::size_t j = 0; j < s.m; ++j)
    total += kernel.profile(ratio_pow(s.partial_sums[j] / rk, 2, s.d));
  return total;
}

LldeSums
s_tilde_llde(const OrderStatSample& s, std::size_t k)
{
  if (k < 1 || k > s.m)
    throw Error(ErrorCode::invalid_argument, "need 1 <= k <= m");
  const std::size_t d = s.d;
  LldeSums out;
  out.S1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  out.S2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                 static_cast<Eigen::Index>(d));
  const double rk = s.partial_sums[k - 1];
  for (std::size_t j = 0; j < s.m; ++j) {
    const double ratio = s.partial_sums[j] / rk;
    const double r1 = ratio_pow(ratio, 1, d);
    const double r2 = ratio_pow(ratio, 2, d);
    const double w = std::exp(-0.5 * r2);
    if (w == 0.0)
      break; // radii only grow from here
    Eigen::Map<const Eigen::VectorXd> xi(s.direction(j).data(),
                                         static_cast<Eigen::Index>(d));
    out.S0 += w;
    out.S1 += (w * r1) * xi;
    out.S2.noalias() += (w * r2) * (xi * xi.transpose());
  }
  // the outer-product kernel rounds (a,b) and (b,a) differently
  out.S2 = (0.5 * (out.S2 + out.S2.transpose())).eval();
  return out;
}

std::string_view
to_string(EstimatorKind kind)
{
  return kind == EstimatorKind::kde ? "kde" : "llde";
}

EstimatorKind
parse_estimator_kind(std::string_view name)
{
  if (name == "kde")
    return EstimatorKind::kde;
  if (name == "llde" || name == "klnn")
    return EstimatorKind::llde;
  throw Error(ErrorCode::invalid_argument,
              "unknown estimator '" + std::string(name) +
                "' (expected kde or llde)");
}

std::string
describe(const BiasKey& key)
{
  std::ostringstream os;
  os << "(estimator=" << to_string(key.kind);
  if (key.kind == EstimatorKind::kde)
    os << ", kernel=" << to_string(key.kernel);
  os << ", k=" << key.k << ", d=" << key.d << ", alpha=" << key.alpha << ")";
  return os.str();
}

BiasEntry
bias_kde(std::size_t k,
         std::size_t d,
         double alpha,
         const KernelSpec& kernel,
         const McOptions& opt)
{
  check_mc_args(k, d, alpha, opt);
  if (kernel.dim() != d)
    throw Error(ErrorCode::dimension_mismatch, "kernel dimension differs");
  const BiasKey key{ k, d, alpha, EstimatorKind::kde, kernel.family() };
  if (alpha == 1.0) {
    BiasEntry e{ key, 1.0, 0.0, opt.trials, opt.m_trunc, opt.seed };
    return e;
  }

  const double cd = unit_ball_volume(d);
  std::vector<double> values(opt.trials);
  parallel_for(opt.trials, opt.threads, [&](std::size_t t) {
    // directions are irrelevant for a radial kernel; draw radii only
    std::vector<double> r = sample_partial_sums(opt.seed, t, opt.m_trunc);
    const double rk = r[k - 1];
    double total = 0.0;
    for (std::size_t j = 0; j < opt.m_trunc; ++j) {
      const double term = kernel.profile(ratio_pow(r[j] / rk, 2, d));
      if (term == 0.0)
        break;
      total += term;
    }
    const double v = std::pow(cd * total / rk, alpha - 1.0);
    check_trial_value(v, t);
    values[t] = v;
  });
  return reduce_trials(key, values, opt);
}

BiasEntry
bias_llde(std::size_t k,
          std::size_t d,
          double alpha,
          const McOptions& opt,
          McDiagnostics* diag)
{
  check_mc_args(k, d, alpha, opt);
  const BiasKey key{ k, d, alpha, EstimatorKind::llde, KernelFamily::gaussian };
  if (diag)
    *diag = {};
  if (alpha == 1.0) {
    BiasEntry e{ key, 1.0, 0.0, opt.trials, opt.m_trunc, opt.seed };
    return e;
  }

  const double cd = unit_ball_volume(d);
  std::vector<double> values(opt.trials);
  std::vector<char> regularized(opt.trials, 0);
  parallel_for(opt.trials, opt.threads, [&](std::size_t t) {
    const auto s = sample_order_stats(opt.seed, t, opt.m_trunc, d);
    auto sums = s_tilde_llde(s, k);
    const auto mom =
      make_local_moments(sums.S0, std::move(sums.S1), std::move(sums.S2));
    regularized[t] = mom.regularized ? 1 : 0;
    const double rk = s.partial_sums[k - 1];
    const double v =
      std::pow(cd * local_gaussian_mass(mom) / rk, alpha - 1.0);
    check_trial_value(v, t);
    values[t] = v;
  });

  std::size_t reg = 0;
  for (char c : regularized)
    reg += static_cast<std::size_t>(c);
  if (diag)
    diag->regularized_trials = reg;
  if (static_cast<double>(reg) > 0.01 * static_cast<double>(opt.trials)) {
    throw Error(ErrorCode::singular_excess,
                std::to_string(reg) + " of " + std::to_string(opt.trials) +
                  " trials needed covariance regularization (limit 1%) for " +
                  describe(key));
  }
  return reduce_trials(key, values, opt);
}

void
BiasTable::insert(const BiasEntry& entry)
{
  entries_[entry.key] = entry;
}

const BiasEntry*
BiasTable::find(const BiasKey& key) const
{
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const BiasEntry&
BiasTable::at(const BiasKey& key) const
{
  if (const auto* e = find(key))
    return *e;
  throw Error(ErrorCode::missing_bias_entry,
              "no bias entry for " + describe(key) +
                "; generate one with the bias-table subcommand");
}

std::vector<BiasEntry>
BiasTable::entries() const
{
  std::vector<BiasEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, e] : entries_)
    out.push_back(e);
  return out;
}

namespace {

constexpr std::string_view table_header =
  "version,k,d,alpha,estimator,kernel,bias,stderr,trials,m_trunc,seed";
constexpr std::string_view table_trailer = "# end,";

std::string
format_double(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template<typename T>
bool
parse_number(std::string_view s, T& out)
{
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view>
split_commas(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos
                                       ? std::string_view::npos
                                       : pos - start));
    if (pos == std::string_view::npos)
      return out;
    start = pos + 1;
  }
}

} // namespace

void
store_table(const BiasTable& table, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << table_header << '\n';
  for (const auto& e : table.entries()) {
    out << BiasTable::format_version << ',' << e.key.k << ',' << e.key.d
        << ',' << format_double(e.key.alpha) << ',' << to_string(e.key.kind)
        << ',' << to_string(e.key.kernel) << ',' << format_double(e.bias)
        << ',' << format_double(e.std_error) << ',' << e.trials << ','
        << e.m_trunc << ',' << e.seed << '\n';
  }
  // lets a reader tell a complete file from one cut at a line boundary
  out << table_trailer << table.size() << '\n';
  if (!out)
    throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

BiasTable
load_table(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  auto corrupt = [&](std::size_t line_no, const std::string& why) {
    return Error(ErrorCode::corrupt_entry,
                 path.string() + ":" + std::to_string(line_no) + ": " + why);
  };

  if (text.empty() || text.back() != '\n')
    throw corrupt(0, "file is truncated");

  BiasTable table;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  bool header_seen = false;
  bool trailer_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (trailer_seen)
      throw corrupt(line_no, "content after end marker");
    if (!header_seen) {
      if (line != table_header)
        throw corrupt(line_no, "unexpected header");
      header_seen = true;
      continue;
    }
    if (line.starts_with(table_trailer)) {
      std::size_t declared = 0;
      if (!parse_number(line.substr(table_trailer.size()), declared) ||
          declared != rows)
        throw corrupt(line_no, "entry count does not match end marker");
      trailer_seen = true;
      continue;
    }

    const auto f = split_commas(line);
    int version = 0;
    if (!f.empty() && parse_number(f[0], version) &&
        version != BiasTable::format_version) {
      throw Error(ErrorCode::format_version_mismatch,
                  path.string() + ":" + std::to_string(line_no) +
                    ": format version " + std::to_string(version) +
                    ", this build reads version " +
                    std::to_string(BiasTable::format_version));
    }
    if (f.size() != 11)
      throw corrupt(line_no, "expected 11 fields");
    if (version != BiasTable::format_version)
      throw corrupt(line_no, "bad version field");

    BiasEntry e;
    bool ok = parse_number(f[1], e.key.k) && parse_number(f[2], e.key.d) &&
              parse_number(f[3], e.key.alpha) &&
              parse_number(f[6], e.bias) && parse_number(f[7], e.std_error) &&
              parse_number(f[8], e.trials) && parse_number(f[9], e.m_trunc) &&
              parse_number(f[10], e.seed);
    if (!ok)
      throw corrupt(line_no, "unparsable field");
    try {
      e.key.kind = parse_estimator_kind(f[4]);
      e.key.kernel = parse_kernel_family(f[5]);
    } catch (const Error& err) {
      throw corrupt(line_no, err.what());
    }
    if (e.key.kind == EstimatorKind::llde &&
        e.key.kernel != KernelFamily::gaussian)
      throw corrupt(line_no, "llde entries carry kernel gaussian");
    if (e.key.k < 1 || e.key.d < 1 || !std::isfinite(e.key.alpha) ||
        !(e.bias > 0.0) || !std::isfinite(e.bias) || !(e.std_error >= 0.0) ||
        e.trials < 1 || e.m_trunc < e.key.k)
      throw corrupt(line_no, "field out of range");
    if (table.find(e.key))
      throw corrupt(line_no, "duplicate entry " + describe(e.key));
    table.insert(e);
    ++rows;
  }
  if (!header_seen)
    throw corrupt(0, "missing header");
  if (!trailer_seen)
    throw corrupt(line_no, "missing end marker; file is truncated");
  return table;
}

} // namespace renyi
