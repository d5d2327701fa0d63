#include "renyi/experiment.hpp"
#include "renyi/baselines.hpp"
#include "renyi/error.hpp"
#include "renyi/kde.hpp"
#include "renyi/llde.hpp"
#include "renyi/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace renyi {

Method
parse_method(std::string_view name)
{
  if (name == "klnn" || name == "llde")
    return Method::klnn;
  if (name == "kde")
    return Method::kde;
  if (name == "leonenko")
    return Method::leonenko;
  if (name == "kde-fixed")
    return Method::kde_fixed;
  throw Error(ErrorCode::invalid_argument,
              "unknown method '" + std::string(name) +
                "' (expected klnn, kde, leonenko or kde-fixed)");
}

std::string_view
to_string(Method method)
{
  switch (method) {
    case Method::klnn: return "klnn";
    case Method::kde: return "kde";
    case Method::leonenko: return "leonenko";
    case Method::kde_fixed: return "kde-fixed";
  }
  return "unknown";
}

ExperimentSpec
standard_experiment(std::string_view id, SweepVar sweep_var)
{
  ExperimentSpec spec;
  spec.name = std::string(id);
  if (id == "I") {
    spec.family = Family::gauss2d;
    spec.alpha = 2.0;
  } else if (id == "II") {
    spec.family = Family::gauss2d;
    spec.alpha = 3.0;
  } else if (id == "III") {
    spec.family = Family::gauss6d_block;
    spec.alpha = 2.0;
  } else if (id == "IV") {
    spec.family = Family::mixture2d;
    spec.alpha = 2.0;
  } else {
    throw Error(ErrorCode::invalid_argument,
                "unknown experiment '" + std::string(id) +
                  "' (expected I, II, III or IV)");
  }
  spec.sweep_var = sweep_var;
  if (sweep_var == SweepVar::r) {
    for (double r : { 0.9, 0.99, 0.999, 0.9999, 0.99999 })
      spec.sweep.push_back({ r, 100 });
  } else {
    for (std::size_t n : { 100, 200, 400, 800, 1600, 3200 })
      spec.sweep.push_back({ 0.99999, n });
  }
  return spec;
}

namespace {

// Seed for the datasets of one sweep point, so points draw independent
// data while every method at a point sees the same samples.
std::uint64_t
point_seed(std::uint64_t seed, std::size_t point)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (point + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string
fmt(double x)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string
fmt_fixed(double x, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::optional<BiasKey>
needed_bias(const MethodSpec& m, std::size_t d, double alpha)
{
  if (m.method == Method::kde)
    return BiasKey{ m.k, d, alpha, EstimatorKind::kde, m.kernel };
  if (m.method == Method::klnn)
    return BiasKey{ m.k, d, alpha, EstimatorKind::llde, KernelFamily::gaussian };
  return std::nullopt;
}

} // namespace

ExperimentReport
run_experiment(const ExperimentSpec& spec,
               const std::vector<MethodSpec>& methods,
               const BiasTable& table,
               const RunOptions& options)
{
  // validate everything before the first draw
  if (spec.trials < 1)
    throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
  if (methods.empty())
    throw Error(ErrorCode::invalid_argument, "no methods requested");
  const std::size_t d = family_dim(spec.family);
  std::vector<double> truths;
  for (const auto& p : spec.sweep) {
    if (p.n < 10)
      throw Error(ErrorCode::invalid_argument, "sweep n must be at least 10");
    truths.push_back(ground_truth(spec.family, spec.alpha, p.r));
  }
  std::vector<const BiasEntry*> biases;
  for (const auto& m : methods) {
    if (m.k < 1)
      throw Error(ErrorCode::invalid_k, "k must be at least 1");
    for (const auto& p : spec.sweep) {
      if (m.k > p.n - 1)
        throw Error(ErrorCode::m_too_large, "k exceeds n-1 at some sweep point");
    }
    if (m.method == Method::leonenko)
      leonenko_constant(m.k, spec.alpha);
    const auto key = needed_bias(m, d, spec.alpha);
    biases.push_back(key ? &table.at(*key) : nullptr);
  }

  ExperimentReport report;
  report.sweep_var = spec.sweep_var;
  const std::size_t nm = methods.size();

  for (std::size_t p = 0; p < spec.sweep.size(); ++p) {
    const auto& pt = spec.sweep[p];
    const SampleSpec ss{ spec.family, pt.r, pt.n, point_seed(spec.seed, p) };
    // estimates[t * nm + method]
    std::vector<double> estimates(spec.trials * nm);

    parallel_for(spec.trials, options.threads, [&](std::size_t t) {
      const NeighborIndex index(sample(ss, t));
      for (std::size_t mi = 0; mi < nm; ++mi) {
        const auto& m = methods[mi];
        try {
          double v = 0.0;
          EstimatorConfig cfg;
          cfg.k = m.k;
          cfg.alpha = spec.alpha;
          cfg.kernel = m.kernel;
          cfg.h_cap = options.h_cap;
          switch (m.method) {
            case Method::klnn:
              v = estimate_J_klnn(index, cfg, *biases[mi]).value;
              break;
            case Method::kde:
              v = estimate_J_kde(index, cfg, *biases[mi]).value;
              break;
            case Method::leonenko:
              v = estimate_J_leonenko(index, m.k, spec.alpha).value;
              break;
            case Method::kde_fixed:
              v = estimate_J_kde_fixed(index.data(),
                                       KernelSpec(m.kernel, d),
                                       spec.alpha,
                                       m.bandwidth)
                    .value;
              break;
          }
          estimates[t * nm + mi] = v;
        } catch (const Error& e) {
          throw Error(e.code(),
                      "method=" + std::string(to_string(m.method)) +
                        " r=" + fmt(pt.r) + " n=" + std::to_string(pt.n) +
                        " trial=" + std::to_string(t) + ": " + e.what());
        }
      }
    });

    for (std::size_t mi = 0; mi < nm; ++mi) {
      ReportRow row;
      row.experiment = spec.name;
      row.family = spec.family;
      row.alpha = spec.alpha;
      row.r = pt.r;
      row.n = pt.n;
      row.method = std::string(to_string(methods[mi].method));
      row.k = methods[mi].method == Method::kde_fixed ? 0 : methods[mi].k;
      row.trials = spec.trials;
      row.ground_truth = truths[p];
      row.seed = spec.seed;
      row.estimates.resize(spec.trials);
      double sum = 0.0;
      double rel = 0.0;
      for (std::size_t t = 0; t < spec.trials; ++t) {
        const double v = estimates[t * nm + mi];
        row.estimates[t] = v;
        sum += v;
        rel += std::abs(v - truths[p]) / truths[p];
      }
      const double tr = static_cast<double>(spec.trials);
      row.mean = sum / tr;
      row.rel_error = rel / tr;
      double ss2 = 0.0;
      for (double v : row.estimates)
        ss2 += (v - row.mean) * (v - row.mean);
      row.std = spec.trials > 1 ? std::sqrt(ss2 / (tr - 1.0)) : 0.0;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void
emit_csv(const ExperimentReport& report, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << report_csv_header << '\n';
  for (const auto& r : report.rows) {
    out << r.experiment << ',' << to_string(r.family) << ',' << fmt(r.alpha)
        << ',' << fmt(r.r) << ',' << r.n << ',' << r.method << ',' << r.k
        << ',' << r.trials << ',' << fmt(r.mean) << ',' << fmt(r.std) << ','
        << fmt(r.ground_truth) << ',' << fmt(r.rel_error) << ',' << r.seed
        << '\n';
  }
  if (!out)
    throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

namespace {

struct Series
{
  std::string method;
  std::vector<double> x, mean, lo, hi;
};

constexpr const char* palette[] = { "#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b" };

} // namespace

void
emit_plot(const ExperimentReport& report, const std::filesystem::path& path)
{
  const bool by_r = report.sweep_var == SweepVar::r;
  auto xval = [&](const ReportRow& r) {
    return by_r ? -std::log10(1.0 - r.r) : std::log2(static_cast<double>(r.n));
  };

  std::vector<Series> series;
  std::vector<double> truth_x, truth_y;
  for (const auto& row : report.rows) {
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
      return s.method == row.method;
    });
    if (it == series.end()) {
      series.push_back({ row.method, {}, {}, {}, {} });
      it = series.end() - 1;
    }
    it->x.push_back(xval(row));
    it->mean.push_back(row.mean);
    it->lo.push_back(row.mean - row.std);
    it->hi.push_back(row.mean + row.std);
    if (&series.front() == &*it) {
      truth_x.push_back(xval(row));
      truth_y.push_back(row.ground_truth);
    }
  }

  // log10 y axis when everything plotted is positive
  bool logy = !report.rows.empty();
  for (const auto& row : report.rows)
    logy = logy && row.mean > 0.0 && row.ground_truth > 0.0;
  auto ty = [&](double y) { return logy ? std::log10(y) : y; };

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  auto widen = [&](double x, double y) {
    if (first) {
      x0 = x1 = x;
      y0 = y1 = y;
      first = false;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i)
      widen(s.x[i], ty(s.mean[i]));
  }
  for (std::size_t i = 0; i < truth_x.size(); ++i)
    widen(truth_x[i], ty(truth_y[i]));
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.08 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double W = 640, H = 420, ml = 70, mr = 130, mt = 30, mb = 50;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) {
    y = std::clamp(y, y0, y1);
    return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
     << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
     << "\" height=\"" << (H - mt - mb)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks at the sweep values
  for (std::size_t i = 0; i < truth_x.size(); ++i) {
    const auto& row = report.rows[i * series.size()];
    const std::string label = by_r ? fmt(row.r) : std::to_string(row.n);
    os << "<text x=\"" << fmt_fixed(px(truth_x[i]), 2) << "\" y=\""
       << fmt_fixed(H - mb + 16, 2) << "\" text-anchor=\"middle\">" << label
       << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y0 + (y1 - y0) * i / 4.0;
    const double shown = logy ? std::pow(10.0, y) : y;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", shown);
    os << "<text x=\"" << fmt_fixed(ml - 6, 2) << "\" y=\""
       << fmt_fixed(py(y) + 4, 2) << "\" text-anchor=\"end\">" << buf
       << "</text>\n";
  }
  os << "<text x=\"" << fmt_fixed((W - mr + ml) / 2, 2) << "\" y=\""
     << fmt_fixed(H - 12, 2) << "\" text-anchor=\"middle\">"
     << (by_r ? "r" : "n") << "</text>\n";
  os << "<text x=\"16\" y=\"" << fmt_fixed((H - mb + mt) / 2, 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << fmt_fixed((H - mb + mt) / 2, 2) << ")\">"
     << (logy ? "estimate (log scale)" : "estimate") << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = palette[si % std::size(palette)];
    // mean +- one sd band
    os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double hi = s.hi[i];
      os << fmt_fixed(px(s.x[i]), 2) << ','
         << fmt_fixed(py(logy && hi <= 0.0 ? y0 : ty(hi)), 2) << ' ';
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      const double lo = s.lo[i];
      os << fmt_fixed(px(s.x[i]), 2) << ','
         << fmt_fixed(py(logy && lo <= 0.0 ? y0 : ty(lo)), 2) << ' ';
    }
    os << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << fmt_fixed(px(s.x[i]), 2) << ',' << fmt_fixed(py(ty(s.mean[i])), 2)
         << ' ';
    os << "\"/>\n";
    const double ly = mt + 14 + 16.0 * static_cast<double>(si);
    os << "<line x1=\"" << fmt_fixed(W - mr + 10, 2) << "\" y1=\""
       << fmt_fixed(ly - 4, 2) << "\" x2=\"" << fmt_fixed(W - mr + 30, 2)
       << "\" y2=\"" << fmt_fixed(ly - 4, 2) << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fmt_fixed(W - mr + 36, 2) << "\" y=\""
       << fmt_fixed(ly, 2) << "\">" << s.method << "</text>\n";
  }

  if (!truth_x.empty()) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"5,3\" "
          "points=\"";
    for (std::size_t i = 0; i < truth_x.size(); ++i)
      os << fmt_fixed(px(truth_x[i]), 2) << ','
         << fmt_fixed(py(ty(truth_y[i])), 2) << ' ';
    os << "\"/>\n";
    const double ly = mt + 14 + 16.0 * static_cast<double>(series.size());
    os << "<line x1=\"" << fmt_fixed(W - mr + 10, 2) << "\" y1=\""
       << fmt_fixed(ly - 4, 2) << "\" x2=\"" << fmt_fixed(W - mr + 30, 2)
       << "\" y2=\"" << fmt_fixed(ly - 4, 2)
       << "\" stroke=\"black\" stroke-dasharray=\"5,3\"/>\n";
    os << "<text x=\"" << fmt_fixed(W - mr + 36, 2) << "\" y=\""
       << fmt_fixed(ly, 2) << "\">truth</text>\n";
  }
  os << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << os.str();
  if (!out)
    throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

} // namespace renyi
