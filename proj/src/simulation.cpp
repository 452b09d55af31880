#include "circkde/simulation.hpp"

#include "circkde/errors.hpp"
#include "circkde/mise_theory.hpp"
#include "circkde/selectors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace circkde {

namespace {

constexpr double coeff_floor = 1e-14;

std::vector<double> truth_grid(const ScenarioSpec& truth, int grid_size)
{
  std::vector<double> out(static_cast<std::size_t>(grid_size));
  const double h = two_pi / grid_size;
  for (int k = 0; k < grid_size; ++k)
    out[k] = mixture_density(truth, h * k);
  return out;
}

double ise_quadrature(const DensityEstimate& est, std::span<const double> truth)
{
  std::vector<double> diff = est.eval_grid(static_cast<int>(truth.size()));
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const double d = diff[k] - truth[k];
    diff[k] = d * d;
  }
  return trapezoid_integral(diff);
}

IseValue ise_parseval(const DensityEstimate& est, const ScenarioSpec& truth)
{
  std::vector<std::complex<double>> phi_hat;
  std::vector<double> k;
  if (const auto* ft = std::get_if<FlatTopKernel>(&est.kernel())) {
    const auto e = est.ecf();
    phi_hat.assign(e.begin(), e.end());
    for (std::size_t t = 0; t < phi_hat.size(); ++t)
      k.push_back(char_wft(static_cast<long>(t), *ft));
  } else {
    const double kappa = std::get<VonMisesKernel>(est.kernel()).kappa;
    constexpr int cap = 1 << 16;
    k.push_back(1.0);
    for (int t = 1; t <= cap; ++t) {
      const double kt = char_vm(t, kappa);
      k.push_back(kt);
      if (kt < coeff_floor)
        break;
    }
    const int top = static_cast<int>(k.size()) - 1;
    phi_hat = ecf_sums(est.sample(), top);
    const double n = static_cast<double>(est.sample().size());
    for (auto& s : phi_hat)
      s /= n;
  }
  const int top = static_cast<int>(k.size()) - 1;
  const CharSeq f = characteristic_sequence(truth, top);
  if (f.truncated && f.tail_sum > 1e-12) {
    std::ostringstream os;
    os << "parseval ISE: truth coefficients unresolved beyond t = " << f.max_index()
       << " (tail bound " << f.tail_sum << ")";
    throw NumericalError(os.str());
  }
  const int upper = std::max(top, f.max_index());
  double sum = std::norm(k[0] * phi_hat[0] - f.at(0));
  for (int t = 1; t <= upper; ++t) {
    const std::complex<double> e = t <= top ? k[t] * phi_hat[t] : 0.0;
    sum += 2.0 * std::norm(e - f.at(t));
  }
  IseValue out;
  out.value = sum / two_pi;
  out.tail_bound = f.truncated ? 2.0 * f.tail_sum / two_pi : 0.0;
  return out;
}

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      return out;
    start = pos + 1;
  }
}

double parse_number(const std::string& text, const std::string& context)
{
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad number '" + text + "' in " + context);
  return v;
}

std::string format_double(double v)
{
  if (std::isnan(v))
    return "nan";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

nlohmann::json finite_or_null(double v)
{
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

IseValue ise_detail(const DensityEstimate& estimate,
                    const ScenarioSpec& truth,
                    int grid_size,
                    IseMethod method)
{
  if (method == IseMethod::parseval)
    return ise_parseval(estimate, truth);
  if (grid_size < 8)
    throw std::invalid_argument("ise: grid_size must be at least 8");
  return { ise_quadrature(estimate, truth_grid(truth, grid_size)), 0.0 };
}

double ise(const DensityEstimate& estimate, const ScenarioSpec& truth, int grid_size, IseMethod method)
{
  return ise_detail(estimate, truth, grid_size, method).value;
}

std::string EstimatorConfig::estimator_label() const
{
  switch (kernel) {
    case KernelFamily::wsinc:
      return "wsinc";
    case KernelFamily::wtrap:
      return "wtrap(c=" + std::to_string(c) + ")";
    case KernelFamily::vonmises:
      return "vonmises";
  }
  return "?";
}

std::string EstimatorConfig::selector_label() const
{
  switch (selector) {
    case SelectorKind::er:
      return "er";
    case SelectorKind::lscv:
      return "lscv";
    case SelectorKind::fixed: {
      std::ostringstream os;
      os << (kernel == KernelFamily::vonmises ? "kappa=" : "nu=") << value;
      return os.str();
    }
  }
  return "?";
}

std::string EstimatorConfig::to_string() const
{
  std::string k = kernel == KernelFamily::wsinc   ? "wsinc"
                  : kernel == KernelFamily::wtrap ? "wtrap"
                                                  : "vonmises";
  std::string s = k + ":" + selector_label();
  if (kernel == KernelFamily::wtrap)
    s += ":" + std::to_string(c);
  return s;
}

EstimatorConfig parse_estimator(std::string_view entry)
{
  const std::string ctx = "estimator spec '" + std::string(entry) + "'";
  const auto parts = split(entry, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument(ctx + ": expected kernel:selector-or-value[:c]");

  EstimatorConfig cfg;
  if (parts[0] == "wsinc")
    cfg.kernel = KernelFamily::wsinc;
  else if (parts[0] == "wtrap")
    cfg.kernel = KernelFamily::wtrap;
  else if (parts[0] == "vonmises")
    cfg.kernel = KernelFamily::vonmises;
  else
    throw std::invalid_argument(ctx + ": unknown kernel '" + parts[0] + "'");

  cfg.c = cfg.kernel == KernelFamily::wtrap ? 2 : 1;
  if (parts.size() == 3) {
    const double c = parse_number(parts[2], ctx);
    if (c != std::floor(c) || c < 1 || c > 1000)
      throw std::invalid_argument(ctx + ": c must be a positive integer");
    cfg.c = static_cast<int>(c);
    if (cfg.kernel == KernelFamily::wsinc && cfg.c != 1)
      throw std::invalid_argument(ctx + ": the wrapped sinc kernel has c = 1");
    if (cfg.kernel == KernelFamily::wtrap && cfg.c < 2)
      throw std::invalid_argument(ctx + ": the wrapped trapezoid kernel needs c >= 2");
    if (cfg.kernel == KernelFamily::vonmises)
      throw std::invalid_argument(ctx + ": c does not apply to the von Mises kernel");
  }

  const std::string& sel = parts[1];
  const bool vm = cfg.kernel == KernelFamily::vonmises;
  if (sel == "er") {
    if (vm)
      throw std::invalid_argument(ctx + ": the ER rule selects nu, not kappa");
    cfg.selector = SelectorKind::er;
  } else if (sel == "lscv") {
    cfg.selector = SelectorKind::lscv;
  } else if (sel.rfind("nu=", 0) == 0 && !vm) {
    cfg.selector = SelectorKind::fixed;
    cfg.value = parse_number(sel.substr(3), ctx);
    if (!(cfg.value >= 0.0))
      throw std::invalid_argument(ctx + ": nu must be non-negative");
  } else if (sel.rfind("kappa=", 0) == 0 && vm) {
    cfg.selector = SelectorKind::fixed;
    cfg.value = parse_number(sel.substr(6), ctx);
    if (!(cfg.value > 0.0))
      throw std::invalid_argument(ctx + ": kappa must be positive");
  } else {
    throw std::invalid_argument(ctx + ": unknown selector '" + sel + "'");
  }
  return cfg;
}

std::vector<EstimatorConfig> parse_estimators(std::string_view spec)
{
  std::vector<EstimatorConfig> out;
  for (const auto& entry : split(spec, ';'))
    if (!entry.empty())
      out.push_back(parse_estimator(entry));
  return out;
}

FittedEstimator fit_configured(const EstimatorConfig& config, Sample sample, Correction correction)
{
  double chosen = config.value;
  bool boundary = false;
  if (config.selector == SelectorKind::er) {
    const auto r = er_selector(sample);
    chosen = r.chosen;
    boundary = r.at_boundary;
  } else if (config.selector == SelectorKind::lscv) {
    if (config.kernel == KernelFamily::vonmises) {
      const auto grid = default_kappa_grid();
      const auto r = lscv_von_mises(sample, grid);
      chosen = r.chosen;
      boundary = r.at_boundary;
    } else {
      const auto r = lscv_flat_top(sample, config.c);
      chosen = r.chosen;
      boundary = r.at_boundary;
    }
  }

  KernelSpec kernel;
  switch (config.kernel) {
    case KernelFamily::wsinc:
      kernel = wrapped_sinc(chosen);
      break;
    case KernelFamily::wtrap:
      kernel = wrapped_trapezoid(chosen, config.c);
      break;
    case KernelFamily::vonmises:
      kernel = VonMisesKernel{ chosen };
      break;
  }
  return { DensityEstimate::fit(std::move(sample), kernel, correction), chosen, boundary };
}

void validate(const SimulationConfig& config)
{
  find_scenario(config.scenario_id);
  if (config.reps < 1)
    throw std::invalid_argument("simulation: reps must be at least 1");
  if (config.n < 1)
    throw std::invalid_argument("simulation: n must be at least 1");
  if (config.ise_grid < 8)
    throw std::invalid_argument("simulation: ise_grid must be at least 8");
  if (config.threads < 0)
    throw std::invalid_argument("simulation: threads must be non-negative");
  for (const auto& e : config.estimators)
    if (e.selector != SelectorKind::fixed && config.n < 2)
      throw std::invalid_argument("simulation: data-driven selectors need n >= 2");
}

void summarize(EstimatorSummary& s)
{
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : s.ise)
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  if (count == 0) {
    s.mean_ise_1e4 = std::numeric_limits<double>::quiet_NaN();
    s.se_1e4 = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (double v : s.ise)
    if (std::isfinite(v))
      ss += (v - mean) * (v - mean);
  const double sd = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
  s.mean_ise_1e4 = mean * 1e4;
  s.se_1e4 = sd / std::sqrt(static_cast<double>(count)) * 1e4;
}

SimReport run_scenario(const SimulationConfig& config)
{
  validate(config);
  const ScenarioSpec& spec = find_scenario(config.scenario_id);
  const std::vector<double> truth =
    config.ise_method == IseMethod::quadrature ? truth_grid(spec, config.ise_grid) : std::vector<double>{};

  SimReport report;
  report.scenario_id = config.scenario_id;
  report.n = config.n;
  report.reps = config.reps;
  report.seed = config.seed;
  const std::size_t reps = static_cast<std::size_t>(config.reps);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : config.estimators) {
    EstimatorSummary s;
    s.config = e;
    s.ise.assign(reps, nan);
    s.selected.assign(reps, nan);
    report.estimators.push_back(std::move(s));
  }
  const std::size_t n_est = report.estimators.size();
  // Per (estimator, rep) outcome, written only by the worker owning rep.
  std::vector<char> boundary(n_est * reps, 0);
  std::vector<std::string> errors(n_est * reps);

  auto run_rep = [&](std::size_t rep) {
    Rng rng = Rng::substream(config.seed, rep);
    const Sample sample = mixture_sample(spec, rng, static_cast<std::size_t>(config.n));
    for (std::size_t j = 0; j < n_est; ++j) {
      try {
        const FittedEstimator fit = fit_configured(report.estimators[j].config, sample);
        const double v = config.ise_method == IseMethod::quadrature
                           ? ise_quadrature(fit.estimate, truth)
                           : ise_parseval(fit.estimate, spec).value;
        report.estimators[j].ise[rep] = v;
        report.estimators[j].selected[rep] = fit.selected;
        boundary[j * reps + rep] = fit.at_boundary ? 1 : 0;
      } catch (const std::exception& ex) {
        errors[j * reps + rep] = ex.what();
        if (errors[j * reps + rep].empty())
          errors[j * reps + rep] = "unknown failure";
      }
    }
  };

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r)
      run_rep(r);
  } else {
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < reps; r = next++)
          run_rep(r);
      });
    for (auto& t : pool)
      t.join();
  }

  for (std::size_t j = 0; j < n_est; ++j) {
    auto& s = report.estimators[j];
    for (std::size_t r = 0; r < reps; ++r) {
      if (!errors[j * reps + r].empty()) {
        s.failures.push_back({ static_cast<int>(r), errors[j * reps + r] });
        continue;
      }
      ++s.selected_histogram[s.selected[r]];
      s.boundary_count += boundary[j * reps + r];
    }
    summarize(s);
  }
  return report;
}

int theoretical_nu(std::string_view scenario_id, long n)
{
  if (scenario_id == "M1")
    return 0;
  if (scenario_id == "M4")
    return 1;
  if (scenario_id == "M3")
    return optimal_nu_exp(-std::log(0.9), 2.0, n);
  if (scenario_id == "M5")
    return optimal_nu_exp(-std::log(0.8), 1.0, n);
  throw std::invalid_argument("no theoretical nu rule for scenario '" + std::string(scenario_id) +
                              "' (M1, M3, M4, M5 only)");
}

double ls_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ls_slope: need two or more paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("ls_slope: x values are all equal");
  return sxy / sxx;
}

ConvergenceResult convergence_study(std::string_view scenario_id,
                                    std::span<const long> n_list,
                                    KernelFamily kernel,
                                    int c,
                                    int reps,
                                    std::uint64_t seed,
                                    int threads)
{
  if (kernel == KernelFamily::vonmises)
    throw std::invalid_argument("convergence_study: needs a flat-top kernel");
  ConvergenceResult out;
  out.scenario_id = std::string(scenario_id);
  std::vector<double> lx, ly;
  for (long n : n_list) {
    SimulationConfig cfg;
    cfg.scenario_id = out.scenario_id;
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.threads = threads;
    EstimatorConfig e;
    e.kernel = kernel;
    e.c = kernel == KernelFamily::wsinc ? 1 : c;
    e.selector = SelectorKind::fixed;
    e.value = theoretical_nu(scenario_id, n);
    cfg.estimators.push_back(e);
    const SimReport rep = run_scenario(cfg);
    const auto& s = rep.estimators.front();
    if (!s.failures.empty())
      throw NumericalError("convergence_study: repetition failed: " + s.failures.front().message);
    ConvergencePoint p{ n, static_cast<int>(e.value), s.mean_ise_1e4 / 1e4, s.se_1e4 / 1e4 };
    out.points.push_back(p);
    if (p.mean_ise > 0.0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(p.mean_ise));
    } else {
      out.degenerate = true;
    }
  }
  if (!out.degenerate && lx.size() >= 2)
    out.slope = ls_slope(lx, ly);
  return out;
}

void write_report(std::ostream& os, std::span<const SimReport> reports, ReportFormat format)
{
  if (format == ReportFormat::csv) {
    os << report_csv_header << '\n';
    for (const auto& r : reports)
      for (const auto& s : r.estimators)
        for (std::size_t i = 0; i < s.ise.size(); ++i)
          os << r.scenario_id << ',' << r.n << ',' << s.config.estimator_label() << ','
             << s.config.selector_label() << ',' << i << ',' << format_double(s.ise[i]) << ','
             << format_double(s.selected[i]) << '\n';
    return;
  }

  nlohmann::json doc;
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json jr;
    jr["scenario"] = r.scenario_id;
    jr["n"] = r.n;
    jr["reps"] = r.reps;
    jr["seed"] = r.seed;
    jr["estimators"] = nlohmann::json::array();
    for (const auto& s : r.estimators) {
      nlohmann::json je;
      je["estimator"] = s.config.estimator_label();
      je["selector"] = s.config.selector_label();
      je["spec"] = s.config.to_string();
      je["mean_ise_x1e4"] = finite_or_null(s.mean_ise_1e4);
      je["se_x1e4"] = finite_or_null(s.se_1e4);
      je["boundary_count"] = s.boundary_count;
      je["ise"] = nlohmann::json::array();
      je["selected_param"] = nlohmann::json::array();
      for (std::size_t i = 0; i < s.ise.size(); ++i) {
        je["ise"].push_back(finite_or_null(s.ise[i]));
        je["selected_param"].push_back(finite_or_null(s.selected[i]));
      }
      je["histogram"] = nlohmann::json::array();
      for (const auto& [value, count] : s.selected_histogram)
        je["histogram"].push_back({ { "value", value }, { "count", count } });
      je["failures"] = nlohmann::json::array();
      for (const auto& f : s.failures)
        je["failures"].push_back({ { "rep", f.rep }, { "message", f.message } });
      jr["estimators"].push_back(std::move(je));
    }
    doc["reports"].push_back(std::move(jr));
  }
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << doc.dump(2) << '\n';
}

void emit_report(std::span<const SimReport> reports, ReportFormat format, const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  write_report(out, reports, format);
  out.flush();
  if (!out)
    throw std::runtime_error("write to '" + path + "' failed");
}

void emit_report(const SimReport& report, ReportFormat format, const std::string& path)
{
  emit_report(std::span<const SimReport>(&report, 1), format, path);
}

std::vector<CsvSummary> read_report_csv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line) || trim(line) != report_csv_header)
    throw DataError("report CSV: missing or unexpected header");
  std::vector<CsvSummary> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (trim(line).empty())
      continue;
    const auto f = split(line, ',');
    if (f.size() != 7)
      throw DataError("report CSV: row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                      " fields, expected 7");
    const std::string ctx = "report CSV row " + std::to_string(row);
    const long n = static_cast<long>(parse_number(f[1], ctx));
    auto it = std::find_if(out.begin(), out.end(), [&](const CsvSummary& s) {
      return s.scenario_id == f[0] && s.n == n && s.estimator == f[2] && s.selector == f[3];
    });
    if (it == out.end()) {
      out.push_back({ f[0], n, f[2], f[3], {}, 0.0 });
      it = out.end() - 1;
    }
    it->ise.push_back(f[5] == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_number(f[5], ctx));
  }
  for (auto& s : out) {
    EstimatorSummary tmp;
    tmp.ise = s.ise;
    summarize(tmp);
    s.mean_ise_1e4 = tmp.mean_ise_1e4;
  }
  return out;
}

} // namespace circkde
