#include "cli.hpp"

#include "circkde/distributions.hpp"
#include "circkde/errors.hpp"
#include "circkde/io.hpp"
#include "circkde/mise_theory.hpp"
#include "circkde/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace circkde::cli {

namespace {

struct Globals
{
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output;
};

struct FitArgs
{
  std::string input;
  std::string column = "0";
  std::string unit = "radians";
  std::string direction = "counterclockwise";
  std::string kernel = "wsinc";
  double nu = -1.0;
  double kappa = -1.0;
  std::string select;
  int c = 0;
  std::string correction = "clip_renormalize";
  int grid = default_grid_size;
};

struct MiseArgs
{
  std::string scenario;
  std::string kernel = "wsinc";
  double nu = 0.0;
  int c = 0;
  long n = 100;
};

struct SimulateArgs
{
  std::string scenario;
  bool all = false;
  long n = 1000;
  int reps = 200;
  std::string estimators = "wsinc:er";
  std::string format = "csv";
  std::string ise_method = "quadrature";
  int grid = default_grid_size;
};

struct ConvergenceArgs
{
  std::string scenario;
  std::vector<long> n_list{ 50, 100, 200, 400, 800, 1600 };
  std::string kernel = "wsinc";
  int c = 0;
  int reps = 500;
};

int default_threads()
{
  if (const char* env = std::getenv("CIRCKDE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 0)
        return v;
    } catch (const std::exception&) {
    }
  }
  return 0;
}

int resolve_c(const std::string& kernel, int c)
{
  if (kernel == "wsinc") {
    if (c != 0 && c != 1)
      throw std::invalid_argument("--c: the wrapped sinc kernel has c = 1");
    return 1;
  }
  if (kernel == "wtrap") {
    if (c == 0)
      return 2;
    if (c < 2)
      throw std::invalid_argument("--c: the wrapped trapezoid kernel needs c >= 2");
    return c;
  }
  if (c != 0)
    throw std::invalid_argument("--c does not apply to the von Mises kernel");
  return 0;
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback)
{
  if (path.empty())
    return fallback;
  file.open(path);
  if (!file)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

int cmd_fit(const FitArgs& a, const Globals& g, std::ostream& out, std::ostream& err)
{
  const int chosen_modes = (a.nu >= 0.0) + (a.kappa >= 0.0) + !a.select.empty();
  if (chosen_modes != 1)
    throw std::invalid_argument("fit: give exactly one of --nu, --kappa or --select");
  const bool vm = a.kernel == "vonmises";
  if (vm && a.nu >= 0.0)
    throw std::invalid_argument("fit: --nu applies to flat-top kernels; use --kappa");
  if (!vm && a.kappa >= 0.0)
    throw std::invalid_argument("fit: --kappa applies to the von Mises kernel");
  if (vm && a.select == "er")
    throw std::invalid_argument("fit: the ER rule selects nu; use --select lscv with vonmises");
  if (a.grid < 8)
    throw std::invalid_argument("fit: --grid must be at least 8");

  const int c = resolve_c(a.kernel, a.c);
  std::string spec = a.kernel + ":";
  if (!a.select.empty()) {
    spec += a.select;
  } else {
    std::ostringstream os;
    os << std::setprecision(17) << (vm ? "kappa=" : "nu=") << (vm ? a.kappa : a.nu);
    spec += os.str();
  }
  if (a.kernel == "wtrap")
    spec += ":" + std::to_string(c);
  const EstimatorConfig cfg = parse_estimator(spec);
  const Correction correction = parse_correction(a.correction);

  ColumnRef column = a.column;
  if (!a.column.empty() && std::all_of(a.column.begin(), a.column.end(), ::isdigit))
    column = static_cast<std::size_t>(std::stoul(a.column));
  AngleDataset data = load_csv(a.input, column, parse_unit(a.unit), parse_direction(a.direction));
  if (cfg.selector != SelectorKind::fixed && data.n() < 2)
    throw DataError("fit: selectors need at least two observations");

  const std::size_t n = data.n();
  const FittedEstimator fit = fit_configured(cfg, std::move(data.angles), correction);
  out << (vm ? "kappa=" : "nu=") << fit.selected << '\n';
  out << "n=" << n << " kernel=" << describe(fit.estimate.kernel()) << '\n';
  if (fit.at_boundary)
    err << "warning: the " << a.select
        << " selector stopped at the end of its search range; the choice may be unreliable\n";
  if (!g.output.empty()) {
    export_density_grid(fit.estimate, a.grid, correction, g.output);
    out << "wrote " << a.grid << " grid points to " << g.output << '\n';
  }
  return exit_ok;
}

int cmd_mise(const MiseArgs& a, const Globals& g, std::ostream& out)
{
  if (a.kernel == "vonmises")
    throw std::invalid_argument("mise: exact MISE is available for flat-top kernels only");
  if (a.kernel != "wsinc" && a.kernel != "wtrap")
    throw std::invalid_argument("mise: unknown kernel '" + a.kernel + "'");
  if (a.n < 1 || a.nu < 0.0)
    throw std::invalid_argument("mise: need --n >= 1 and --nu >= 0");
  const int c = resolve_c(a.kernel, a.c);
  const ScenarioSpec& spec = find_scenario(a.scenario);
  const FlatTopKernel k = a.kernel == "wsinc" ? wrapped_sinc(a.nu) : wrapped_trapezoid(a.nu, c);
  const CharSeq f = characteristic_sequence(spec, static_cast<int>(k.max_frequency()));
  const MiseReport r = exact_mise(f, k, a.n);

  nlohmann::json j;
  j["scenario"] = spec.id;
  j["kernel"] = a.kernel;
  j["nu"] = a.nu;
  j["c"] = c;
  j["n"] = a.n;
  j["isb"] = r.isb;
  j["iv"] = r.iv;
  j["mise"] = r.mise;
  j["iv_bound"] = iv_bound(a.nu, c, a.n);
  j["truncation_index"] = r.truncation_index;
  j["truncation_tail_bound"] = r.truncation_tail_bound;
  std::ofstream file;
  open_output(g.output, file, out) << j.dump(2) << '\n';
  return exit_ok;
}

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out, std::ostream& err)
{
  if (a.all == !a.scenario.empty())
    throw std::invalid_argument("simulate: give exactly one of --scenario or --all");
  if (a.format != "csv" && a.format != "json")
    throw std::invalid_argument("simulate: --format must be csv or json");
  if (a.ise_method != "quadrature" && a.ise_method != "parseval")
    throw std::invalid_argument("simulate: --ise-method must be quadrature or parseval");

  std::vector<std::string> ids;
  if (a.all)
    for (const auto& s : scenario_catalog())
      ids.push_back(s.id);
  else
    ids.push_back(find_scenario(a.scenario).id);

  std::vector<SimulationConfig> configs;
  const auto estimators = parse_estimators(a.estimators);
  for (const auto& id : ids) {
    SimulationConfig cfg;
    cfg.scenario_id = id;
    cfg.n = a.n;
    cfg.reps = a.reps;
    cfg.estimators = estimators;
    cfg.seed = g.seed;
    cfg.ise_grid = a.grid;
    cfg.ise_method = a.ise_method == "parseval" ? IseMethod::parseval : IseMethod::quadrature;
    cfg.threads = g.threads;
    validate(cfg);
    configs.push_back(std::move(cfg));
  }

  std::vector<SimReport> reports;
  for (const auto& cfg : configs)
    reports.push_back(run_scenario(cfg));

  const ReportFormat fmt = a.format == "json" ? ReportFormat::json : ReportFormat::csv;
  if (g.output.empty()) {
    write_report(out, reports, fmt);
  } else {
    emit_report(reports, fmt, g.output);
    out << std::fixed << std::setprecision(2);
    for (const auto& r : reports)
      for (const auto& s : r.estimators)
        out << r.scenario_id << " n=" << r.n << ' ' << s.config.to_string()
            << " mean_ise_x1e4=" << s.mean_ise_1e4 << " se_x1e4=" << s.se_1e4 << '\n';
  }
  for (const auto& r : reports)
    for (const auto& s : r.estimators) {
      if (!s.failures.empty())
        err << "warning: " << r.scenario_id << ' ' << s.config.to_string() << ": "
            << s.failures.size() << " repetition(s) failed, first: " << s.failures.front().message
            << '\n';
      if (s.boundary_count > 0)
        err << "warning: " << r.scenario_id << ' ' << s.config.to_string() << ": selector hit its "
            << "search limit in " << s.boundary_count << " repetition(s)\n";
    }
  return exit_ok;
}

int cmd_scenarios(const Globals& g, std::ostream& out)
{
  std::ofstream file;
  std::ostream& os = open_output(g.output, file, out);
  for (const auto& s : scenario_catalog()) {
    os << s.id << "  " << s.name << '\n';
    for (const auto& c : s.components) {
      std::ostringstream w;
      w << std::setprecision(4) << c.weight;
      os << "    " << std::setw(6) << std::left << w.str() << std::right << describe(c.dist) << '\n';
    }
  }
  return exit_ok;
}

int cmd_convergence(const ConvergenceArgs& a, const Globals& g, std::ostream& out)
{
  if (a.kernel != "wsinc" && a.kernel != "wtrap")
    throw std::invalid_argument("convergence: --kernel must be wsinc or wtrap");
  if (a.reps < 1 || a.n_list.size() < 2)
    throw std::invalid_argument("convergence: need --reps >= 1 and two or more sample sizes");
  for (long n : a.n_list)
    if (n < 1)
      throw std::invalid_argument("convergence: sample sizes must be positive");
  const int c = resolve_c(a.kernel, a.c);
  find_scenario(a.scenario);
  const KernelFamily family = a.kernel == "wsinc" ? KernelFamily::wsinc : KernelFamily::wtrap;
  const ConvergenceResult r =
    convergence_study(a.scenario, a.n_list, family, c, a.reps, g.seed, g.threads);

  std::ofstream file;
  std::ostream& os = open_output(g.output, file, out);
  os << "n,nu,mean_ise,se\n" << std::setprecision(10);
  for (const auto& p : r.points)
    os << p.n << ',' << p.nu << ',' << p.mean_ise << ',' << p.se << '\n';
  if (r.slope)
    os << "# slope " << *r.slope << '\n';
  else
    os << "# slope undefined: zero mean ISE (exact recovery)\n";
  return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Wrapped flat-top kernel density estimation for circular data", "circkde" };
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.threads = default_threads();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores; default from CIRCKDE_THREADS)")
    ->check(CLI::NonNegativeNumber);
  app.add_option("-o,--output", g.output, "Output file");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a density to one CSV column and export a grid");
  fit_cmd->add_option("--input", fit.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--column", fit.column, "Column name or zero-based index")->capture_default_str();
  fit_cmd->add_option("--unit", fit.unit, "radians | degrees")
    ->check(CLI::IsMember({ "radians", "degrees" }))
    ->capture_default_str();
  fit_cmd->add_option("--direction", fit.direction, "counterclockwise | clockwise_from_north")
    ->check(CLI::IsMember({ "counterclockwise", "clockwise_from_north" }))
    ->capture_default_str();
  fit_cmd->add_option("--kernel", fit.kernel, "wsinc | wtrap | vonmises")
    ->check(CLI::IsMember({ "wsinc", "wtrap", "vonmises" }))
    ->capture_default_str();
  auto* nu_opt = fit_cmd->add_option("--nu", fit.nu, "Fixed smoothing parameter nu")->check(CLI::NonNegativeNumber);
  auto* kappa_opt = fit_cmd->add_option("--kappa", fit.kappa, "Fixed von Mises concentration")
                      ->check(CLI::PositiveNumber);
  auto* select_opt = fit_cmd->add_option("--select", fit.select, "lscv | er")
                       ->check(CLI::IsMember({ "lscv", "er" }));
  nu_opt->excludes(select_opt)->excludes(kappa_opt);
  kappa_opt->excludes(select_opt);
  fit_cmd->add_option("--c", fit.c, "Taper ratio of the trapezoid kernel (default 2)");
  fit_cmd->add_option("--correction", fit.correction, "none | clip | clip_renormalize")
    ->check(CLI::IsMember({ "none", "clip", "clip_renormalize" }))
    ->capture_default_str();
  fit_cmd->add_option("--grid", fit.grid, "Export grid size")->capture_default_str();

  MiseArgs mise;
  auto* mise_cmd = app.add_subcommand("mise", "Exact MISE of a flat-top estimator (JSON)");
  mise_cmd->add_option("--scenario", mise.scenario, "M1..M20")->required();
  mise_cmd->add_option("--kernel", mise.kernel, "wsinc | wtrap")->capture_default_str();
  mise_cmd->add_option("--nu", mise.nu, "Smoothing parameter")->required();
  mise_cmd->add_option("--c", mise.c, "Taper ratio (wtrap, default 2)");
  mise_cmd->add_option("--n", mise.n, "Sample size")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo ISE study");
  auto* sc_opt = sim_cmd->add_option("--scenario", sim.scenario, "M1..M20");
  auto* all_opt = sim_cmd->add_flag("--all", sim.all, "Run all twenty scenarios");
  sc_opt->excludes(all_opt);
  sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps, "Repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd
    ->add_option("--estimators",
                 sim.estimators,
                 "Semicolon-separated kernel:selector-or-value[:c], e.g. 'wsinc:er;wtrap:lscv:2'")
    ->capture_default_str();
  sim_cmd->add_option("--format", sim.format, "csv | json")->capture_default_str();
  sim_cmd->add_option("--ise-method", sim.ise_method, "quadrature | parseval")->capture_default_str();
  sim_cmd->add_option("--grid", sim.grid, "ISE quadrature grid")->capture_default_str();

  auto* scen_cmd = app.add_subcommand("scenarios", "List the benchmark scenarios");

  ConvergenceArgs conv;
  auto* conv_cmd = app.add_subcommand("convergence", "Log-log MISE slope with the theoretical nu rule");
  conv_cmd->add_option("--scenario", conv.scenario, "M1, M3, M4 or M5")->required();
  conv_cmd->add_option("--n-list", conv.n_list, "Sample sizes")->delimiter(',');
  conv_cmd->add_option("--kernel", conv.kernel, "wsinc | wtrap")->capture_default_str();
  conv_cmd->add_option("--c", conv.c, "Taper ratio (wtrap, default 2)");
  conv_cmd->add_option("--reps", conv.reps, "Repetitions per n")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    if (*fit_cmd)
      return cmd_fit(fit, g, out, err);
    if (*mise_cmd)
      return cmd_mise(mise, g, out);
    if (*sim_cmd)
      return cmd_simulate(sim, g, out, err);
    if (*scen_cmd)
      return cmd_scenarios(g, out);
    if (*conv_cmd)
      return cmd_convergence(conv, g, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return exit_data;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_data;
  }
  return exit_usage;
}

} // namespace circkde::cli
