#pragma once

#include "circkde/distributions.hpp"
#include "circkde/estimator.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace circkde {

enum class IseMethod
{
  quadrature,
  parseval,
};

struct IseValue
{
  double value = 0.0;
  //! Parseval only: truth power beyond the summed range.
  double tail_bound = 0.0;
};

//! Integrated squared error of the raw estimate against a scenario density.
//! quadrature: trapezoid rule on `grid_size` points. parseval:
//! (2pi)^{-1} sum_t |phi_t(K) phi-hat_t - phi_t(f)|^2, refused with
//! NumericalError when the truth's coefficients cannot be resolved.
double ise(const DensityEstimate& estimate,
           const ScenarioSpec& truth,
           int grid_size = default_grid_size,
           IseMethod method = IseMethod::quadrature);

IseValue ise_detail(const DensityEstimate& estimate,
                    const ScenarioSpec& truth,
                    int grid_size = default_grid_size,
                    IseMethod method = IseMethod::quadrature);

enum class KernelFamily
{
  wsinc,
  wtrap,
  vonmises,
};

enum class SelectorKind
{
  fixed,
  er,
  lscv,
};

//! One estimator/selector pairing. Grammar of the string form:
//!   kernel:selector-or-value[:c]
//! e.g. "wsinc:er", "wtrap:lscv:2", "wsinc:nu=4", "vonmises:kappa=5".
struct EstimatorConfig
{
  KernelFamily kernel = KernelFamily::wsinc;
  SelectorKind selector = SelectorKind::er;
  //! nu (flat-top) or kappa (von Mises) when selector is fixed.
  double value = 0.0;
  //! 1 for wsinc; >= 2 for wtrap; unused for von Mises.
  int c = 1;

  std::string estimator_label() const;
  std::string selector_label() const;
  std::string to_string() const;
};

//! Throws std::invalid_argument naming the bad entry.
EstimatorConfig parse_estimator(std::string_view entry);
//! Semicolon-separated list; empty entries are skipped.
std::vector<EstimatorConfig> parse_estimators(std::string_view spec);

struct FittedEstimator
{
  DensityEstimate estimate;
  double selected = 0.0;
  bool at_boundary = false;
};

//! Runs the configured selector (if any) and fits the raw estimate.
FittedEstimator fit_configured(const EstimatorConfig& config,
                               Sample sample,
                               Correction correction = Correction::none);

struct SimulationConfig
{
  std::string scenario_id;
  long n = 100;
  int reps = 200;
  std::vector<EstimatorConfig> estimators;
  std::uint64_t seed = 0;
  int ise_grid = default_grid_size;
  IseMethod ise_method = IseMethod::quadrature;
  //! Worker count; 0 uses the hardware concurrency.
  int threads = 0;
};

//! Throws std::invalid_argument.
void validate(const SimulationConfig& config);

struct RepFailure
{
  int rep = 0;
  std::string message;
};

struct EstimatorSummary
{
  EstimatorConfig config;
  //! Per repetition; NaN where the repetition failed.
  std::vector<double> ise;
  std::vector<double> selected;
  double mean_ise_1e4 = 0.0;
  //! sd / sqrt(successful reps), times 1e4.
  double se_1e4 = 0.0;
  std::map<double, int> selected_histogram;
  //! Repetitions where the selector stopped at its search limit.
  int boundary_count = 0;
  std::vector<RepFailure> failures;
};

struct SimReport
{
  std::string scenario_id;
  long n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<EstimatorSummary> estimators;
};

//! Repetition r draws from Rng::substream(seed, r); results are stored by
//! repetition index, so the report does not depend on the worker count.
SimReport run_scenario(const SimulationConfig& config);

//! mean and SE (x1e4) of the finite entries.
void summarize(EstimatorSummary& summary);

//! nu rule for the convergence study: 0 (M1), 1 (M4), and the
//! exponential-decay rule for M3 (tau = -log 0.9, alpha = 2) and M5
//! (tau = -log 0.8, alpha = 1).
int theoretical_nu(std::string_view scenario_id, long n);

struct ConvergencePoint
{
  long n = 0;
  int nu = 0;
  double mean_ise = 0.0;
  double se = 0.0;
};

struct ConvergenceResult
{
  std::string scenario_id;
  std::vector<ConvergencePoint> points;
  //! Least-squares slope of log(mean ISE) on log(n); empty when degenerate.
  std::optional<double> slope;
  //! Some mean ISE is zero, e.g. exact recovery of the uniform density.
  bool degenerate = false;
};

ConvergenceResult convergence_study(std::string_view scenario_id,
                                    std::span<const long> n_list,
                                    KernelFamily kernel,
                                    int c,
                                    int reps,
                                    std::uint64_t seed,
                                    int threads = 0);

//! Least-squares slope of y on x.
double ls_slope(std::span<const double> x, std::span<const double> y);

enum class ReportFormat
{
  csv,
  json,
};

//! CSV header: scenario,n,estimator,selector,rep,ise,selected_param.
//! One row per (report, estimator, repetition); failed repetitions carry
//! "nan". JSON holds the summaries plus the per-rep lists.
void write_report(std::ostream& os, std::span<const SimReport> reports, ReportFormat format);
//! Throws std::runtime_error naming the path on I/O failure.
void emit_report(std::span<const SimReport> reports, ReportFormat format, const std::string& path);
void emit_report(const SimReport& report, ReportFormat format, const std::string& path);

inline constexpr std::string_view report_csv_header =
  "scenario,n,estimator,selector,rep,ise,selected_param";

struct CsvSummary
{
  std::string scenario_id;
  long n = 0;
  std::string estimator;
  std::string selector;
  std::vector<double> ise;
  double mean_ise_1e4 = 0.0;
};

//! Parses the CSV form back, grouping rows in order of first appearance.
std::vector<CsvSummary> read_report_csv(std::istream& is);

} // namespace circkde
