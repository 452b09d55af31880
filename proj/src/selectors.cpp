#include "circkde/selectors.hpp"

#include "circkde/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circkde {

namespace {

void require_two(std::span<const Angle> sample, const char* who)
{
  if (sample.size() < 2)
    throw std::invalid_argument(std::string(who) + ": need at least 2 observations");
}

// |S_t|^2 for t = 0..top.
std::vector<double> sum_powers(std::span<const Angle> sample, long top)
{
  const auto sums = ecf_sums(sample, static_cast<int>(top));
  std::vector<double> out(sums.size());
  for (std::size_t t = 0; t < sums.size(); ++t)
    out[t] = std::norm(sums[t]);
  return out;
}

double spectral_cv(std::span<const double> powers, double n, const FlatTopKernel& kernel)
{
  const double loo = 2.0 / (n * (n - 1.0));
  // t = 0: k = 1 and |S_0|^2 = n^2
  double sum = 1.0 - loo * (n * n - n);
  const long top = kernel.max_frequency();
  for (long t = 1; t <= top; ++t) {
    const double k = char_wft(t, kernel);
    sum += 2.0 * (k * k * powers[t] / (n * n) - loo * k * (powers[t] - n));
  }
  return sum / two_pi;
}

} // namespace

double lscv_criterion(std::span<const Angle> sample, double nu, int c)
{
  require_two(sample, "lscv_criterion");
  const FlatTopKernel kernel{ nu, c, Taper::linear };
  kernel.validate();
  const auto powers = sum_powers(sample, kernel.max_frequency());
  return spectral_cv(powers, static_cast<double>(sample.size()), kernel);
}

SelectorResult lscv_flat_top(std::span<const Angle> sample, int c, int cap)
{
  require_two(sample, "lscv_flat_top");
  if (c < 1)
    throw std::invalid_argument("lscv_flat_top: c must be >= 1");
  if (cap < 0)
    throw std::invalid_argument("lscv_flat_top: cap must be >= 0");

  const FlatTopKernel widest{ static_cast<double>(cap), c, Taper::linear };
  const auto powers = sum_powers(sample, widest.max_frequency());
  const double n = static_cast<double>(sample.size());

  SelectorResult result;
  double best = 0.0;
  for (int nu = 0; nu <= cap; ++nu) {
    const double cv = spectral_cv(powers, n, FlatTopKernel{ double(nu), c, Taper::linear });
    result.criterion_trace.emplace_back(nu, cv);
    if (nu == 0 || cv < best) {
      best = cv;
      result.chosen = nu;
    }
  }
  result.at_boundary = result.chosen == cap;
  return result;
}

SelectorResult er_selector(std::span<const Angle> sample, double m, int window, int nu_max)
{
  require_two(sample, "er_selector");
  if (!(m > 0.0) || window < 1 || nu_max < 0)
    throw std::invalid_argument("er_selector: need M > 0, window >= 1, nu_max >= 0");

  const double n = static_cast<double>(sample.size());
  const double threshold = m * std::log(n) / n;
  const auto powers = sum_powers(sample, static_cast<long>(nu_max) + window);

  SelectorResult result;
  result.chosen = nu_max;
  for (int nu = 0; nu <= nu_max; ++nu) {
    double worst = 0.0;
    for (int t = 1; t <= window; ++t)
      worst = std::max(worst, powers[nu + t] / (n * n));
    result.criterion_trace.emplace_back(nu, worst);
    if (worst < threshold) {
      result.chosen = nu;
      break;
    }
  }
  result.at_boundary = result.chosen == nu_max;
  return result;
}

std::vector<double> default_kappa_grid()
{
  constexpr int count = 40;
  const double lo = std::log(0.1);
  const double hi = std::log(500.0);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  return grid;
}

SelectorResult lscv_von_mises(std::span<const Angle> sample,
                              std::span<const double> kappa_grid)
{
  require_two(sample, "lscv_von_mises");
  if (kappa_grid.empty())
    throw std::invalid_argument("lscv_von_mises: empty kappa grid");
  for (double k : kappa_grid)
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument("lscv_von_mises: kappa values must be positive");

  const std::size_t n = sample.size();
  constexpr int quad_points = 512;
  const auto grid = uniform_grid(quad_points);

  // Pairwise and grid cosines are cached unless the sample is large.
  const bool cache = n <= 4000;
  std::vector<double> pair_cos;
  std::vector<double> grid_cos;
  if (cache) {
    pair_cos.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        pair_cos.push_back(std::cos(sample[i].value() - sample[j].value()));
    grid_cos.resize(quad_points * n);
    for (int k = 0; k < quad_points; ++k)
      for (std::size_t i = 0; i < n; ++i)
        grid_cos[k * n + i] = std::cos(grid[k] - sample[i].value());
  }
  auto cos_grid = [&](int k, std::size_t i) {
    return cache ? grid_cos[k * n + i] : std::cos(grid[k] - sample[i].value());
  };

  SelectorResult result;
  double best = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t g = 0; g < kappa_grid.size(); ++g) {
    const double kappa = kappa_grid[g];
    const double log_norm = log_bessel_i(0, kappa) + std::log(two_pi);

    std::vector<double> f(quad_points);
    for (int k = 0; k < quad_points; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += std::exp(kappa * cos_grid(k, i) - log_norm);
      f[k] = s / dn;
      f[k] *= f[k];
    }
    const double roughness = trapezoid_integral(f);

    double pair_sum = 0.0;
    if (cache) {
      for (double pc : pair_cos)
        pair_sum += std::exp(kappa * pc - log_norm);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          pair_sum += std::exp(kappa * std::cos(sample[i].value() - sample[j].value()) - log_norm);
    }
    // sum_i f_{-i}(Theta_i) = 2 / (n - 1) * sum_{i<j} K(Theta_i - Theta_j)
    const double loo = 2.0 * pair_sum / (dn - 1.0);
    const double cv = roughness - 2.0 / dn * loo;

    result.criterion_trace.emplace_back(kappa, cv);
    if (g == 0 || cv < best || (cv == best && kappa < result.chosen)) {
      best = cv;
      result.chosen = kappa;
    }
  }
  result.at_boundary =
    result.chosen == *std::max_element(kappa_grid.begin(), kappa_grid.end());
  return result;
}

} // namespace circkde
