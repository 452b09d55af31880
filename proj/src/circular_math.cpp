#include "circkde/circular_math.hpp"

#include "circkde/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace circkde {

Angle::Angle(double radians)
{
  if (!std::isfinite(radians))
    throw std::invalid_argument("angle must be finite");
  double r = std::fmod(radians, two_pi);
  if (r < 0.0)
    r += two_pi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi
  if (r >= two_pi)
    r = 0.0;
  value_ = r;
}

Angle wrap_angle(double x)
{
  return Angle(x);
}

Sample to_sample(std::span<const double> radians)
{
  Sample out;
  out.reserve(radians.size());
  for (double x : radians)
    out.emplace_back(x);
  return out;
}

std::complex<double> CharSeq::at(long t) const
{
  const long a = t < 0 ? -t : t;
  if (a > max_index())
    return {0.0, 0.0};
  const auto c = coeffs[static_cast<std::size_t>(a)];
  return t < 0 ? std::conj(c) : c;
}

namespace {

constexpr int bessel_max_terms = 500;
constexpr double bessel_rel_cutoff = 1e-16;

// Sum of the series divided by its first term.
double bessel_scaled_series(int order, double x)
{
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < bessel_max_terms; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + order));
    if (term < bessel_rel_cutoff * sum)
      break;
    sum += term;
  }
  return sum;
}

void check_bessel_args(int order, double x)
{
  if (order < 0)
    throw std::invalid_argument("bessel_i: order must be non-negative");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument("bessel_i: x must be finite and non-negative");
}

} // namespace

double bessel_i(int order, double x)
{
  check_bessel_args(order, x);
  if (x == 0.0)
    return order == 0 ? 1.0 : 0.0;
  const double log_first = order * std::log(0.5 * x) - std::lgamma(order + 1.0);
  const double first = std::exp(log_first);
  if (!std::isfinite(first))
    throw NumericalError("bessel_i overflow at order " + std::to_string(order) +
                         ", x = " + std::to_string(x));
  const double value = first * bessel_scaled_series(order, x);
  if (!std::isfinite(value))
    throw NumericalError("bessel_i overflow at order " + std::to_string(order) +
                         ", x = " + std::to_string(x));
  return value;
}

double log_bessel_i(int order, double x)
{
  check_bessel_args(order, x);
  if (x == 0.0)
    return order == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double series = bessel_scaled_series(order, x);
  if (!std::isfinite(series))
    throw NumericalError("log_bessel_i overflow at x = " + std::to_string(x));
  return order * std::log(0.5 * x) - std::lgamma(order + 1.0) + std::log(series);
}

CharSeq fourier_coeffs_numeric(const std::function<double(double)>& density,
                               int max_index,
                               int grid_size)
{
  if (max_index < 0)
    throw std::invalid_argument("fourier_coeffs_numeric: max_index < 0");
  if (grid_size < 4 * max_index || grid_size < 8)
    throw std::invalid_argument(
      "fourier_coeffs_numeric: grid_size must be >= 4 * max_index and >= 8");

  std::vector<double> values(static_cast<std::size_t>(grid_size));
  const double h = two_pi / grid_size;
  for (int k = 0; k < grid_size; ++k)
    values[k] = density(h * k);

  CharSeq out;
  out.truncated = true;
  out.coeffs.resize(static_cast<std::size_t>(max_index) + 1);
  for (int t = 0; t <= max_index; ++t) {
    std::complex<double> acc{ 0.0, 0.0 };
    for (int k = 0; k < grid_size; ++k) {
      // t * k reduced mod G keeps the phase argument small
      const long idx = (static_cast<long>(t) * k) % grid_size;
      acc += values[k] * std::polar(1.0, h * static_cast<double>(idx));
    }
    out.coeffs[t] = h * acc;
  }
  if (std::abs(out.coeffs[0] - 1.0) > 1e-6)
    throw std::invalid_argument(
      "fourier_coeffs_numeric: input does not integrate to 1 (phi_0 = " +
      std::to_string(out.coeffs[0].real()) + ")");

  // Extrapolate from the last two windows of coefficients, both as a
  // geometric and as a power-law decay; keep the larger remainder.
  const int w = std::max(1, max_index / 10);
  double last = 0.0, prev = 0.0;
  for (int t = max_index - w + 1; t <= max_index; ++t)
    if (t >= 1)
      last += std::norm(out.coeffs[t]);
  for (int t = max_index - 2 * w + 1; t <= max_index - w; ++t)
    if (t >= 1)
      prev += std::norm(out.coeffs[t]);
  out.tail_sum = last;
  if (prev > 0.0 && last > 0.0 && last < prev && max_index - 2 * w >= 1) {
    const double q = last / prev;
    const double geometric = last * q / (1.0 - q);
    const double c1 = max_index - (w - 1) / 2.0;
    const double p = std::log(prev / last) / std::log(c1 / (c1 - w));
    const double top = max_index + 0.5;
    const double power =
      p > 1.0 ? (last / w) * std::pow(c1 / top, p) * top / (p - 1.0) : last * max_index;
    out.tail_sum = std::max(geometric, power);
  }
  return out;
}

std::complex<double> ecf(std::span<const Angle> sample, long t)
{
  if (sample.empty())
    throw std::invalid_argument("ecf: empty sample");
  std::complex<double> acc{ 0.0, 0.0 };
  for (const Angle& a : sample)
    acc += std::polar(1.0, static_cast<double>(t) * a.value());
  return acc / static_cast<double>(sample.size());
}

std::vector<std::complex<double>> ecf_sums(std::span<const Angle> sample,
                                           int max_index)
{
  if (max_index < 0)
    throw std::invalid_argument("ecf_sums: max_index < 0");
  std::vector<std::complex<double>> sums(static_cast<std::size_t>(max_index) + 1,
                                         { 0.0, 0.0 });
  for (const Angle& a : sample) {
    const std::complex<double> step = std::polar(1.0, a.value());
    std::complex<double> z{ 1.0, 0.0 };
    sums[0] += z;
    for (int t = 1; t <= max_index; ++t) {
      z *= step;
      sums[t] += z;
    }
  }
  return sums;
}

double trapezoid_integral(std::span<const double> values)
{
  if (values.empty())
    throw std::invalid_argument("trapezoid_integral: empty grid");
  double sum = 0.0;
  for (double v : values)
    sum += v;
  return sum * two_pi / static_cast<double>(values.size());
}

std::vector<double> uniform_grid(int grid_size)
{
  if (grid_size <= 0)
    throw std::invalid_argument("uniform_grid: grid_size must be positive");
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k)
    grid[k] = two_pi * k / grid_size;
  return grid;
}

} // namespace circkde
