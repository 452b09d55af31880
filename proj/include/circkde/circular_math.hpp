#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace circkde {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

//! Default number of points for every integral over the circle.
inline constexpr int default_grid_size = 1024;

//! A direction on the circle, always held in [0, 2pi).
class Angle
{
public:
  constexpr Angle() = default;
  //! Wraps `radians` into [0, 2pi); throws std::invalid_argument when it is
  //! not finite.
  explicit Angle(double radians);

  constexpr double value() const noexcept { return value_; }

  Angle operator+(double delta) const { return Angle(value_ + delta); }
  Angle operator-(double delta) const { return Angle(value_ - delta); }

  friend constexpr bool operator==(Angle, Angle) = default;

private:
  double value_ = 0.0;
};

using Sample = std::vector<Angle>;

Angle wrap_angle(double x);

Sample to_sample(std::span<const double> radians);

//! Fourier coefficients phi_t = int f(theta) e^{i t theta} dtheta for
//! t = 0..max_index. Negative indices are the complex conjugates.
struct CharSeq
{
  std::vector<std::complex<double>> coeffs;
  //! True when coefficients beyond max_index may be nonzero.
  bool truncated = false;
  //! Upper bound (or estimate, for numeric sequences) of
  //! sum_{t > max_index} |phi_t|^2. Zero when not truncated.
  double tail_sum = 0.0;

  int max_index() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

  //! phi_t for any integer t; zero beyond max_index.
  std::complex<double> at(long t) const;

  //! |phi_t|^2.
  double power(long t) const { return std::norm(at(t)); }
};

//! Modified Bessel function of the first kind I_order(x), by power series.
//! Throws NumericalError when the result overflows.
double bessel_i(int order, double x);

//! log I_order(x); finite wherever bessel_i is.
double log_bessel_i(int order, double x);

//! Coefficients phi_0..phi_max_index of a pointwise-evaluable density by
//! uniform-grid quadrature. Requires grid_size >= 4 * max_index; throws
//! std::invalid_argument when |phi_0 - 1| > 1e-6.
CharSeq fourier_coeffs_numeric(const std::function<double(double)>& density,
                               int max_index,
                               int grid_size = default_grid_size);

//! Empirical characteristic function n^{-1} sum_j e^{i t Theta_j}.
std::complex<double> ecf(std::span<const Angle> sample, long t);

//! Unnormalized sums S_t = sum_j e^{i t Theta_j} for t = 0..max_index.
std::vector<std::complex<double>> ecf_sums(std::span<const Angle> sample,
                                           int max_index);

//! Periodic trapezoid rule: (2pi / G) * sum(values).
double trapezoid_integral(std::span<const double> values);

//! Grid points 2pi k / G, k = 0..G-1.
std::vector<double> uniform_grid(int grid_size);

} // namespace circkde
