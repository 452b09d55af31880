#include "circkde/mise_theory.hpp"

#include "circkde/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace circkde {

namespace {

constexpr double negligible_tail = 1e-12;

void check_coverage(const CharSeq& f, const FlatTopKernel& kernel)
{
  kernel.validate();
  if (f.coeffs.empty())
    throw std::invalid_argument("empty characteristic sequence");
  if (f.max_index() < kernel.max_frequency() && f.truncated && f.tail_sum > negligible_tail) {
    std::ostringstream os;
    os << "density coefficients end at t = " << f.max_index() << " but the kernel reaches t = "
       << kernel.max_frequency() << " (tail bound " << f.tail_sum << ")";
    throw NumericalError(os.str());
  }
}

//! log_weight(t) is log w(t); the product w(t) |phi_t|^2 is formed in log
//! space so large weights on tiny coefficients do not overflow.
SeriesConstant weighted_series(const CharSeq& f, const std::function<double(double)>& log_weight)
{
  if (f.coeffs.empty())
    throw std::invalid_argument("empty characteristic sequence");
  const int top = f.max_index();
  std::vector<double> terms(static_cast<std::size_t>(top) + 1, 0.0);
  double partial = 0.0;
  for (int t = 1; t <= top; ++t) {
    const double power = std::norm(f.coeffs[t]);
    terms[t] = power > 0.0 ? std::exp(log_weight(t) + std::log(power)) : 0.0;
    if (!std::isfinite(terms[t]))
      throw NumericalError("weighted coefficient series overflowed at t = " + std::to_string(t));
    partial += terms[t];
  }

  SeriesConstant out;
  out.terms = top + 1;
  if (f.truncated) {
    constexpr int window = 10;
    double last = 0.0, prev = 0.0;
    for (int t = std::max(1, top - window + 1); t <= top; ++t)
      last += terms[t];
    for (int t = std::max(1, top - 2 * window + 1); t <= top - window; ++t)
      prev += terms[t];
    const auto diverging = [&] {
      return NumericalError("weighted coefficient series: divergence suspected (last-window "
                            "contributions not decreasing at t = " +
                            std::to_string(top) + ")");
    };
    if (last > 0.0 && last >= prev)
      throw diverging();
    // Fit terms ~ t^{-p} through the two windows and integrate past the end.
    // Exact for power laws; vanishing for geometric or faster decay.
    double p = 0.0;
    const bool extrapolate = last > 0.0 && top >= 2 * window;
    const double c1 = top - 0.5 * (window - 1);
    if (extrapolate) {
      p = std::log(prev / last) / std::log(c1 / (c1 - window));
      if (!(p > 1.0))
        throw diverging();
    }
    if (!(last <= 1e-6 * partial))
      throw NumericalError("weighted coefficient series not converged at t = " +
                           std::to_string(top) + "; extend the coefficient range");
    if (extrapolate) {
      const double per_index = last / window;
      const double tail = per_index * top * std::exp(p * std::log(c1 / top)) / (p - 1.0);
      out.tail_estimate = 2.0 * tail / two_pi;
    }
  }
  const double zero_term = std::exp(log_weight(0.0)) * std::norm(f.coeffs[0]);
  out.value = (zero_term + 2.0 * partial) / two_pi + out.tail_estimate;
  return out;
}

} // namespace

double exact_isb(const CharSeq& f, const FlatTopKernel& kernel)
{
  check_coverage(f, kernel);
  double sum = 0.0;
  for (int t = 1; t <= f.max_index(); ++t) {
    const double gap = 1.0 - char_wft(t, kernel);
    sum += std::norm(f.coeffs[t]) * gap * gap;
  }
  if (f.truncated)
    sum += f.tail_sum;
  return 2.0 * sum / two_pi;
}

double exact_iv(const CharSeq& f, const FlatTopKernel& kernel, long n)
{
  if (n < 1)
    throw std::invalid_argument("exact_iv: n must be positive");
  check_coverage(f, kernel);
  double sum = 0.0;
  const long top = kernel.max_frequency();
  for (long t = 1; t <= top; ++t) {
    const double k = char_wft(t, kernel);
    sum += k * k * (1.0 - f.power(t));
  }
  return 2.0 * sum / (two_pi * static_cast<double>(n));
}

MiseReport exact_mise(const CharSeq& f, const FlatTopKernel& kernel, long n)
{
  MiseReport r;
  r.isb = exact_isb(f, kernel);
  r.iv = exact_iv(f, kernel, n);
  r.mise = r.isb + r.iv;
  r.truncation_index = f.max_index();
  r.truncation_tail_bound = f.truncated ? f.tail_sum : 0.0;
  return r;
}

double iv_bound(double nu, int c, long n)
{
  if (n < 1)
    throw std::invalid_argument("iv_bound: n must be positive");
  return c * nu / (pi * static_cast<double>(n));
}

SeriesConstant smoothness_const_C_r(const CharSeq& f, double r)
{
  if (!(r > 0.0))
    throw std::invalid_argument("C_r: r must be positive");
  return weighted_series(f, [r](double t) {
    return t == 0.0 ? -std::numeric_limits<double>::infinity() : 2.0 * r * std::log(t);
  });
}

SeriesConstant exp_const_I(const CharSeq& f, double alpha, double tau)
{
  if (!(alpha > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("I_{alpha,tau}: alpha and tau must be positive");
  return weighted_series(f, [=](double t) { return tau * std::pow(t, alpha); });
}

double isb_bound_poly(double c_r, double r, double nu)
{
  if (!(nu > 0.0))
    throw std::invalid_argument("isb_bound_poly: nu must be positive");
  return c_r / std::pow(nu, 2.0 * r);
}

double isb_bound_exp(double i_const, double alpha, double tau, double nu)
{
  if (!(nu >= 0.0))
    throw std::invalid_argument("isb_bound_exp: nu must be non-negative");
  return i_const * std::exp(-tau * std::pow(nu, alpha));
}

double optimal_nu_poly(double r, double c_r, int c, long n)
{
  if (!(r > 0.0) || !(c_r > 0.0) || c < 1 || n < 1)
    throw std::invalid_argument("optimal_nu_poly: need r > 0, C_r > 0, c >= 1, n >= 1");
  return std::pow(two_pi * r * c_r * static_cast<double>(n) / c, 1.0 / (2.0 * r + 1.0));
}

int optimal_nu_exp(double tau, double alpha, long n)
{
  if (!(tau > 0.0) || !(alpha > 0.0) || n < 1)
    throw std::invalid_argument("optimal_nu_exp: need tau > 0, alpha > 0, n >= 1");
  return static_cast<int>(std::floor(std::pow(std::log(static_cast<double>(n)) / tau, 1.0 / alpha)));
}

} // namespace circkde
