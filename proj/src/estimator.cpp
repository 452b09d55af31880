#include "circkde/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circkde {

DensityEstimate DensityEstimate::fit(Sample sample,
                                     KernelSpec kernel,
                                     Correction correction)
{
  if (sample.empty())
    throw std::invalid_argument("fit: empty sample");
  if (const auto* ft = std::get_if<FlatTopKernel>(&kernel))
    ft->validate();
  else if (!(std::get<VonMisesKernel>(kernel).kappa > 0.0))
    throw std::invalid_argument("fit: kappa must be positive");

  DensityEstimate est;
  est.sample_ = std::move(sample);
  est.kernel_ = kernel;
  est.correction_ = correction;

  if (const auto* ft = std::get_if<FlatTopKernel>(&est.kernel_)) {
    const long top = ft->max_frequency();
    est.ecf_ = ecf_sums(est.sample_, static_cast<int>(top));
    const double inv_n = 1.0 / static_cast<double>(est.sample_.size());
    for (auto& s : est.ecf_)
      s *= inv_n;
    est.kernel_coeffs_.resize(static_cast<std::size_t>(top) + 1);
    for (long t = 0; t <= top; ++t)
      est.kernel_coeffs_[t] = char_wft(t, *ft);
  }

  if (correction == Correction::clip_renormalize)
    est.xi_ = correct_grid(est.eval_grid(default_grid_size), correction).xi;
  return est;
}

bool DensityEstimate::is_flat_top() const noexcept
{
  return std::holds_alternative<FlatTopKernel>(kernel_);
}

double DensityEstimate::eval_direct(double theta) const
{
  double sum = 0.0;
  if (const auto* ft = std::get_if<FlatTopKernel>(&kernel_)) {
    for (const Angle& a : sample_)
      sum += eval_flat_top(theta - a.value(), *ft);
  } else {
    const double kappa = std::get<VonMisesKernel>(kernel_).kappa;
    const double log_norm = log_bessel_i(0, kappa);
    for (const Angle& a : sample_)
      sum += std::exp(kappa * std::cos(theta - a.value()) - log_norm);
    sum /= two_pi;
  }
  return sum / static_cast<double>(sample_.size());
}

double DensityEstimate::eval_fourier(double theta) const
{
  if (!is_flat_top())
    throw std::logic_error(
      "eval_fourier: the von Mises kernel has infinite spectral support");
  double sum = 1.0;
  for (std::size_t t = 1; t < ecf_.size(); ++t) {
    const std::complex<double> rot = std::polar(1.0, -static_cast<double>(t) * theta);
    sum += 2.0 * kernel_coeffs_[t] * (ecf_[t] * rot).real();
  }
  return sum / two_pi;
}

double DensityEstimate::eval_raw(double theta) const
{
  return is_flat_top() ? eval_fourier(theta) : eval_direct(theta);
}

double DensityEstimate::operator()(double theta) const
{
  const double raw = eval_raw(theta);
  switch (correction_) {
    case Correction::none:
      return raw;
    case Correction::clip:
      return std::max(0.0, raw);
    case Correction::clip_renormalize:
      return std::max(0.0, raw - xi_);
  }
  return raw;
}

std::vector<double> DensityEstimate::eval_grid(int grid_size) const
{
  if (grid_size <= 0)
    throw std::invalid_argument("eval_grid: grid_size must be positive");
  std::vector<double> out(static_cast<std::size_t>(grid_size));
  const double h = two_pi / grid_size;
  if (!is_flat_top()) {
    for (int k = 0; k < grid_size; ++k)
      out[k] = eval_direct(h * k);
    return out;
  }
  // e^{-i t theta_k} = w^{(t k) mod G}
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j)
    roots[j] = std::polar(1.0, -h * j);
  std::vector<std::complex<double>> weighted(ecf_.size());
  for (std::size_t t = 0; t < ecf_.size(); ++t)
    weighted[t] = 2.0 * kernel_coeffs_[t] * ecf_[t];
  for (int k = 0; k < grid_size; ++k) {
    double sum = 1.0;
    long idx = 0;
    for (std::size_t t = 1; t < weighted.size(); ++t) {
      idx += k;
      if (idx >= grid_size)
        idx %= grid_size;
      sum += (weighted[t] * roots[idx]).real();
    }
    out[k] = sum / two_pi;
  }
  return out;
}

CorrectedGrid correct_grid(std::span<const double> raw, Correction mode)
{
  if (raw.empty())
    throw std::invalid_argument("correct_grid: empty grid");
  CorrectedGrid out;
  out.theta = uniform_grid(static_cast<int>(raw.size()));
  out.density.assign(raw.begin(), raw.end());

  const double lowest = *std::min_element(raw.begin(), raw.end());
  if (mode == Correction::none || lowest >= 0.0)
    return out;
  for (double& v : out.density)
    v = std::max(0.0, v);
  if (mode == Correction::clip)
    return out;

  auto mass = [&](double xi) {
    double s = 0.0;
    for (double v : raw)
      s += std::max(0.0, v - xi);
    return s * two_pi / static_cast<double>(raw.size());
  };
  double lo = 0.0;
  double hi = *std::max_element(raw.begin(), raw.end());
  if (mass(lo) > 1.0) {
    // mass is continuous and non-increasing in xi with mass(hi) = 0
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double m = mass(mid);
      if (std::abs(m - 1.0) <= 1e-13) {
        lo = hi = mid;
        break;
      }
      (m > 1.0 ? lo : hi) = mid;
      if (hi - lo <= 1e-16 * std::max(1.0, hi))
        break;
    }
    out.xi = 0.5 * (lo + hi);
  }
  for (std::size_t k = 0; k < raw.size(); ++k)
    out.density[k] = std::max(0.0, raw[k] - out.xi);
  return out;
}

CorrectedGrid correct_nonneg(const DensityEstimate& estimate,
                             Correction mode,
                             int grid_size)
{
  return correct_grid(estimate.eval_grid(grid_size), mode);
}

} // namespace circkde
