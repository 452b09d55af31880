#pragma once

#include "circkde/circular_math.hpp"
#include "circkde/kernels.hpp"

#include <complex>
#include <span>
#include <vector>

namespace circkde {

enum class Correction
{
  none,
  clip,             //!< max(0, f)
  clip_renormalize, //!< max(0, f - xi) with xi chosen so the integral is 1
};

//! Kernel density estimate n^{-1} sum_i K(theta - Theta_i), immutable once
//! fitted.
class DensityEstimate
{
public:
  //! Throws std::invalid_argument for an empty sample or an invalid kernel.
  static DensityEstimate fit(Sample sample,
                             KernelSpec kernel,
                             Correction correction = Correction::none);

  //! Raw estimate by summing closed-form kernels over the sample.
  double eval_direct(double theta) const;

  //! Raw estimate from the cached empirical coefficients. Flat-top only;
  //! throws std::logic_error for the von Mises kernel.
  double eval_fourier(double theta) const;

  //! Raw estimate by the default path (Fourier for flat-top, direct for
  //! von Mises).
  double eval_raw(double theta) const;

  //! Estimate with this object's correction applied.
  double operator()(double theta) const;

  //! Raw estimate on the uniform grid 2pi k / G.
  std::vector<double> eval_grid(int grid_size) const;

  const Sample& sample() const noexcept { return sample_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  Correction correction() const noexcept { return correction_; }
  bool is_flat_top() const noexcept;
  //! Shift used by clip_renormalize (0 otherwise).
  double shift() const noexcept { return xi_; }

  //! phi-hat_t = n^{-1} sum_j e^{i t Theta_j}, t = 0..max_frequency.
  std::span<const std::complex<double>> ecf() const noexcept { return ecf_; }

private:
  DensityEstimate() = default;

  Sample sample_;
  KernelSpec kernel_;
  Correction correction_ = Correction::none;
  std::vector<std::complex<double>> ecf_;
  std::vector<double> kernel_coeffs_;
  double xi_ = 0.0;
};

struct CorrectedGrid
{
  std::vector<double> theta;
  std::vector<double> density;
  double xi = 0.0;
};

//! Corrects raw values on a uniform circular grid. clip returns max(0, f);
//! clip_renormalize finds xi >= 0 by bisection so that the quadrature of
//! max(0, f - xi) is 1. Nonnegative input is returned unchanged.
CorrectedGrid correct_grid(std::span<const double> raw, Correction mode);

CorrectedGrid correct_nonneg(const DensityEstimate& estimate,
                             Correction mode,
                             int grid_size = default_grid_size);

} // namespace circkde
