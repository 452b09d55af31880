#pragma once

#include "circkde/circular_math.hpp"
#include "circkde/kernels.hpp"

namespace circkde {

//! Exact finite-sample error of a flat-top estimator for a known density.
struct MiseReport
{
  double isb = 0.0;
  double iv = 0.0;
  double mise = 0.0;
  //! Highest coefficient index of the density that was available.
  int truncation_index = 0;
  //! Bound on sum_{t > truncation_index} |phi_t(f)|^2.
  double truncation_tail_bound = 0.0;
};

//! Integrated squared bias
//!   (2pi)^{-1} sum_t |phi_t(f)|^2 (1 - phi_t(K))^2,
//! i.e. the taper band plus everything beyond the kernel's support. The tail
//! of a truncated sequence enters through its tail bound. Throws
//! NumericalError when the kernel reaches past the available coefficients
//! and the tail is not negligible.
double exact_isb(const CharSeq& f, const FlatTopKernel& kernel);

//! Integrated variance (2pi n)^{-1} sum_t phi_t(K)^2 (1 - |phi_t(f)|^2).
double exact_iv(const CharSeq& f, const FlatTopKernel& kernel, long n);

MiseReport exact_mise(const CharSeq& f, const FlatTopKernel& kernel, long n);

//! c nu / (pi n).
double iv_bound(double nu, int c, long n);

//! A weighted coefficient series (2pi)^{-1} sum_t w(t) |phi_t|^2.
struct SeriesConstant
{
  double value = 0.0;
  //! Contribution added by extrapolating past the last coefficient.
  double tail_estimate = 0.0;
  int terms = 0;
};

//! C_r(f) = (2pi)^{-1} sum_t |t|^{2r} |phi_t|^2. For truncated sequences the
//! last 10 weighted terms must be < 1e-6 of the running sum; growing terms
//! raise NumericalError (divergence suspected). The remainder is estimated
//! from a power law fitted to the last two 10-term windows.
SeriesConstant smoothness_const_C_r(const CharSeq& f, double r);

//! I_{alpha,tau}(f) = (2pi)^{-1} sum_t e^{tau |t|^alpha} |phi_t|^2, with the
//! same convergence monitoring.
SeriesConstant exp_const_I(const CharSeq& f, double alpha, double tau);

//! C_r / nu^{2r}.
double isb_bound_poly(double c_r, double r, double nu);

//! I e^{-tau nu^alpha}.
double isb_bound_exp(double i_const, double alpha, double tau, double nu);

//! Minimizer of C_r nu^{-2r} + c nu / (pi n): [2 pi r C_r n / c]^{1/(2r+1)}.
double optimal_nu_poly(double r, double c_r, int c, long n);

//! floor((log(n) / tau)^{1/alpha}).
int optimal_nu_exp(double tau, double alpha, long n);

} // namespace circkde
