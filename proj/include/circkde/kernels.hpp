#pragma once

#include <string>
#include <variant>

namespace circkde {

//! Shape of the characteristic function on the band floor(nu) < |t| < c*floor(nu).
enum class Taper
{
  linear, //!< (c - |t|/floor(nu)) / (c - 1): the wrapped trapezoid
};

using TaperFunction = double (*)(long t, long floor_nu, int c);

TaperFunction taper_function(Taper taper);

//! Wrapped flat-top kernel. Every quantity except the theoretical bounds
//! depends on nu only through floor(nu).
struct FlatTopKernel
{
  double nu = 0.0;
  int c = 1;
  Taper taper = Taper::linear;

  //! Throws std::invalid_argument unless nu >= 0 (finite) and c >= 1.
  void validate() const;

  long floor_nu() const;
  //! Largest |t| with a nonzero coefficient.
  long max_frequency() const;
};

inline FlatTopKernel wrapped_sinc(double nu)
{
  return { nu, 1, Taper::linear };
}

inline FlatTopKernel wrapped_trapezoid(double nu, int c = 2)
{
  return { nu, c, Taper::linear };
}

struct VonMisesKernel
{
  double kappa = 1.0;
};

using KernelSpec = std::variant<FlatTopKernel, VonMisesKernel>;

std::string describe(const KernelSpec& kernel);

//! phi_t(K_{nu,c}). For c = 1 the coefficient is 1 on |t| <= floor(nu) and 0
//! beyond (the Dirichlet kernel).
double char_wft(long t, const FlatTopKernel& kernel);

//! Closed-form wrapped sinc (Dirichlet) kernel.
double eval_wsinc(double theta, double nu);

//! Closed-form wrapped trapezoid kernel; c >= 2.
double eval_wtrap(double theta, double nu, int c);

//! Closed form for any flat-top kernel with the linear taper.
double eval_flat_top(double theta, const FlatTopKernel& kernel);

//! (2pi)^{-1} [1 + 2 sum_{t>=1} phi_t(K) cos(t theta)], summed exactly over
//! the kernel's finite spectral support.
double kernel_fourier_eval(double theta, const FlatTopKernel& kernel);

//! R(K) = int K^2 = (2pi)^{-1} sum_t phi_t(K)^2.
double kernel_roughness(const FlatTopKernel& kernel);

//! e^{kappa cos theta} / (2pi I_0(kappa)).
double eval_vm_kernel(double theta, double kappa);

//! phi_t of the von Mises kernel, I_|t|(kappa) / I_0(kappa).
double char_vm(long t, double kappa);

} // namespace circkde
