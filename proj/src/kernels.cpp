#include "circkde/kernels.hpp"

#include "circkde/circular_math.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace circkde {

namespace {

// Below this |sin(theta/2)| the closed forms return their limit at 0.
constexpr double singularity_window = 1e-8;

double linear_taper(long t, long floor_nu, int c)
{
  const double a = static_cast<double>(t < 0 ? -t : t);
  return (c - a / static_cast<double>(floor_nu)) / (c - 1.0);
}

} // namespace

TaperFunction taper_function(Taper taper)
{
  switch (taper) {
    case Taper::linear:
      return &linear_taper;
  }
  throw std::invalid_argument("unknown taper");
}

void FlatTopKernel::validate() const
{
  if (!std::isfinite(nu) || nu < 0.0)
    throw std::invalid_argument("flat-top kernel: nu must be finite and >= 0");
  if (c < 1)
    throw std::invalid_argument("flat-top kernel: c must be >= 1");
}

long FlatTopKernel::floor_nu() const
{
  return static_cast<long>(std::floor(nu));
}

long FlatTopKernel::max_frequency() const
{
  const long m = floor_nu();
  if (m == 0)
    return 0;
  return c == 1 ? m : static_cast<long>(c) * m - 1;
}

std::string describe(const KernelSpec& kernel)
{
  std::ostringstream os;
  if (const auto* ft = std::get_if<FlatTopKernel>(&kernel)) {
    if (ft->c == 1)
      os << "wsinc(nu=" << ft->nu << ")";
    else
      os << "wtrap(nu=" << ft->nu << ", c=" << ft->c << ")";
  } else {
    os << "vonmises(kappa=" << std::get<VonMisesKernel>(kernel).kappa << ")";
  }
  return os.str();
}

double char_wft(long t, const FlatTopKernel& kernel)
{
  const long a = t < 0 ? -t : t;
  const long m = kernel.floor_nu();
  if (m == 0)
    return a == 0 ? 1.0 : 0.0;
  if (a <= m)
    return 1.0;
  if (kernel.c == 1 || a >= static_cast<long>(kernel.c) * m)
    return 0.0;
  return taper_function(kernel.taper)(a, m, kernel.c);
}

double eval_wsinc(double theta, double nu)
{
  const double m = std::floor(nu);
  if (m <= 0.0)
    return 1.0 / two_pi;
  const double s = std::sin(0.5 * theta);
  if (std::abs(s) < singularity_window)
    return (2.0 * m + 1.0) / two_pi;
  return std::sin((m + 0.5) * theta) / (two_pi * s);
}

double eval_wtrap(double theta, double nu, int c)
{
  if (c < 2)
    throw std::invalid_argument("eval_wtrap: c must be >= 2 (use eval_wsinc)");
  const double m = std::floor(nu);
  if (m <= 0.0)
    return 1.0 / two_pi;
  const double s = std::sin(0.5 * theta);
  if (std::abs(s) < singularity_window)
    return (c + 1.0) * m / two_pi;
  // sin^2 A - sin^2 B = sin(A + B) sin(A - B)
  const double a = 0.5 * c * m * theta;
  const double b = 0.5 * m * theta;
  const double num = std::sin(a + b) * std::sin(a - b);
  return num / (two_pi * (c - 1.0) * m * s * s);
}

double eval_flat_top(double theta, const FlatTopKernel& kernel)
{
  return kernel.c == 1 ? eval_wsinc(theta, kernel.nu)
                       : eval_wtrap(theta, kernel.nu, kernel.c);
}

double kernel_fourier_eval(double theta, const FlatTopKernel& kernel)
{
  double sum = 1.0;
  const long top = kernel.max_frequency();
  for (long t = 1; t <= top; ++t)
    sum += 2.0 * char_wft(t, kernel) * std::cos(static_cast<double>(t) * theta);
  return sum / two_pi;
}

double kernel_roughness(const FlatTopKernel& kernel)
{
  double sum = 1.0;
  const long top = kernel.max_frequency();
  for (long t = 1; t <= top; ++t) {
    const double k = char_wft(t, kernel);
    sum += 2.0 * k * k;
  }
  return sum / two_pi;
}

double eval_vm_kernel(double theta, double kappa)
{
  if (!(kappa > 0.0))
    throw std::invalid_argument("von Mises kernel: kappa must be positive");
  return std::exp(kappa * std::cos(theta) - log_bessel_i(0, kappa)) / two_pi;
}

double char_vm(long t, double kappa)
{
  if (!(kappa > 0.0))
    throw std::invalid_argument("von Mises kernel: kappa must be positive");
  const long a = t < 0 ? -t : t;
  if (a == 0)
    return 1.0;
  return std::exp(log_bessel_i(static_cast<int>(a), kappa) - log_bessel_i(0, kappa));
}

} // namespace circkde
