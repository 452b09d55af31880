#include "circkde/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace circkde {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int wsn_wraps = 5;
// Wrapped-normal series terms below this are dropped.
constexpr double series_cutoff = 1e-14;

double wrapped_series_density(double theta, const std::function<std::complex<double>(long)>& phi)
{
  double sum = 1.0;
  for (long t = 1; t < 100000; ++t) {
    const std::complex<double> c = phi(t);
    if (std::abs(c) < 1e-17)
      break;
    sum += 2.0 * (c * std::polar(1.0, -static_cast<double>(t) * theta)).real();
  }
  return sum / two_pi;
}

std::complex<double> stable_char(const WrappedStableDist& d, long t)
{
  if (t == 0)
    return 1.0;
  const double a = std::abs(static_cast<double>(t));
  if (d.alpha == 1.0)
    return std::exp(std::complex<double>(-d.tau * a, d.mu * t));
  const double sgn = t > 0 ? 1.0 : -1.0;
  const double scale = d.tau * std::pow(a, d.alpha);
  const std::complex<double> expo(-scale, scale * d.beta * sgn * std::tan(d.alpha * pi / 2.0) + d.mu * t);
  return std::exp(expo);
}

double skew_normal_pdf(double z, double lambda)
{
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(two_pi);
  const double cdf = 0.5 * std::erfc(-lambda * z / std::sqrt(2.0));
  return 2.0 * phi * cdf;
}

double triangular_quantile_half(double u, double rho)
{
  // Root in [0, pi] of pi rho x^2 - (4 + pi^2 rho) x + 8 pi u = 0.
  const double b = 4.0 + pi * pi * rho;
  const double disc = b * b - 32.0 * pi * pi * rho * u;
  return 16.0 * pi * u / (b + std::sqrt(std::max(0.0, disc)));
}

double von_mises_tail(const VonMisesDist& d, int max_index)
{
  // The ratio I_{t+1}/I_t is below kappa / (2 (t + 1)); sum exactly until it
  // drops under 1/2 and bound the rest geometrically.
  const int start = max_index + 1;
  const int until = std::max(start, static_cast<int>(std::ceil(d.kappa)) + 1);
  const double log_i0 = log_bessel_i(0, d.kappa);
  double sum = 0.0;
  for (int t = start; t <= until; ++t)
    sum += std::exp(2.0 * (log_bessel_i(t, d.kappa) - log_i0));
  const double last = std::exp(2.0 * (log_bessel_i(until, d.kappa) - log_i0));
  const double r = d.kappa / (2.0 * (until + 1.0));
  return sum + last * r * r / (1.0 - r * r);
}

} // namespace

void validate(const CircularDist& dist)
{
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  std::visit(overloaded{
               [](const UniformDist&) {},
               [&](const VonMisesDist& d) {
                 if (!(d.kappa > 0.0) || !std::isfinite(d.kappa) || !std::isfinite(d.mu))
                   fail("von Mises: kappa must be positive and finite");
               },
               [&](const WrappedNormalDist& d) {
                 if (!(d.rho > 0.0 && d.rho < 1.0) || !std::isfinite(d.mu))
                   fail("wrapped normal: rho must lie in (0, 1)");
               },
               [&](const CardioidDist& d) {
                 if (!(d.rho >= 0.0 && d.rho <= 0.5) || !std::isfinite(d.mu))
                   fail("cardioid: rho must lie in [0, 1/2]");
               },
               [&](const WrappedCauchyDist& d) {
                 if (!(d.rho >= 0.0 && d.rho < 1.0) || !std::isfinite(d.mu))
                   fail("wrapped Cauchy: rho must lie in [0, 1)");
               },
               [&](const WrappedSkewNormalDist& d) {
                 if (!(d.eta > 0.0) || !std::isfinite(d.lambda) || !std::isfinite(d.xi))
                   fail("wrapped skew-normal: eta must be positive");
               },
               [&](const TriangularDist& d) {
                 if (!(d.rho >= 0.0 && d.rho <= 4.0 / (pi * pi)))
                   fail("triangular: rho must lie in [0, 4/pi^2]");
               },
               [&](const WrappedStableDist& d) {
                 if (!(d.alpha > 0.0 && d.alpha <= 2.0) || !(d.tau > 0.0) ||
                     !(d.beta >= -1.0 && d.beta <= 1.0) || !std::isfinite(d.mu))
                   fail("wrapped stable: need alpha in (0,2], tau > 0, beta in [-1,1]");
               },
             },
             dist);
}

std::string describe(const CircularDist& dist)
{
  std::ostringstream os;
  std::visit(overloaded{
               [&](const UniformDist&) { os << "Uniform"; },
               [&](const VonMisesDist& d) { os << "vM(" << d.mu << ", " << d.kappa << ")"; },
               [&](const WrappedNormalDist& d) { os << "WN(" << d.mu << ", " << d.rho << ")"; },
               [&](const CardioidDist& d) { os << "C(" << d.mu << ", " << d.rho << ")"; },
               [&](const WrappedCauchyDist& d) { os << "WC(" << d.mu << ", " << d.rho << ")"; },
               [&](const WrappedSkewNormalDist& d) {
                 os << "WSN(" << d.xi << ", " << d.eta << ", " << d.lambda << ")";
               },
               [&](const TriangularDist& d) { os << "TR(" << d.rho << ")"; },
               [&](const WrappedStableDist& d) {
                 os << "S(" << d.alpha << ", " << d.tau << ", " << d.beta << ", " << d.mu << ")";
               },
             },
             dist);
  return os.str();
}

double density(const CircularDist& dist, double theta)
{
  return std::visit(
    overloaded{
      [](const UniformDist&) { return 1.0 / two_pi; },
      [&](const VonMisesDist& d) {
        return std::exp(d.kappa * std::cos(theta - d.mu) - log_bessel_i(0, d.kappa)) / two_pi;
      },
      [&](const WrappedNormalDist& d) {
        double sum = 1.0;
        for (long t = 1;; ++t) {
          const double w = std::pow(d.rho, static_cast<double>(t * t));
          if (w < series_cutoff)
            break;
          sum += 2.0 * w * std::cos(t * (theta - d.mu));
        }
        return sum / two_pi;
      },
      [&](const CardioidDist& d) { return (1.0 + 2.0 * d.rho * std::cos(theta - d.mu)) / two_pi; },
      [&](const WrappedCauchyDist& d) {
        return (1.0 - d.rho * d.rho) /
               (two_pi * (1.0 + d.rho * d.rho - 2.0 * d.rho * std::cos(theta - d.mu)));
      },
      [&](const WrappedSkewNormalDist& d) {
        double sum = 0.0;
        for (int k = -wsn_wraps; k <= wsn_wraps; ++k)
          sum += skew_normal_pdf((theta + two_pi * k - d.xi) / d.eta, d.lambda);
        return sum / d.eta;
      },
      [&](const TriangularDist& d) {
        const double x = Angle(theta).value();
        return (4.0 - pi * pi * d.rho + 2.0 * pi * d.rho * std::abs(pi - x)) / (8.0 * pi);
      },
      [&](const WrappedStableDist& d) {
        return wrapped_series_density(theta, [&](long t) { return stable_char(d, t); });
      },
    },
    dist);
}

std::complex<double> char_fn(const CircularDist& dist, long t)
{
  const double dt = static_cast<double>(t);
  const long a = t < 0 ? -t : t;
  return std::visit(
    overloaded{
      [&](const UniformDist&) -> std::complex<double> { return t == 0 ? 1.0 : 0.0; },
      [&](const VonMisesDist& d) -> std::complex<double> {
        if (t == 0)
          return 1.0;
        const double ratio =
          std::exp(log_bessel_i(static_cast<int>(a), d.kappa) - log_bessel_i(0, d.kappa));
        return std::polar(ratio, dt * d.mu);
      },
      [&](const WrappedNormalDist& d) -> std::complex<double> {
        return std::polar(std::pow(d.rho, dt * dt), dt * d.mu);
      },
      [&](const CardioidDist& d) -> std::complex<double> {
        if (t == 0)
          return 1.0;
        return a == 1 ? std::polar(d.rho, dt * d.mu) : std::complex<double>(0.0);
      },
      [&](const WrappedCauchyDist& d) -> std::complex<double> {
        return std::polar(std::pow(d.rho, static_cast<double>(a)), dt * d.mu);
      },
      [&](const WrappedSkewNormalDist&) -> std::complex<double> {
        return char_seq(dist, static_cast<int>(a)).at(t);
      },
      [&](const TriangularDist& d) -> std::complex<double> {
        if (t == 0)
          return 1.0;
        if (a % 2 == 0)
          return 0.0;
        return d.rho / (dt * dt);
      },
      [&](const WrappedStableDist& d) -> std::complex<double> { return stable_char(d, t); },
    },
    dist);
}

CharSeq char_seq(const CircularDist& dist, int max_index)
{
  if (max_index < 0)
    throw std::invalid_argument("char_seq: max_index < 0");
  validate(dist);

  if (const auto* wsn = std::get_if<WrappedSkewNormalDist>(&dist)) {
    const int grid = std::max(default_grid_size, 4 * max_index);
    return fourier_coeffs_numeric([&](double x) { return density(*wsn, x); }, max_index, grid);
  }

  CharSeq out;
  out.coeffs.resize(static_cast<std::size_t>(max_index) + 1);
  for (int t = 0; t <= max_index; ++t)
    out.coeffs[t] = char_fn(dist, t);

  const double next = static_cast<double>(max_index) + 1.0;
  std::visit(overloaded{
               [&](const UniformDist&) {},
               [&](const CardioidDist& d) {
                 if (max_index < 1 && d.rho > 0.0) {
                   out.truncated = true;
                   out.tail_sum = d.rho * d.rho;
                 }
               },
               [&](const VonMisesDist& d) {
                 out.truncated = true;
                 out.tail_sum = von_mises_tail(d, max_index);
               },
               [&](const WrappedNormalDist& d) {
                 out.truncated = true;
                 const double r2 = d.rho * d.rho;
                 out.tail_sum = std::pow(r2, next * next) / (1.0 - std::pow(r2, 2.0 * next + 1.0));
               },
               [&](const WrappedCauchyDist& d) {
                 out.truncated = d.rho > 0.0;
                 const double r2 = d.rho * d.rho;
                 out.tail_sum = std::pow(r2, next) / (1.0 - r2);
               },
               [&](const TriangularDist& d) {
                 out.truncated = d.rho > 0.0;
                 // sum_{t > T} t^{-4} <= int_T^inf x^{-4} dx, and T = 0 is covered by
                 // sum_{t >= 1} t^{-4} < 1.1
                 const double m = static_cast<double>(max_index);
                 out.tail_sum = d.rho * d.rho * (max_index == 0 ? 1.1 : 1.0 / (3.0 * m * m * m));
               },
               [&](const WrappedStableDist& d) {
                 out.truncated = true;
                 double sum = 0.0;
                 for (long t = max_index + 1; t < max_index + 1000000L; ++t) {
                   const double p = std::norm(stable_char(d, t));
                   sum += p;
                   if (p < 1e-300 || p < 1e-18 * sum)
                     break;
                 }
                 out.tail_sum = sum;
               },
               [](const WrappedSkewNormalDist&) {},
             },
             dist);
  return out;
}

Angle draw(const CircularDist& dist, Rng& rng)
{
  return std::visit(
    overloaded{
      [&](const UniformDist&) { return Angle(two_pi * rng.uniform()); },
      [&](const VonMisesDist& d) {
        if (d.kappa < 1e-8)
          return Angle(two_pi * rng.uniform());
        // Best & Fisher (1979)
        const double a = 1.0 + std::sqrt(1.0 + 4.0 * d.kappa * d.kappa);
        const double b = (a - std::sqrt(2.0 * a)) / (2.0 * d.kappa);
        const double r = (1.0 + b * b) / (2.0 * b);
        double f;
        for (;;) {
          const double z = std::cos(pi * rng.uniform());
          f = (1.0 + r * z) / (r + z);
          const double c = d.kappa * (r - f);
          const double u2 = rng.uniform_open();
          if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0)
            break;
        }
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return Angle(d.mu + sign * std::acos(std::clamp(f, -1.0, 1.0)));
      },
      [&](const WrappedNormalDist& d) {
        const double sigma = std::sqrt(-2.0 * std::log(d.rho));
        return Angle(d.mu + sigma * rng.normal());
      },
      [&](const CardioidDist& d) {
        const double envelope = 1.0 + 2.0 * d.rho;
        for (;;) {
          const double x = two_pi * rng.uniform();
          if (rng.uniform() * envelope < 1.0 + 2.0 * d.rho * std::cos(x - d.mu))
            return Angle(x);
        }
      },
      [&](const WrappedCauchyDist& d) {
        if (d.rho == 0.0)
          return Angle(two_pi * rng.uniform());
        const double scale = -std::log(d.rho);
        return Angle(d.mu + scale * std::tan(pi * (rng.uniform_open() - 0.5)));
      },
      [&](const WrappedSkewNormalDist& d) {
        const double delta = d.lambda / std::sqrt(1.0 + d.lambda * d.lambda);
        const double z0 = rng.normal();
        const double z1 = rng.normal();
        const double x = delta * std::abs(z0) + std::sqrt(1.0 - delta * delta) * z1;
        return Angle(d.xi + d.eta * x);
      },
      [&](const TriangularDist& d) {
        const double u = rng.uniform();
        if (d.rho == 0.0)
          return Angle(two_pi * u);
        if (u <= 0.5)
          return Angle(triangular_quantile_half(u, d.rho));
        return Angle(two_pi - triangular_quantile_half(1.0 - u, d.rho));
      },
      [&](const WrappedStableDist& d) {
        if (d.alpha == 2.0)
          return Angle(d.mu + std::sqrt(2.0 * d.tau) * rng.normal());
        if (d.alpha == 1.0)
          return Angle(d.mu + d.tau * std::tan(pi * (rng.uniform_open() - 0.5)));
        throw std::invalid_argument("wrapped stable sampling supports alpha in {1, 2} only");
      },
    },
    dist);
}

Sample sample(const CircularDist& dist, Rng& rng, std::size_t n)
{
  validate(dist);
  Sample out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(draw(dist, rng));
  return out;
}

void validate(const ScenarioSpec& spec)
{
  if (spec.components.empty())
    throw std::invalid_argument("scenario " + spec.id + " has no components");
  double total = 0.0;
  for (const auto& c : spec.components) {
    if (!(c.weight > 0.0))
      throw std::invalid_argument("scenario " + spec.id + ": weights must be positive");
    validate(c.dist);
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("scenario " + spec.id + ": weights must sum to 1");
}

double mixture_density(const ScenarioSpec& spec, double theta)
{
  double sum = 0.0;
  for (const auto& c : spec.components)
    sum += c.weight * density(c.dist, theta);
  return sum;
}

std::complex<double> mixture_char(const ScenarioSpec& spec, long t)
{
  std::complex<double> sum{ 0.0, 0.0 };
  for (const auto& c : spec.components)
    sum += c.weight * char_fn(c.dist, t);
  return sum;
}

CharSeq mixture_char_seq(const ScenarioSpec& spec, int max_index)
{
  CharSeq out;
  out.coeffs.assign(static_cast<std::size_t>(max_index) + 1, { 0.0, 0.0 });
  for (const auto& c : spec.components) {
    const CharSeq part = char_seq(c.dist, max_index);
    for (int t = 0; t <= max_index; ++t)
      out.coeffs[t] += c.weight * part.coeffs[t];
    // |sum w phi|^2 <= sum w |phi|^2 for convex weights
    out.tail_sum += c.weight * part.tail_sum;
    out.truncated = out.truncated || part.truncated;
  }
  return out;
}

Sample mixture_sample(const ScenarioSpec& spec, Rng& rng, std::size_t n)
{
  validate(spec);
  Sample out;
  out.reserve(n);
  const std::size_t k = spec.components.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = 0;
    if (k > 1) {
      const double u = rng.uniform();
      double acc = 0.0;
      pick = k - 1;
      for (std::size_t j = 0; j < k; ++j) {
        acc += spec.components[j].weight;
        if (u < acc) {
          pick = j;
          break;
        }
      }
    }
    out.push_back(draw(spec.components[pick].dist, rng));
  }
  return out;
}

CharSeq characteristic_sequence(const ScenarioSpec& spec, int min_index, double tol)
{
  constexpr int run = 5;
  constexpr int cap = 1 << 16;
  int top = std::max(min_index, 32);
  for (;;) {
    CharSeq seq = mixture_char_seq(spec, top);
    bool small = seq.tail_sum < tol;
    for (int t = top - run + 1; t <= top && small; ++t)
      small = seq.power(t) < tol;
    if (small || top >= cap)
      return seq;
    top = std::min(cap, 2 * top);
  }
}

std::optional<int> spectral_support(const CharSeq& seq, double tol)
{
  if (seq.truncated && seq.tail_sum > tol * tol)
    return std::nullopt;
  for (int t = seq.max_index(); t > 0; --t)
    if (std::abs(seq.coeffs[t]) > tol)
      return t;
  return 0;
}

} // namespace circkde
