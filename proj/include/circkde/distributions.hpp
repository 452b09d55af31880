#pragma once

#include "circkde/circular_math.hpp"
#include "circkde/rng.hpp"

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace circkde {

struct UniformDist
{};

struct VonMisesDist
{
  double mu = 0.0;
  double kappa = 1.0;
};

//! Wrapped normal in the mean-resultant parametrization: phi_t = rho^{t^2} e^{i t mu}.
struct WrappedNormalDist
{
  double mu = 0.0;
  double rho = 0.5;
};

//! (2pi)^{-1} [1 + 2 rho cos(theta - mu)], rho in [0, 1/2].
struct CardioidDist
{
  double mu = 0.0;
  double rho = 0.25;
};

//! phi_t = rho^{|t|} e^{i t mu}.
struct WrappedCauchyDist
{
  double mu = 0.0;
  double rho = 0.5;
};

//! Skew-normal with location xi, scale eta and skewness lambda, wrapped.
struct WrappedSkewNormalDist
{
  double xi = 0.0;
  double eta = 1.0;
  double lambda = 0.0;
};

//! (8pi)^{-1} {4 - pi^2 rho + 2 pi rho |pi - theta|}, rho in [0, 4/pi^2].
struct TriangularDist
{
  double rho = 0.0;
};

//! Wrapped alpha-stable S_alpha(tau, beta, mu).
struct WrappedStableDist
{
  double alpha = 2.0;
  double tau = 1.0;
  double beta = 0.0;
  double mu = 0.0;
};

using CircularDist = std::variant<UniformDist,
                                  VonMisesDist,
                                  WrappedNormalDist,
                                  CardioidDist,
                                  WrappedCauchyDist,
                                  WrappedSkewNormalDist,
                                  TriangularDist,
                                  WrappedStableDist>;

//! Throws std::invalid_argument for out-of-range parameters.
void validate(const CircularDist& dist);
std::string describe(const CircularDist& dist);

double density(const CircularDist& dist, double theta);

//! phi_t = int f(theta) e^{i t theta} dtheta. The wrapped skew-normal goes
//! through numeric quadrature.
std::complex<double> char_fn(const CircularDist& dist, long t);

//! phi_0..phi_max_index with a tail bound on the rest.
CharSeq char_seq(const CircularDist& dist, int max_index);

Angle draw(const CircularDist& dist, Rng& rng);
Sample sample(const CircularDist& dist, Rng& rng, std::size_t n);

struct MixtureComponent
{
  double weight = 1.0;
  CircularDist dist;
};

struct ScenarioSpec
{
  std::string id;
  std::string name;
  std::vector<MixtureComponent> components;
};

//! Throws std::invalid_argument unless weights are positive and sum to 1.
void validate(const ScenarioSpec& spec);

//! The twenty benchmark scenarios M1..M20.
const std::vector<ScenarioSpec>& scenario_catalog();

//! Looks up "M1".."M20"; throws std::invalid_argument otherwise.
const ScenarioSpec& find_scenario(std::string_view id);

double mixture_density(const ScenarioSpec& spec, double theta);
std::complex<double> mixture_char(const ScenarioSpec& spec, long t);
CharSeq mixture_char_seq(const ScenarioSpec& spec, int max_index);
Sample mixture_sample(const ScenarioSpec& spec, Rng& rng, std::size_t n);

//! Coefficients extended until |phi_t|^2 < tol over a run of indices and the
//! reported tail is below tol (at least `min_index` coefficients).
CharSeq characteristic_sequence(const ScenarioSpec& spec, int min_index = 0, double tol = 1e-14);

//! T_f: the largest t with |phi_t| > tol, or nullopt when the sequence is
//! truncated with a non-negligible tail.
std::optional<int> spectral_support(const CharSeq& seq, double tol = 1e-12);

} // namespace circkde
