#include "circkde/circular_math.hpp"
#include "circkde/distributions.hpp"
#include "circkde/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace circkde;

TEST_CASE("wrap_angle reduces into [0, 2pi)")
{
  CHECK(wrap_angle(0.0).value() == 0.0);
  CHECK(wrap_angle(two_pi).value() == doctest::Approx(0.0));
  CHECK(wrap_angle(-pi / 2).value() == doctest::Approx(3 * pi / 2));
  CHECK(wrap_angle(7 * pi).value() == doctest::Approx(pi));
  // A tiny negative value must not round up to 2pi.
  CHECK(wrap_angle(-1e-20).value() < two_pi);
  CHECK(wrap_angle(-1e-20).value() >= 0.0);
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.uniform() - 0.5) * 1e4;
    const double v = wrap_angle(x).value();
    CHECK(v >= 0.0);
    CHECK(v < two_pi);
    CHECK(std::abs(std::remainder(v - x, two_pi)) < 1e-9);
  }
}

TEST_CASE("bessel_i examples")
{
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(1, 2.0) == doctest::Approx(1.590636855).epsilon(1e-9));
  // Reference values from arbitrary-precision evaluation.
  CHECK(bessel_i(0, 1.0) == doctest::Approx(1.26606587775200833559824462521).epsilon(1e-14));
  CHECK(bessel_i(3, 5.0) == doctest::Approx(10.3311501691511383872334409356).epsilon(1e-13));
  CHECK(bessel_i(0, 50.0) == doctest::Approx(293255378384933632665.467507946).epsilon(1e-12));
  CHECK(bessel_i(10, 100.0) == doctest::Approx(6.49897552472014779934231169104e+41).epsilon(1e-12));
  CHECK_THROWS_AS(bessel_i(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_i(0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_i(0, 1e4), NumericalError);
}

TEST_CASE("bessel_i agrees with std::cyl_bessel_i up to x = 100")
{
  for (int order : { 0, 1, 2, 5, 10, 20 })
    for (double x : { 0.1, 0.5, 1.0, 4.0, 12.0, 30.0, 75.0, 100.0 }) {
      const double ref = std::cyl_bessel_i(static_cast<double>(order), x);
      CAPTURE(order);
      CAPTURE(x);
      CHECK(std::abs(bessel_i(order, x) - ref) <= 1e-12 * ref);
      CHECK(log_bessel_i(order, x) == doctest::Approx(std::log(ref)).epsilon(1e-12));
    }
}

TEST_CASE("bessel ratio I_t / I_0 decreases strictly in t")
{
  for (double kappa : { 0.3, 1.0, 6.0, 40.0 }) {
    double prev = 1.0;
    for (int t = 1; t <= 25; ++t) {
      const double r = bessel_i(t, kappa) / bessel_i(0, kappa);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("fourier_coeffs_numeric examples")
{
  const auto uniform = fourier_coeffs_numeric([](double) { return 1.0 / two_pi; }, 3);
  CHECK(uniform.truncated);
  CHECK(std::abs(uniform.coeffs[0] - 1.0) < 1e-12);
  for (int t = 1; t <= 3; ++t)
    CHECK(std::abs(uniform.coeffs[t]) < 1e-12);

  const auto card = fourier_coeffs_numeric(
    [](double th) { return (1.0 + 2 * 0.5 * std::cos(th)) / two_pi; }, 3);
  CHECK(std::abs(card.coeffs[1] - 0.5) < 1e-12);
  CHECK(std::abs(card.coeffs[2]) < 1e-12);
  CHECK(std::abs(card.coeffs[3]) < 1e-12);

  const double rho = 4.0 / (pi * pi);
  const auto tri = fourier_coeffs_numeric(
    [rho](double th) { return density(TriangularDist{ rho }, th); }, 3, 1 << 14);
  CHECK(std::abs(tri.coeffs[1] - rho) < 1e-8);
  CHECK(std::abs(tri.coeffs[2]) < 1e-8);
  CHECK(std::abs(tri.coeffs[3] - rho / 9.0) < 1e-8);
}

TEST_CASE("fourier_coeffs_numeric preconditions")
{
  CHECK_THROWS_AS(fourier_coeffs_numeric([](double) { return 1.0 / two_pi; }, 300, 1024),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_coeffs_numeric([](double) { return 1.0; }, 3), std::invalid_argument);
}

TEST_CASE("numeric coefficients match closed forms for t <= 10")
{
  const std::vector<CircularDist> dists = {
    UniformDist{},
    CardioidDist{ 1.0, 0.4 },
    WrappedNormalDist{ 2.0, 0.7 },
    WrappedCauchyDist{ 0.5, 0.6 },
    VonMisesDist{ 4.0, 3.0 },
  };
  for (const auto& d : dists) {
    CAPTURE(describe(d));
    const auto num = fourier_coeffs_numeric([&](double th) { return density(d, th); }, 10);
    for (int t = 0; t <= 10; ++t)
      CHECK(std::abs(num.coeffs[t] - char_fn(d, t)) <= 1e-8);
  }
  // The triangular density has kinks, so trapezoid error decays only as
  // h^2; a finer grid brings it within 1e-8.
  const TriangularDist tri{ 0.3 };
  const auto num = fourier_coeffs_numeric([&](double th) { return density(tri, th); }, 10, 1 << 16);
  for (int t = 0; t <= 10; ++t)
    CHECK(std::abs(num.coeffs[t] - char_fn(tri, t)) <= 1e-8);
}

TEST_CASE("CharSeq indexing is Hermitian")
{
  CharSeq s;
  s.coeffs = { 1.0, { 0.2, 0.3 } };
  CHECK(s.at(-1) == std::conj(s.at(1)));
  CHECK(s.at(5) == std::complex<double>(0.0));
  CHECK(s.power(-1) == doctest::Approx(0.13));
}

TEST_CASE("ecf examples")
{
  const Sample s = to_sample(std::vector<double>{ 0.3, 1.7, 5.0 });
  CHECK(std::abs(ecf(s, 0) - 1.0) < 1e-15);
  const Sample two = to_sample(std::vector<double>{ 0.0, pi });
  CHECK(std::abs(ecf(two, 1)) < 1e-15);
  const Sample one = to_sample(std::vector<double>{ pi / 2 });
  CHECK(std::abs(ecf(one, 2) - (-1.0)) < 1e-15);
  CHECK_THROWS_AS(ecf(Sample{}, 1), std::invalid_argument);
}

TEST_CASE("ecf magnitude and the recurrence")
{
  Rng rng(11);
  Sample s;
  for (int i = 0; i < 257; ++i)
    s.push_back(wrap_angle(rng.uniform() * 10.0));
  const auto sums = ecf_sums(s, 60);
  for (int t = 0; t <= 60; ++t) {
    const auto direct = ecf(s, t);
    CHECK(std::abs(direct) <= 1.0 + 1e-15);
    CHECK(std::abs(sums[t] / 257.0 - direct) < 1e-12);
  }
  CHECK(std::abs(ecf(s, -3) - std::conj(ecf(s, 3))) < 1e-15);
}

TEST_CASE("trapezoid_integral examples")
{
  const auto grid = uniform_grid(256);
  std::vector<double> c(256), cs(256), k(256);
  for (int i = 0; i < 256; ++i) {
    k[i] = 1.0 / two_pi;
    c[i] = std::cos(grid[i]);
    cs[i] = c[i] * c[i];
  }
  CHECK(trapezoid_integral(k) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(trapezoid_integral(c)) < 1e-13);
  CHECK(trapezoid_integral(cs) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(grid[1] == doctest::Approx(two_pi / 256));
}
