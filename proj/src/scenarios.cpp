#include "circkde/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace circkde {

namespace {

MixtureComponent vm(double w, double mu, double kappa)
{
  return { w, VonMisesDist{ mu, kappa } };
}

MixtureComponent wc(double w, double mu, double rho)
{
  return { w, WrappedCauchyDist{ mu, rho } };
}

std::vector<ScenarioSpec> build_catalog()
{
  const double s3 = std::sqrt(3.0);
  std::vector<ScenarioSpec> c;
  c.push_back({ "M1", "Circular uniform", { { 1.0, UniformDist{} } } });
  c.push_back({ "M2", "Von Mises vM(pi, 1)", { vm(1.0, pi, 1.0) } });
  c.push_back({ "M3", "Wrapped normal WN(pi, 0.9)", { { 1.0, WrappedNormalDist{ pi, 0.9 } } } });
  c.push_back({ "M4", "Cardioid C(pi, 0.5)", { { 1.0, CardioidDist{ pi, 0.5 } } } });
  c.push_back({ "M5", "Wrapped Cauchy WC(pi, 0.8)", { wc(1.0, pi, 0.8) } });
  c.push_back({ "M6",
                "Wrapped skew-normal WSN(pi, 1, 20)",
                { { 1.0, WrappedSkewNormalDist{ pi, 1.0, 20.0 } } } });
  c.push_back({ "M7", "Mixture of two von Mises", { vm(0.5, 0.0, 4.0), vm(0.5, pi, 4.0) } });
  c.push_back({ "M8", "Mixture of two von Mises", { vm(0.5, 2.0, 5.0), vm(0.5, 4.0, 5.0) } });
  c.push_back(
    { "M9", "Mixture of two von Mises", { vm(0.25, 0.0, 2.0), vm(0.75, pi / s3, 2.0) } });
  c.push_back({ "M10",
                "Mixture of von Mises and wrapped Cauchy",
                { vm(0.8, pi, 5.0), wc(0.2, 4.0 * pi / 3.0, 0.9) } });
  c.push_back({ "M11",
                "Mixture of three von Mises",
                { vm(1.0 / 3.0, pi / 3.0, 6.0),
                  vm(1.0 / 3.0, pi, 6.0),
                  vm(1.0 / 3.0, 5.0 * pi / 3.0, 6.0) } });
  c.push_back({ "M12",
                "Mixture of three von Mises",
                { vm(0.4, pi / 2.0, 4.0), vm(0.2, pi, 5.0), vm(0.4, 3.0 * pi / 2.0, 4.0) } });
  c.push_back({ "M13",
                "Mixture of three von Mises",
                { vm(0.4, 0.5, 6.0), vm(0.4, 3.0, 6.0), vm(0.2, 5.0, 24.0) } });
  c.push_back({ "M14",
                "Mixture of four von Mises",
                { vm(0.25, 0.0, 12.0),
                  vm(0.25, pi / 2.0, 12.0),
                  vm(0.25, pi, 12.0),
                  vm(0.25, 3.0 * pi / 2.0, 12.0) } });
  c.push_back({ "M15",
                "Mixture of wrapped Cauchy, wrapped normal, von Mises and wrapped skew-normal",
                { wc(0.3, pi - 1.0, 0.6),
                  { 0.25, WrappedNormalDist{ pi + 0.5, 0.9 } },
                  vm(0.25, pi + 2.0, 3.0),
                  { 0.2, WrappedSkewNormalDist{ 6.0, 1.0, 3.0 } } } });
  c.push_back({ "M16",
                "Mixture of five von Mises",
                { vm(0.2, pi / 5.0, 18.0),
                  vm(0.2, 3.0 * pi / 5.0, 18.0),
                  vm(0.2, pi, 18.0),
                  vm(0.2, 7.0 * pi / 5.0, 18.0),
                  vm(0.2, 9.0 * pi / 5.0, 18.0) } });
  c.push_back({ "M17",
                "Mixture of cardioid and wrapped Cauchy",
                { { 2.0 / 3.0, CardioidDist{ pi, 0.5 } }, wc(1.0 / 3.0, pi, 0.9) } });
  c.push_back({ "M18",
                "Mixture of four von Mises",
                { vm(0.5, pi, 1.0),
                  vm(1.0 / 6.0, pi - 0.8, 30.0),
                  vm(1.0 / 6.0, pi, 30.0),
                  vm(1.0 / 6.0, pi + 0.8, 30.0) } });
  c.push_back({ "M19",
                "Mixture of five von Mises",
                { vm(4.0 / 9.0, 2.0, 3.0),
                  vm(5.0 / 36.0, 4.0, 3.0),
                  vm(5.0 / 36.0, 3.5, 50.0),
                  vm(5.0 / 36.0, 4.0, 50.0),
                  vm(5.0 / 36.0, 4.5, 50.0) } });
  // Named as two wrapped skew-normal and two wrapped Cauchy components; the
  // 0.9 concentration is a wrapped Cauchy rho.
  c.push_back({ "M20",
                "Mixture of two wrapped skew-normal and two wrapped Cauchy",
                { { 1.0 / 3.0, WrappedSkewNormalDist{ 0.0, 0.7, 20.0 } },
                  { 1.0 / 3.0, WrappedSkewNormalDist{ pi, 0.7, 20.0 } },
                  wc(1.0 / 6.0, 3.0 * pi / 4.0, 0.9),
                  wc(1.0 / 6.0, 7.0 * pi / 4.0, 0.9) } });
  for (const auto& s : c)
    validate(s);
  return c;
}

} // namespace

const std::vector<ScenarioSpec>& scenario_catalog()
{
  static const std::vector<ScenarioSpec> catalog = build_catalog();
  return catalog;
}

const ScenarioSpec& find_scenario(std::string_view id)
{
  for (const auto& s : scenario_catalog())
    if (s.id == id)
      return s;
  throw std::invalid_argument("unknown scenario '" + std::string(id) + "' (expected M1..M20)");
}

} // namespace circkde
