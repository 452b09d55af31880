#include "circkde/errors.hpp"
#include "circkde/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

using namespace circkde;

namespace {

const std::string fixtures = CIRCKDE_FIXTURE_DIR;

std::string fixture(const std::string& name)
{
  return fixtures + "/" + name;
}

} // namespace

TEST_CASE("degrees are converted to radians")
{
  const auto ds = load_csv(fixture("degrees.csv"), std::string("bearing"), AngleUnit::degrees);
  REQUIRE(ds.n() == 3);
  CHECK(ds.angles[0].value() == doctest::Approx(0.0));
  CHECK(ds.angles[1].value() == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(ds.angles[2].value() == doctest::Approx(pi).epsilon(1e-15));
  CHECK(ds.source == fixture("degrees.csv"));
  const auto by_index = load_csv(fixture("degrees.csv"), std::size_t{ 1 }, AngleUnit::degrees);
  CHECK(by_index.angles[2].value() == ds.angles[2].value());
}

TEST_CASE("compass bearings map to counterclockwise angles")
{
  const auto ds = load_csv(fixture("compass.csv"), std::string("heading"), AngleUnit::radians,
                           Direction::clockwise_from_north);
  REQUIRE(ds.n() == 1);
  CHECK(ds.angles[0].value() == doctest::Approx(pi / 2).epsilon(1e-15));
  // East (90 degrees clockwise from north) is angle 0.
  const auto deg = load_csv(fixture("degrees.csv"), std::string("bearing"), AngleUnit::degrees,
                            Direction::clockwise_from_north);
  CHECK(std::abs(std::remainder(deg.angles[1].value(), two_pi)) < 1e-15);
  CHECK(deg.angles[2].value() == doctest::Approx(3 * pi / 2).epsilon(1e-15));
}

TEST_CASE("load errors")
{
  CHECK_THROWS_WITH_AS(load_csv(fixture("bad_row.csv"), std::string("angle")), doctest::Contains("line 4"),
                       DataError);
  CHECK_THROWS_WITH_AS(load_csv(fixture("degrees.csv"), std::string("nope")), doctest::Contains("nope"),
                       DataError);
  CHECK_THROWS_AS(load_csv(fixture("degrees.csv"), std::size_t{ 7 }), DataError);
  CHECK_THROWS_AS(load_csv(fixture("empty.csv"), std::size_t{ 0 }), DataError);
  CHECK_THROWS_AS(load_csv(fixture("header_only.csv"), std::size_t{ 0 }), DataError);
  CHECK_THROWS_AS(load_csv(fixture("missing.csv"), std::size_t{ 0 }), DataError);
  CHECK_THROWS_AS(load_csv(fixture("degrees.csv"), std::string("station")), DataError);
}

TEST_CASE("angles are normalized")
{
  const auto ds = load_csv(fixture("cardioid_1.csv"), std::string("angle"));
  CHECK(ds.n() == 1000);
  for (const Angle& a : ds.angles)
    CHECK((a.value() >= 0.0 && a.value() < two_pi));
}

TEST_CASE("export_density_grid")
{
  const auto ds = load_csv(fixture("cardioid_2.csv"), std::string("angle"));
  const std::string path = "export_test.csv";

  SUBCASE("nu = 0 exports the uniform density")
  {
    const auto est = DensityEstimate::fit(ds.angles, wrapped_sinc(0));
    export_density_grid(est, 64, Correction::none, path);
    const auto dens = load_csv(path, std::string("density"));
    REQUIRE(dens.n() == 64);
    for (const Angle& a : dens.angles)
      CHECK(a.value() == doctest::Approx(1.0 / two_pi).epsilon(1e-15));
  }

  SUBCASE("corrected exports are proper densities")
  {
    const auto est = DensityEstimate::fit(Sample(ds.angles.begin(), ds.angles.begin() + 40), wrapped_sinc(9));
    const auto raw = est.eval_grid(512);
    REQUIRE(*std::min_element(raw.begin(), raw.end()) < 0.0);
    export_density_grid(est, 512, Correction::clip_renormalize, path);
    const auto dens = load_csv(path, std::string("density"));
    double sum = 0.0, lowest = 1.0;
    for (const Angle& a : dens.angles) {
      sum += a.value();
      lowest = std::min(lowest, a.value());
    }
    CHECK(lowest >= 0.0);
    CHECK(std::abs(sum * two_pi / 512 - 1.0) <= 1e-6);
  }

  SUBCASE("exported grid angles round trip")
  {
    const auto est = DensityEstimate::fit(ds.angles, wrapped_trapezoid(3, 2));
    export_density_grid(est, 100, Correction::clip, path);
    const auto theta = load_csv(path, std::string("theta"));
    REQUIRE(theta.n() == 100);
    for (int k = 0; k < 100; ++k)
      CHECK(std::abs(theta.angles[k].value() - two_pi * k / 100) <= 1e-12);
  }

  std::remove(path.c_str());
  const auto est = DensityEstimate::fit(ds.angles, wrapped_sinc(1));
  CHECK_THROWS_AS(export_density_grid(est, 64, Correction::none, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST_CASE("angles round trip through a CSV file")
{
  const auto ds = load_csv(fixture("uniform.csv"), std::size_t{ 0 });
  const std::string path = "angles_roundtrip.csv";
  {
    std::ofstream out(path);
    out << "angle\n" << std::setprecision(17);
    for (const Angle& a : ds.angles)
      out << a.value() << '\n';
  }
  const auto back = load_csv(path, std::string("angle"));
  REQUIRE(back.n() == ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i)
    CHECK(std::abs(back.angles[i].value() - ds.angles[i].value()) <= 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("option parsing helpers")
{
  CHECK(parse_unit("degrees") == AngleUnit::degrees);
  CHECK(parse_direction("clockwise_from_north") == Direction::clockwise_from_north);
  CHECK(parse_correction("clip") == Correction::clip);
  CHECK_THROWS_AS(parse_unit("grads"), std::invalid_argument);
  CHECK_THROWS_AS(parse_direction("up"), std::invalid_argument);
  CHECK_THROWS_AS(parse_correction("fix"), std::invalid_argument);
}
