#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kinetic_uq/grid.hpp"
#include "kinetic_uq/models.hpp"

using namespace kinetic_uq;

TEST_CASE("uniform grid geometry") {
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 21);
  CHECK(g.dw == doctest::Approx(2.0 / 21.0).epsilon(1e-15));
  CHECK(g.n_faces() == 22);
  CHECK(g.face(0) == doctest::Approx(-1.0));
  CHECK(g.face(21) == doctest::Approx(1.0));
  CHECK(g.center(0) == doctest::Approx(-1.0 + 0.5 * g.dw));
  CHECK(g.center(20) == doctest::Approx(1.0 - 0.5 * g.dw));
  CHECK_THROWS_AS(VelocityGrid::uniform(1.0, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(VelocityGrid::uniform(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("maxwellian has the requested moments") {
  const VelocityGrid g = VelocityGrid::uniform(-5.0, 5.0, 400);
  const Density f = maxwellian(g, 0.3, 0.11);
  const Moments m = moments(f);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.mean == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(m.temperature == doctest::Approx(0.11).epsilon(1e-8));
}

TEST_CASE("two-center mixture: mass one, mean zero, variance sigma2 + c^2") {
  // Tails at +-5 are ~exp(-100), so the midpoint rule is exact to rounding.
  const VelocityGrid g = VelocityGrid::uniform(-5.0, 5.0, 400);
  const Density f = mixture_datum(0.1, [](double) { return 0.1; })(0.0, g);
  const Moments m = moments(f);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(m.mean) < 1e-10);
  CHECK(m.temperature == doctest::Approx(0.11).epsilon(1e-6));
}

TEST_CASE("normalize rescales to unit mass") {
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 16);
  Density f(g, 3.17);
  normalize(f);
  CHECK(mass(f) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("moments reject a degenerate density") {
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 16);
  Density f(g, 0.0);
  CHECK_THROWS(moments(f));
}

TEST_CASE("require_same_grid rejects mismatched grids") {
  const VelocityGrid a = VelocityGrid::uniform(-1.0, 1.0, 16);
  const VelocityGrid b = VelocityGrid::uniform(-1.0, 1.0, 17);
  CHECK_THROWS(require_same_grid(a, b, "test"));
  CHECK_NOTHROW(require_same_grid(a, a, "test"));
}
