#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/grid.hpp"
#include "kinetic_uq/models.hpp"
#include "kinetic_uq/random_input.hpp"

using namespace kinetic_uq;

namespace {

DriftDiffusion linear_dd(double u, double d) {
  DriftDiffusion dd;
  dd.drift_builder = [u](const Density&) {
    return [u](double w) { return w - u; };
  };
  dd.diffusion = [d](double) { return d; };
  dd.diffusion_prime = [](double) { return 0.0; };
  return dd;
}

}  // namespace

TEST_CASE("face weight closed form") {
  // delta(ln 2) = 1/ln2 + 1/(1-2) = 1/ln2 - 1
  const double l2 = std::log(2.0);
  CHECK(delta_from_lambda(l2) == doctest::Approx(1.0 / l2 - 1.0).epsilon(1e-14));
  CHECK(delta_from_lambda(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // Series branch: 1/2 - lambda/12 + O(lambda^3).
  CHECK(delta_from_lambda(1e-10) == doctest::Approx(0.5 - 1e-10 / 12.0).epsilon(1e-15));
  CHECK(delta_from_lambda(-1e-12) == doctest::Approx(0.5 + 1e-12 / 12.0).epsilon(1e-15));
}

TEST_CASE("face weight bounds and symmetry over a wide lambda range") {
  for (double lam = -50.0; lam <= 50.0; lam += 0.01) {
    const double d = delta_from_lambda(lam);
    REQUIRE(d > 0.0);
    REQUIRE(d < 1.0);
    REQUIRE(d == doctest::Approx(1.0 - delta_from_lambda(-lam)).epsilon(1e-12));
  }
}

TEST_CASE("logarithmic mean") {
  CHECK(log_mean(1.0, 2.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-14));
  CHECK(log_mean(3.7, 3.7) == doctest::Approx(3.7).epsilon(1e-15));
  SampleStream s(2026, 0);
  for (int i = 0; i < 2000; ++i) {
    const double a = 1e-6 + s.uniform01() * 10.0;
    const double b = 1e-6 + s.uniform01() * 10.0;
    const double m = log_mean(a, b);
    REQUIRE(m >= std::min(a, b) - 1e-15);
    REQUIRE(m <= std::max(a, b) + 1e-15);
    const double gm = std::sqrt(a * b);
    const double am = 0.5 * (a + b);
    REQUIRE(m >= gm - 1e-12 * am);
    REQUIRE(m <= am + 1e-15 * am);
  }
}

TEST_CASE("entropic face weight matches the logarithmic mean and stays in (0,1)") {
  // delta fL + (1-delta) fR = logmean(fL, fR)
  CHECK(entropic_delta(1.0, 2.0) == doctest::Approx(2.0 - 1.0 / std::log(2.0)).epsilon(1e-14));
  SampleStream s(2027, 0);
  for (int i = 0; i < 2000; ++i) {
    const double a = 1e-4 + s.uniform01() * 5.0;
    const double b = 1e-4 + s.uniform01() * 5.0;
    if (a == b) continue;
    const double d = entropic_delta(a, b);
    REQUIRE(d > 0.0);
    REQUIRE(d < 1.0);
    REQUIRE(d * a + (1.0 - d) * b == doctest::Approx(log_mean(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature weights for a linear drift are rule-independent") {
  // For B linear in w the gap integral is exact under every face rule, so
  // lambda_j = dw * B(face_j) / D.
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 10);
  const DriftDiffusion dd = linear_dd(0.3, 0.25);
  const Density f(g, 1.0);
  for (FaceRule rule : {FaceRule::midpoint, FaceRule::open_nc2, FaceRule::open_nc4,
                        FaceRule::open_nc6, FaceRule::gauss}) {
    QuadSpec q;
    q.rule = rule;
    const FluxWeights w = cc_weights(f, dd, q);
    for (int j = 1; j < g.n_cells; ++j) {
      const double expected = g.dw * (g.face(j) - 0.3) / 0.25;
      REQUIRE(w.lambda[j] == doctest::Approx(expected).epsilon(1e-13));
      REQUIRE(w.c_tilde[j] == doctest::Approx(0.25 * expected / g.dw).epsilon(1e-13));
      REQUIRE(w.delta[j] == doctest::Approx(delta_from_lambda(expected)).epsilon(1e-13));
    }
  }
}

TEST_CASE("two-cell flux against a hand-composed value") {
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 2);
  const DriftDiffusion dd = linear_dd(0.2, 0.5);
  Density f(g);
  f[0] = 0.75;
  f[1] = 0.25;
  QuadSpec q;
  const std::vector<double> flux = cc_flux(f, cc_weights(f, dd, q), dd);
  REQUIRE(flux.size() == 3);
  CHECK(flux[0] == 0.0);
  CHECK(flux[2] == 0.0);
  const double lam = -0.4;  // dw * (0 - 0.2) / 0.5 with dw = 1
  const double delta = 1.0 / lam - 1.0 / std::expm1(lam);
  const double c_tilde = 0.5 * lam / 1.0;
  const double expected = c_tilde * ((1.0 - delta) * f[1] + delta * f[0]) + 0.5 * (f[1] - f[0]);
  CHECK(flux[1] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("exact weights annihilate the flux of their steady state") {
  const VelocityGrid g = VelocityGrid::uniform(-3.0, 3.0, 64);
  const DriftDiffusion dd = linear_dd(0.0, 0.11);
  const Density f_inf = maxwellian(g, 0.0, 0.11);
  const FluxWeights w = exact_weights(f_inf, dd);
  for (double v : cc_flux(f_inf, w, dd)) REQUIRE(std::abs(v) < 1e-15);
  for (double v : entropic_flux(f_inf, w, dd)) REQUIRE(std::abs(v) < 1e-14);
}

TEST_CASE("face rules integrate polynomials to their design order") {
  auto integrate = [](FaceRule rule, int gauss_points, int degree) {
    QuadSpec q;
    q.rule = rule;
    q.gauss_points = gauss_points;
    std::vector<double> x, w;
    face_rule_points(q, x, w);
    double s = 0.0;
    for (size_t k = 0; k < x.size(); ++k) s += w[k] * std::pow(x[k], degree);
    return s;  // reference: integral of x^degree over [0,1] is 1/(degree+1)
  };
  for (FaceRule rule : {FaceRule::midpoint, FaceRule::open_nc2, FaceRule::open_nc4,
                        FaceRule::open_nc6, FaceRule::gauss}) {
    CHECK(integrate(rule, 20, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate(rule, 20, 1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK(integrate(FaceRule::open_nc4, 20, 3) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(integrate(FaceRule::open_nc6, 20, 5) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(integrate(FaceRule::gauss, 20, 12) == doctest::Approx(1.0 / 13.0).epsilon(1e-13));
  // Open 2-point is first order only.
  CHECK(integrate(FaceRule::open_nc2, 20, 2) == doctest::Approx(5.0 / 18.0).epsilon(1e-13));
}

TEST_CASE("interior face rule nodes avoid the gap endpoints") {
  std::vector<double> x, w;
  QuadSpec q;
  q.rule = FaceRule::open_nc4;
  face_rule_points(q, x, w);
  REQUIRE(x == std::vector<double>{0.25, 0.5, 0.75});
  REQUIRE(w[0] == doctest::Approx(2.0 / 3.0));
  REQUIRE(w[1] == doctest::Approx(-1.0 / 3.0));
  REQUIRE(w[2] == doctest::Approx(2.0 / 3.0));
  q.rule = FaceRule::open_nc6;
  face_rule_points(q, x, w);
  REQUIRE(x.size() == 5);
  for (int k = 0; k < 5; ++k) REQUIRE(x[k] == doctest::Approx((k + 1) / 6.0));
  REQUIRE(w[0] == doctest::Approx(11.0 / 20.0));
  REQUIRE(w[1] == doctest::Approx(-14.0 / 20.0));
  REQUIRE(w[2] == doctest::Approx(26.0 / 20.0));
}

TEST_CASE("singular diffusion is rejected") {
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 8);
  DriftDiffusion dd = linear_dd(0.0, 1.0);
  dd.diffusion = [](double w) { return w; };  // nonpositive on half the grid
  const Density f(g, 1.0);
  QuadSpec q;
  CHECK_THROWS(cc_weights(f, dd, q));
}

TEST_CASE("mesh guard flags advection-dominated faces") {
  // With B = w the face speed is w itself, so the guard compares dw against 2D.
  const Density coarse(VelocityGrid::uniform(-1.0, 1.0, 4), 1.0);
  const Density fine(VelocityGrid::uniform(-1.0, 1.0, 512), 1.0);
  const DriftDiffusion dd = linear_dd(0.0, 1e-2);
  QuadSpec q;
  CHECK(cc_weights(coarse, dd, q).mesh_guard_violated);
  CHECK_FALSE(cc_weights(fine, dd, q).mesh_guard_violated);
}
