#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinetic_uq/diagnostics.hpp"
#include "kinetic_uq/galerkin.hpp"
#include "kinetic_uq/models.hpp"

using namespace kinetic_uq;

TEST_CASE("chaos basis is orthogonal with the advertised norms") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 6);
  REQUIRE(basis.size() == 7);
  for (int h = 0; h < basis.size(); ++h)
    for (int k = 0; k < basis.size(); ++k) {
      double s = 0.0;
      for (size_t q = 0; q < basis.quad_nodes.size(); ++q)
        s += basis.quad_weights[q] * basis.eval(h, basis.quad_nodes[q]) *
             basis.eval(k, basis.quad_nodes[q]);
      const double expect = h == k ? basis.norm_sq(h) : 0.0;
      REQUIRE(s == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
  CHECK(basis.eval(0, 0.37) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("basis shifts to a non-symmetric input interval") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(0.2, 0.8), 4);
  // Phi_1 is the affine map of theta onto [-1, 1].
  CHECK(basis.eval(1, 0.2) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(basis.eval(1, 0.8) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(basis.eval(1, 0.5) == doctest::Approx(0.0).epsilon(1e-13));
  double s = 0.0;
  for (size_t q = 0; q < basis.quad_nodes.size(); ++q)
    s += basis.quad_weights[q] * basis.eval(2, basis.quad_nodes[q]);
  CHECK(std::abs(s) < 1e-13);  // mean of a nonconstant mode vanishes
}

TEST_CASE("pair tensor: deterministic coefficients stay diagonal") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 5);
  const std::vector<double> d = pair_tensor(basis, [](double) { return 3.7; });
  const int n = basis.size();
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) {
      const double expect = h == k ? 3.7 : 0.0;
      REQUIRE(d[static_cast<size_t>(h) * n + k] == doctest::Approx(expect).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("pair tensor: a linear coefficient is tridiagonal with known entries") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 5);
  const std::vector<double> d = pair_tensor(basis, [](double t) { return t; });
  const int n = basis.size();
  auto at = [&](int h, int k) { return d[static_cast<size_t>(h) * n + k]; };
  // theta Phi_h = [(h+1) Phi_{h+1} + h Phi_{h-1}] / (2h+1), so
  // d_{h,h+1} = (h+1)/(2h+3) and d_{h,h-1} = h/(2h-1).
  CHECK(at(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(at(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at(1, 2) == doctest::Approx(2.0 / 5.0).epsilon(1e-12));
  CHECK(at(2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      if (std::abs(h - k) > 1) REQUIRE(std::abs(at(h, k)) < 1e-12);
}

TEST_CASE("projection round-trips polynomial data in theta") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 4);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 12);
  auto sampler = [&](double t) {
    Density f(g, 0.0, true);
    for (int i = 0; i < g.n_cells; ++i) {
      const double w = g.center(i);
      f[i] = 1.0 + w * t + 0.5 * w * w * t * t * t;
    }
    return f;
  };
  const GpcField field = project(basis, g, sampler);
  for (double t : {-0.9, -0.3, 0.0, 0.4, 1.0}) {
    const Density back = evaluate(field, basis, t);
    const Density direct = sampler(t);
    for (int i = 0; i < g.n_cells; ++i)
      REQUIRE(back[i] == doctest::Approx(direct[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("mean and variance fields of an affine-in-theta family") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 3);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 10);
  auto sampler = [&](double t) {
    Density f(g, 0.0, true);
    for (int i = 0; i < g.n_cells; ++i) f[i] = 2.0 + g.center(i) * t;
    return f;
  };
  const GpcField field = project(basis, g, sampler);
  const Density mean = mean_field(field);
  const Density var = variance_field(field, basis);
  for (int i = 0; i < g.n_cells; ++i) {
    REQUIRE(mean[i] == doctest::Approx(2.0).epsilon(1e-12));
    // Var(a + b theta) = b^2 / 3 for theta uniform on [-1, 1].
    const double b = g.center(i);
    REQUIRE(var[i] == doctest::Approx(b * b / 3.0).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("backward Euler chaos step conserves the mass of every mode") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 4);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 21);
  const GpcSystem sys = make_gpc_system(basis, g, [](double w) { return w; },
                                        [](double t) { return 0.1 + 0.02 * t; });
  GpcField f(g, basis.size());
  for (int h = 0; h < basis.size(); ++h)
    for (int i = 0; i < g.n_cells; ++i)
      f.at(h, i) = std::exp(-(h + 1.0) * g.center(i) * g.center(i)) + 0.1 * h;
  std::vector<double> mass0(basis.size(), 0.0);
  for (int h = 0; h < basis.size(); ++h)
    for (int i = 0; i < g.n_cells; ++i) mass0[h] += g.dw * f.at(h, i);
  for (int n = 0; n < 100; ++n) gpc_step_backward_euler(f, sys, 0.05);
  for (int h = 0; h < basis.size(); ++h) {
    double m = 0.0;
    for (int i = 0; i < g.n_cells; ++i) m += g.dw * f.at(h, i);
    REQUIRE(m == doctest::Approx(mass0[h]).epsilon(1e-12));
  }
}

TEST_CASE("deterministic diffusion leaves chaos modes decoupled") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 3);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 15);
  const GpcSystem sys = make_gpc_system(basis, g, [](double w) { return w; },
                                        [](double) { return 0.15; });
  GpcField f(g, basis.size());
  for (int i = 0; i < g.n_cells; ++i) f.at(2, i) = std::exp(-4.0 * g.center(i) * g.center(i));
  for (int n = 0; n < 20; ++n) gpc_step_backward_euler(f, sys, 0.02);
  // off-diagonal pair entries are quadrature roundoff, so the leak into the
  // other modes stays at roundoff scale
  for (int h = 0; h < basis.size(); ++h) {
    if (h == 2) continue;
    for (int i = 0; i < g.n_cells; ++i) REQUIRE(std::abs(f.at(h, i)) < 1e-13);
  }
}

TEST_CASE("zero fluctuation is an exact fixed point of the chaos fluctuation step") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 6);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 21);
  const GpcSystem sys = make_gpc_system(basis, g, [](double w) { return w; },
                                        [](double t) { return 0.11 + 0.005 * t; });
  GpcField fluct(g, basis.size());
  for (int n = 0; n < 200; ++n) mm_gpc_step_backward_euler(fluct, sys, 0.05);
  for (double v : fluct.coeff) REQUIRE(v == 0.0);
}

TEST_CASE("chaos march relaxes toward a steady profile") {
  const GpcBasis basis = make_legendre_basis(RandomInput::uniform(-1.0, 1.0), 4);
  const VelocityGrid g = VelocityGrid::uniform(-1.0, 1.0, 21);
  const GpcSystem sys = make_gpc_system(basis, g, [](double w) { return w; },
                                        [](double t) { return 0.11 + 0.005 * t; });
  auto sampler = [&](double t) { return mixture_datum(0.1, [t](double) { return 0.1 + 0.005 * t; })(t, g); };
  GpcField f = project(basis, g, sampler);
  for (int n = 0; n < 200; ++n) gpc_step_backward_euler(f, sys, 0.1);
  const GpcField f20 = f;
  for (int n = 0; n < 50; ++n) gpc_step_backward_euler(f, sys, 0.1);
  const Density a = mean_field(f20), b = mean_field(f);
  CHECK(error_norms(a, b).linf < 1e-10);  // settled
  double mn = 0.0;
  for (int i = 0; i < g.n_cells; ++i) mn = std::min(mn, b[i]);
  CHECK(mn > -1e-6);  // resolved central steady profile should not oscillate
}
