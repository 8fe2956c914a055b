#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinetic_uq/random_input.hpp"

using namespace kinetic_uq;

TEST_CASE("two-point Gauss-Legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  REQUIRE(x.size() == 2);
  CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadrature integrates theta^8 exactly with five nodes") {
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const GaussQuadrature q = quadrature_nodes(in, 5);
  double s = 0.0, wsum = 0.0;
  for (int k = 0; k < q.size(); ++k) {
    s += q.weights[k] * std::pow(q.nodes[k], 8);
    wsum += q.weights[k];
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("quadrature nodes live inside the input interval") {
  const RandomInput in = RandomInput::uniform(0.5, 2.5);
  const GaussQuadrature q = quadrature_nodes(in, 12);
  double wsum = 0.0;
  for (int k = 0; k < q.size(); ++k) {
    CHECK(q.nodes[k] > 0.5);
    CHECK(q.nodes[k] < 2.5);
    wsum += q.weights[k];
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sample streams are reproducible and decorrelated by index") {
  SampleStream a(123, 7), b(123, 7), c(123, 8);
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    const double ua = a.uniform01();
    same = same && (ua == b.uniform01());
    differ = differ || (ua != c.uniform01());
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("uniform input samples stay inside [a, b] and average near the middle") {
  const RandomInput in = RandomInput::uniform(-0.2, 0.6);
  SampleStream s(987654321, 0);
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double t = in.sample(s);
    REQUIRE(t >= -0.2);
    REQUIRE(t <= 0.6);
    acc += t;
  }
  CHECK(acc / n == doctest::Approx(0.2).epsilon(0.05));
  CHECK(in.density(0.0) == doctest::Approx(1.0 / 0.8).epsilon(1e-14));
  CHECK(in.density(1.0) == 0.0);
}
