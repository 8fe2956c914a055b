#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kinetic_uq/diagnostics.hpp"
#include "kinetic_uq/sampling.hpp"

using namespace kinetic_uq;

namespace {

ModelSpec mixture_model() {
  ModelSpec m = linear_fp_model(0.0, [](double t) { return 0.11 + 0.005 * t; });
  m.initial_datum = mixture_datum(0.1, [](double t) { return 0.1 + 0.005 * t; });
  return m;
}

SolveOptions explicit_opt(const VelocityGrid& g, double dt, double t_final) {
  SolveOptions o;
  o.scheme = TimeScheme::explicit_euler;
  o.dt = dt;
  o.t_final = t_final;
  return o;
}

double l1_norm(const Density& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += std::abs(f[i]);
  return s * f.grid.dw;
}

}  // namespace

TEST_CASE("exact weights hold the march on the closed-form steady state") {
  ModelSpec m = linear_fp_model(0.0, [](double) { return 0.11; });
  m.initial_datum = two_bump_datum(10.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 40);
  SolveOptions o;
  o.scheme = TimeScheme::semi_implicit;
  o.weights = WeightMode::exact;
  o.dt = 0.1;  // far above the nominal advective bound on purpose
  o.t_final = 100.0;
  const SolveResult r = solve_single(m, 0.0, g, o);
  CHECK_FALSE(r.control.warnings.empty());
  CHECK(error_norms(r.f, m.steady_state(0.0, g)).l1 < 1e-12);
  double mn = r.f[0];
  for (int i = 0; i < r.f.size(); ++i) mn = std::min(mn, r.f[i]);
  CHECK(mn >= 0.0);
}

TEST_CASE("full march equals equilibrium plus evolved fluctuation") {
  const ModelSpec m = mixture_model();
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 32);
  const double dt = 1e-5;
  const SolveOptions o = explicit_opt(g, dt, 100 * dt);
  const SolveResult full = solve_single(m, 0.0, g, o);

  const Density datum = m.initial_datum(0.0, g);
  const Density f_inf = m.equilibrium_from_datum(0.0, datum);
  const DriftDiffusion dd = m.drift_diffusion(0.0);
  QuadSpec q;
  const std::vector<double> ref = micro_macro_ref_flux(f_inf, dd, q);
  Density fluct(g, 0.0, true);
  for (int i = 0; i < g.n_cells; ++i) fluct[i] = datum[i] - f_inf[i];
  for (int n = 0; n < 100; ++n) evolve_micro_macro(fluct, f_inf, dd, q, ref, dt);

  double err = 0.0;
  for (int i = 0; i < g.n_cells; ++i)
    err = std::max(err, std::abs(full.f[i] - (f_inf[i] + fluct[i])));
  CHECK(err < 1e-10);
}

TEST_CASE("zero fluctuation is an exact fixed point") {
  const ModelSpec m = mixture_model();
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 32);
  const Density f_inf = m.equilibrium_from_datum(0.0, m.initial_datum(0.0, g));
  const DriftDiffusion dd = m.drift_diffusion(0.0);
  QuadSpec q;
  const std::vector<double> ref = micro_macro_ref_flux(f_inf, dd, q);
  Density fluct(g, 0.0, true);
  for (int n = 0; n < 50; ++n) evolve_micro_macro(fluct, f_inf, dd, q, ref, 1e-3);
  for (int i = 0; i < g.n_cells; ++i) REQUIRE(fluct[i] == 0.0);
}

TEST_CASE("fluctuation norm contracts step by step") {
  const ModelSpec m = mixture_model();
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 32);
  const Density f_inf = m.equilibrium_from_datum(0.0, m.initial_datum(0.0, g));
  const DriftDiffusion dd = m.drift_diffusion(0.0);
  QuadSpec q;
  const std::vector<double> ref = micro_macro_ref_flux(f_inf, dd, q);

  Density fluct(g, 0.0, true);
  const Density a = maxwellian(g, 0.5, 0.1), b = maxwellian(g, -0.5, 0.1);
  for (int i = 0; i < g.n_cells; ++i) fluct[i] = 0.3 * (a[i] - b[i]);

  const FluxWeights w = cc_weights(f_inf, dd, q);
  const double dt = 0.5 * cfl_explicit(w, dd, g);
  double prev = l1_norm(fluct);
  const double start = prev;
  for (int n = 0; n < 200; ++n) {
    evolve_micro_macro(fluct, f_inf, dd, q, ref, dt);
    const double cur = l1_norm(fluct);
    REQUIRE(cur <= prev * (1.0 + 1e-14));
    prev = cur;
  }
  CHECK(prev < 0.5 * start);
}

TEST_CASE("one-node collocation is the midpoint solve") {
  const ModelSpec m = mixture_model();
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.1);
  const CollocationResult r = collocate(m, in, 1, g, o);
  REQUIRE(r.nodes.size() == 1);
  CHECK(r.nodes[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  const SolveResult single = solve_single(m, r.nodes[0], g, o);
  for (int i = 0; i < g.n_cells; ++i) {
    REQUIRE(r.fields[0][i] == single.f[i]);
    REQUIRE(r.estimate.variance[i] == 0.0);
  }
}

TEST_CASE("an input-independent model has exactly zero variance") {
  ModelSpec m = linear_fp_model(0.0, [](double) { return 0.11; });
  m.initial_datum = mixture_datum(0.1, [](double) { return 0.1; });
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.1);

  const CollocationResult c = collocate(m, in, 5, g, o);
  McOptions mc;
  mc.samples = 8;
  mc.seed = 7;
  const UqEstimate e = mc_estimate(m, in, g, o, mc);
  const SolveResult single = solve_single(m, 0.123, g, o);
  for (int i = 0; i < g.n_cells; ++i) {
    REQUIRE(c.estimate.variance[i] <= 1e-28);  // quadrature weight-sum rounding
    REQUIRE(e.variance[i] == 0.0);             // 8 identical samples, exact mean
    REQUIRE(std::abs(e.mean[i] - single.f[i]) < 1e-13);
  }
  CHECK(e.method == UqMethod::mc);
  CHECK(e.n_nodes_or_samples == 8);
  CHECK(e.seeded);
  CHECK(e.seed == 7);
}

TEST_CASE("sampling estimators are seed-deterministic and thread-invariant") {
  const ModelSpec m = mixture_model();
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.1);
  const std::vector<double> times{0.05, 0.1};

  McOptions mc1;
  mc1.samples = 7;
  mc1.seed = 99;
  mc1.threads = 1;
  McOptions mc3 = mc1;
  mc3.threads = 3;
  const UqSeries a = mc_series(m, in, g, o, mc1, times);
  const UqSeries b = mc_series(m, in, g, o, mc1, times);
  const UqSeries c = mc_series(m, in, g, o, mc3, times);
  REQUIRE(a.estimates.size() == 2);
  for (size_t k = 0; k < a.estimates.size(); ++k)
    for (int i = 0; i < g.n_cells; ++i) {
      REQUIRE(a.estimates[k].mean[i] == b.estimates[k].mean[i]);
      REQUIRE(a.estimates[k].mean[i] == c.estimates[k].mean[i]);
      REQUIRE(a.estimates[k].variance[i] == c.estimates[k].variance[i]);
    }

  M3cOptions m3;
  m3.samples = 6;
  m3.bank = BankMode::quadrature;
  m3.bank_nodes = 8;
  m3.seed = 41;
  m3.threads = 1;
  M3cOptions m3t = m3;
  m3t.threads = 3;
  const M3cSeries s1 = m3c_series(m, in, g, o, m3, times);
  const M3cSeries s3 = m3c_series(m, in, g, o, m3t, times);
  for (size_t k = 0; k < s1.series.estimates.size(); ++k)
    for (int i = 0; i < g.n_cells; ++i)
      REQUIRE(s1.series.estimates[k].mean[i] == s3.series.estimates[k].mean[i]);
}

TEST_CASE("micro-macro estimator collapses to the plain solve without input dependence") {
  ModelSpec m = linear_fp_model(0.0, [](double) { return 0.11; });
  m.initial_datum = mixture_datum(0.1, [](double) { return 0.1; });
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.2);
  M3cOptions m3;
  m3.samples = 4;
  m3.bank = BankMode::quadrature;
  m3.bank_nodes = 6;
  m3.seed = 5;
  const UqEstimate e = m3c_estimate(m, in, g, o, m3);
  const SolveResult single = solve_single(m, 0.0, g, o);
  for (int i = 0; i < g.n_cells; ++i)
    REQUIRE(std::abs(e.mean[i] - single.f[i]) < 1e-12);
}

TEST_CASE("variance fading freezes on an exactly zero spread") {
  ModelSpec m = linear_fp_model(0.0, [](double) { return 0.11; });
  m.initial_datum = mixture_datum(0.1, [](double) { return 0.1; });
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.1);
  Fm3cOptions fm;
  fm.initial_samples = 4;  // power of two: the sample mean is bitwise exact
  fm.bank = BankMode::quadrature;
  fm.bank_nodes = 4;
  fm.seed = 11;
  const Fm3cSeries s = fm3c_series(m, in, g, o, fm, {0.1});
  for (double v : s.variance_trace) REQUIRE(v == 0.0);
  for (int n : s.sample_trace) REQUIRE(n == 4);
}

TEST_CASE("variance fading never grows the active set") {
  const ModelSpec m = mixture_model();
  const RandomInput in = RandomInput::uniform(-1.0, 1.0);
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.5);
  Fm3cOptions fm;
  fm.initial_samples = 32;
  fm.bank = BankMode::sample;
  fm.bank_samples = 32;
  fm.seed = 2024;
  const Fm3cSeries s = fm3c_series(m, in, g, o, fm, {0.25, 0.5});
  REQUIRE_FALSE(s.sample_trace.empty());
  int prev = fm.initial_samples;
  for (int n : s.sample_trace) {
    REQUIRE(n >= 1);
    REQUIRE(n <= prev);
    prev = n;
  }
  for (const UqEstimate& e : s.series.estimates)
    for (int i = 0; i < g.n_cells; ++i) REQUIRE(std::isfinite(e.mean[i]));
}

TEST_CASE("snapshot marching matches the plain solve and validates its times") {
  const ModelSpec m = mixture_model();
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  const SolveOptions o = explicit_opt(g, 0.01, 0.1);
  const std::vector<Density> snaps = solve_at_times(m, 0.0, g, o, {0.04, 0.1});
  REQUIRE(snaps.size() == 2);
  const SolveResult full = solve_single(m, 0.0, g, o);
  for (int i = 0; i < g.n_cells; ++i) REQUIRE(snaps[1][i] == full.f[i]);
  CHECK_THROWS(solve_at_times(m, 0.0, g, o, {0.033}));
  CHECK_THROWS(solve_at_times(m, 0.0, g, o, {0.1, 0.04}));
}

TEST_CASE("explicit runs past the stability bound carry a warning") {
  const ModelSpec m = mixture_model();
  const VelocityGrid g = VelocityGrid::uniform(-2.0, 2.0, 24);
  SolveOptions o = explicit_opt(g, 0.5, 1.0);
  const SolveResult r = solve_single(m, 0.0, g, o);
  CHECK_FALSE(r.control.warnings.empty());
}

TEST_CASE("parallel_for touches every index exactly once") {
  std::vector<std::atomic<int>> hits(13);
  for (auto& h : hits) h = 0;
  parallel_for(13, 3, [&](int i) { hits[static_cast<size_t>(i)] += 1; });
  for (auto& h : hits) REQUIRE(h == 1);
}
