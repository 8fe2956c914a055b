#include "kinetic_uq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "kinetic_uq/diagnostics.hpp"
#include "kinetic_uq/galerkin.hpp"
#include "kinetic_uq/models.hpp"
#include "kinetic_uq/sampling.hpp"
#include "kinetic_uq/transport.hpp"
#include "kinetic_uq/version.hpp"

namespace kinetic_uq {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scheme_name(TimeScheme s) {
  switch (s) {
    case TimeScheme::explicit_euler: return "explicit_euler";
    case TimeScheme::ssp_rk2: return "ssp_rk2";
    case TimeScheme::ssp_rk3: return "ssp_rk3";
    case TimeScheme::semi_implicit: return "semi_implicit";
  }
  return "?";
}

std::string weights_name(WeightMode w) {
  return w == WeightMode::exact ? "exact" : "quasi_steady";
}

std::string flux_name(FluxForm f) { return f == FluxForm::cc ? "cc" : "entropic"; }

std::string face_rule_name(FaceRule r) {
  switch (r) {
    case FaceRule::midpoint: return "midpoint";
    case FaceRule::open_nc2: return "open_nc2";
    case FaceRule::open_nc4: return "open_nc4";
    case FaceRule::open_nc6: return "open_nc6";
    case FaceRule::gauss: return "gauss";
  }
  return "?";
}

std::string bank_name(BankMode b) {
  return b == BankMode::sample ? "sample" : "quadrature";
}

struct Ctx {
  const ScenarioConfig& c;
  const RunOptions& opt;
  ModelSpec model;
  RandomInput input;
  VelocityGrid grid;
  SolveOptions solve;
  std::uint64_t seed = 0;
  bool seeded = false;
  RunResult result;

  Ctx(const ScenarioConfig& config, const RunOptions& options) : c(config), opt(options) {}
};

std::ofstream open_csv(Ctx& ctx, const std::string& name) {
  std::filesystem::path p = std::filesystem::path(ctx.opt.out_dir) / name;
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  ctx.result.files.push_back(name);
  return f;
}

// The scenario coefficients define one theta-family per model. Overriding the
// datum re-points the steady state at the matched equilibrium for the models
// whose invariants depend on the datum; the linear model relaxes to the
// Maxwellian at (u, T) no matter where it starts.
ModelSpec build_model(const ScenarioConfig& c) {
  const auto& p = c.params;
  if (c.model == "linear_fp") {
    const double u = p.at("u"), cm = p.at("mixture_c");
    const double s0 = p.at("sigma2_base"), s1 = p.at("sigma2_slope");
    auto sig = [s0, s1](double th) { return s0 + s1 * th; };
    ModelSpec m = linear_fp_model(u, [sig, cm](double th) { return sig(th) + cm * cm; });
    m.initial_datum = mixture_datum(cm, sig);
    return m;
  }
  if (c.model == "opinion") {
    ModelSpec m = opinion_model(
        [pb = p.at("p_base"), ps = p.at("p_slope")](double th) { return pb + ps * th; },
        p.at("sigma2"));
    m.initial_datum = two_bump_datum(p.at("datum_c"));
    auto datum = m.initial_datum;
    auto eq = m.equilibrium_from_datum;
    m.steady_state = [datum, eq](double th, const VelocityGrid& g) {
      return eq(th, datum(th, g));
    };
    return m;
  }
  if (c.model == "wealth") {
    ModelSpec m = wealth_model(
        [s0 = p.at("sigma2_base"), s1 = p.at("sigma2_slope")](double th) {
          return s0 + s1 * th;
        });
    m.initial_datum = bump_datum(p.at("datum_c"), p.at("datum_mean"));
    auto datum = m.initial_datum;
    auto eq = m.equilibrium_from_datum;
    m.steady_state = [datum, eq](double th, const VelocityGrid& g) {
      return eq(th, datum(th, g));
    };
    return m;
  }
  return swarming_model(p.at("alpha"),
                        [d0 = p.at("d_base"), d1 = p.at("d_slope")](double th) {
                          return d0 + d1 * th;
                        });
}

Density expected_steady(const Ctx& ctx, int nodes) {
  GaussQuadrature q = quadrature_nodes(ctx.input, nodes);
  Density acc(ctx.grid);
  for (int k = 0; k < q.size(); ++k) {
    Density s = ctx.model.steady_state(q.nodes[k], ctx.grid);
    for (int i = 0; i < acc.size(); ++i) acc[i] += q.weights[k] * s[i];
  }
  return acc;
}

// Quadrature-weighted expectation of the solved field at each snapshot time;
// serial over nodes so the result never depends on scheduling.
std::vector<Density> reference_series(const Ctx& ctx, int nodes,
                                      const std::vector<double>& times) {
  GaussQuadrature q = quadrature_nodes(ctx.input, nodes);
  std::vector<Density> acc(times.size(), Density(ctx.grid));
  for (int k = 0; k < q.size(); ++k) {
    std::vector<Density> fields =
        solve_at_times(ctx.model, q.nodes[k], ctx.grid, ctx.solve, times);
    for (size_t s = 0; s < times.size(); ++s)
      for (int i = 0; i < ctx.grid.n_cells; ++i)
        acc[s][i] += q.weights[k] * fields[s][i];
  }
  return acc;
}

// ---- method drivers ----

void run_collocation(Ctx& ctx) {
  CollocationResult col =
      collocate(ctx.model, ctx.input, ctx.c.nodes, ctx.grid, ctx.solve, ctx.opt.threads);
  Density ref = expected_steady(ctx, ctx.c.reference_nodes);
  std::ofstream f = open_csv(ctx, ctx.c.id + "_mean.csv");
  f << "w,mean,variance,reference,abs_error\n";
  for (int i = 0; i < ctx.grid.n_cells; ++i)
    f << fmt(ctx.grid.center(i)) << ',' << fmt(col.estimate.mean[i]) << ','
      << fmt(col.estimate.variance[i]) << ',' << fmt(ref[i]) << ','
      << fmt(std::fabs(col.estimate.mean[i] - ref[i])) << '\n';
}

void run_entropy(Ctx& ctx) {
  std::ofstream traces = open_csv(ctx, ctx.c.id + "_entropy.csv");
  traces << "form,node,theta,time,entropy,dissipation\n";
  std::ofstream expected = open_csv(ctx, ctx.c.id + "_expected_entropy.csv");
  expected << "form,time,expected_entropy\n";
  for (FluxForm form : {FluxForm::cc, FluxForm::entropic}) {
    SolveOptions so = ctx.solve;
    so.flux = form;
    so.record_entropy = true;
    CollocationResult col =
        collocate(ctx.model, ctx.input, ctx.c.nodes, ctx.grid, so, ctx.opt.threads);
    for (size_t k = 0; k < col.traces.size(); ++k) {
      const EntropyTrace& tr = col.traces[k];
      for (size_t t = 0; t < tr.times.size(); ++t)
        traces << flux_name(form) << ',' << k << ',' << fmt(col.nodes[k]) << ','
               << fmt(tr.times[t]) << ',' << fmt(tr.entropy[t]) << ','
               << fmt(tr.dissipation[t]) << '\n';
    }
    const size_t n_times = col.traces.front().times.size();
    for (size_t t = 0; t < n_times; ++t) {
      double h = 0.0;
      for (size_t k = 0; k < col.traces.size(); ++k)
        h += col.weights[k] * col.traces[k].entropy[t];
      expected << flux_name(form) << ',' << fmt(col.traces.front().times[t]) << ','
               << fmt(h) << '\n';
    }
  }
}

void run_mc(Ctx& ctx) {
  const std::vector<double>& times = ctx.c.snapshots;
  std::vector<Density> ref = reference_series(ctx, ctx.c.reference_nodes, times);
  std::ofstream f = open_csv(ctx, ctx.c.id + "_error.csv");
  f << "samples,time,mean_l1_error\n";
  for (int m : ctx.c.sample_counts) {
    std::vector<double> acc(times.size(), 0.0);
    for (int rep = 0; rep < ctx.c.repetitions; ++rep) {
      McOptions mo{m, ctx.seed + static_cast<std::uint64_t>(rep), ctx.opt.threads};
      UqSeries s = mc_series(ctx.model, ctx.input, ctx.grid, ctx.solve, mo, times);
      for (size_t i = 0; i < times.size(); ++i)
        acc[i] += error_norms(s.estimates[i].mean, ref[i]).l1;
    }
    for (size_t i = 0; i < times.size(); ++i)
      f << m << ',' << fmt(times[i]) << ',' << fmt(acc[i] / ctx.c.repetitions) << '\n';
  }
}

void run_m3c(Ctx& ctx) {
  const std::vector<double>& times = ctx.c.snapshots;
  std::vector<Density> ref = reference_series(ctx, ctx.c.reference_nodes, times);
  std::vector<double> acc_m3c(times.size(), 0.0), acc_mc(times.size(), 0.0);
  for (int rep = 0; rep < ctx.c.repetitions; ++rep) {
    const std::uint64_t seed = ctx.seed + static_cast<std::uint64_t>(rep);
    M3cOptions mo{ctx.c.samples, ctx.c.bank,   ctx.c.bank_samples,
                  ctx.c.bank_nodes, seed, ctx.opt.threads};
    M3cSeries ms = m3c_series(ctx.model, ctx.input, ctx.grid, ctx.solve, mo, times);
    McOptions plain{ctx.c.samples, seed, ctx.opt.threads};
    UqSeries ps = mc_series(ctx.model, ctx.input, ctx.grid, ctx.solve, plain, times);
    for (size_t i = 0; i < times.size(); ++i) {
      acc_m3c[i] += error_norms(ms.series.estimates[i].mean, ref[i]).l1;
      acc_mc[i] += error_norms(ps.estimates[i].mean, ref[i]).l1;
    }
  }
  std::ofstream f = open_csv(ctx, ctx.c.id + "_error.csv");
  f << "method,samples,time,mean_l1_error\n";
  for (size_t i = 0; i < times.size(); ++i)
    f << "m3c," << ctx.c.samples << ',' << fmt(times[i]) << ','
      << fmt(acc_m3c[i] / ctx.c.repetitions) << '\n';
  for (size_t i = 0; i < times.size(); ++i)
    f << "mc," << ctx.c.samples << ',' << fmt(times[i]) << ','
      << fmt(acc_mc[i] / ctx.c.repetitions) << '\n';
}

void run_fm3c(Ctx& ctx) {
  const std::vector<double>& times = ctx.c.snapshots;
  std::vector<Density> ref = reference_series(ctx, ctx.c.reference_nodes, times);
  Fm3cOptions fo{ctx.c.initial_samples, ctx.c.bank, ctx.c.bank_samples,
                 ctx.c.bank_nodes,      ctx.seed,   ctx.opt.threads};
  Fm3cSeries fs = fm3c_series(ctx.model, ctx.input, ctx.grid, ctx.solve, fo, times);
  M3cOptions mo{ctx.c.initial_samples, ctx.c.bank, ctx.c.bank_samples,
                ctx.c.bank_nodes,      ctx.seed,   ctx.opt.threads};
  M3cSeries ms = m3c_series(ctx.model, ctx.input, ctx.grid, ctx.solve, mo, times);

  std::ofstream trace = open_csv(ctx, ctx.c.id + "_trace.csv");
  trace << "step,time,samples,variance\n";
  for (size_t n = 0; n < fs.step_times.size(); ++n)
    trace << n + 1 << ',' << fmt(fs.step_times[n]) << ',' << fs.sample_trace[n] << ','
          << fmt(fs.variance_trace[n]) << '\n';

  std::ofstream err = open_csv(ctx, ctx.c.id + "_error.csv");
  err << "method,time,l1_error\n";
  for (size_t i = 0; i < times.size(); ++i)
    err << "fm3c," << fmt(times[i]) << ','
        << fmt(error_norms(fs.series.estimates[i].mean, ref[i]).l1) << '\n';
  for (size_t i = 0; i < times.size(); ++i)
    err << "m3c," << fmt(times[i]) << ','
        << fmt(error_norms(ms.series.estimates[i].mean, ref[i]).l1) << '\n';
}

void run_gpc(Ctx& ctx) {
  const auto& p = ctx.c.params;
  const double u = p.at("u"), cm = p.at("mixture_c");
  const double s0 = p.at("sigma2_base"), s1 = p.at("sigma2_slope");
  GpcBasis basis = make_legendre_basis(ctx.input, ctx.c.chaos_order);
  GpcSystem sys = make_gpc_system(
      basis, ctx.grid, [u](double w) { return w - u; },
      [s0, s1, cm](double th) { return s0 + s1 * th + cm * cm; });

  GpcField standard = project(basis, ctx.grid, [&](double th) {
    return ctx.model.initial_datum(th, ctx.grid);
  });
  GpcField fluctuation = project(basis, ctx.grid, [&](double th) {
    Density d = ctx.model.initial_datum(th, ctx.grid);
    Density s = ctx.model.steady_state(th, ctx.grid);
    for (int i = 0; i < d.size(); ++i) d[i] -= s[i];
    d.signed_values = true;
    return d;
  });
  Density ref = expected_steady(ctx, ctx.c.reference_nodes);
  const Density zero(ctx.grid);

  std::vector<long long> steps;
  for (double t : ctx.c.snapshots) steps.push_back(std::llround(t / ctx.c.dt));

  std::ofstream err = open_csv(ctx, ctx.c.id + "_error.csv");
  err << "variant,time,l2_error\n";
  long long n = 0;
  Density mean_g(ctx.grid);
  for (size_t s = 0; s < steps.size(); ++s) {
    for (; n < steps[s]; ++n) {
      gpc_step_backward_euler(standard, sys, ctx.c.dt);
      mm_gpc_step_backward_euler(fluctuation, sys, ctx.c.dt);
    }
    mean_g = mean_field(fluctuation);
    err << "standard," << fmt(ctx.c.snapshots[s]) << ','
        << fmt(error_norms(mean_field(standard), ref).l2) << '\n';
    err << "micro_macro," << fmt(ctx.c.snapshots[s]) << ','
        << fmt(error_norms(mean_g, zero).l2) << '\n';
  }

  Density mean_std = mean_field(standard);
  std::ofstream mean = open_csv(ctx, ctx.c.id + "_mean.csv");
  mean << "w,standard_mean,micro_macro_mean,reference\n";
  for (int i = 0; i < ctx.grid.n_cells; ++i)
    mean << fmt(ctx.grid.center(i)) << ',' << fmt(mean_std[i]) << ','
         << fmt(ref[i] + mean_g[i]) << ',' << fmt(ref[i]) << '\n';
}

void run_node_sweep(Ctx& ctx) {
  Density ref = expected_steady(ctx, ctx.c.reference_nodes);
  std::ofstream sweep = open_csv(ctx, ctx.c.id + "_sweep.csv");
  sweep << "face_rule,nodes,l1_error\n";
  CollocationResult last;
  for (FaceRule rule : ctx.c.face_rules) {
    SolveOptions so = ctx.solve;
    so.quad.rule = rule;
    for (int m : ctx.c.node_counts) {
      last = collocate(ctx.model, ctx.input, m, ctx.grid, so, ctx.opt.threads);
      sweep << face_rule_name(rule) << ',' << m << ','
            << fmt(error_norms(last.estimate.mean, ref).l1) << '\n';
    }
  }
  std::ofstream mean = open_csv(ctx, ctx.c.id + "_mean.csv");
  mean << "w,mean,variance,reference,abs_error\n";
  for (int i = 0; i < ctx.grid.n_cells; ++i)
    mean << fmt(ctx.grid.center(i)) << ',' << fmt(last.estimate.mean[i]) << ','
         << fmt(last.estimate.variance[i]) << ',' << fmt(ref[i]) << ','
         << fmt(std::fabs(last.estimate.mean[i] - ref[i])) << '\n';
}

// ---- phase-space scenario ----

PhaseDensity phase_datum(const ScenarioConfig& c, const SpaceGrid& xg,
                         const VelocityGrid& wg) {
  const double xs = c.params.at("x_sigma");
  const double wmu = c.params.at("w_mu");
  const double ws2 = c.params.at("w_sigma2");
  const double lx = xg.x_max - xg.x_min;
  PhaseDensity f(xg, wg);
  for (int iw = 0; iw < wg.n_cells; ++iw) {
    const double w = wg.center(iw);
    const double gw = std::exp(-(w - wmu) * (w - wmu) / (2.0 * ws2)) +
                      std::exp(-(w + wmu) * (w + wmu) / (2.0 * ws2));
    for (int ix = 0; ix < xg.n_cells; ++ix) {
      // both bumps sit at x = x_min on the periodic line
      const double off = xg.center(ix) - xg.x_min;
      const double d = std::min(off, lx - off);
      f.at(ix, iw) = std::exp(-d * d / (2.0 * xs * xs)) * gw;
    }
  }
  const double m = phase_mass(f);
  for (double& v : f.values) v /= m;
  return f;
}

void phase_tree_accumulate(std::vector<std::vector<double>>& work) {
  for (size_t gap = 1; gap < work.size(); gap *= 2)
    for (size_t i = 0; i + gap < work.size(); i += 2 * gap)
      for (size_t j = 0; j < work[i].size(); ++j) work[i][j] += work[i + gap][j];
}

double scalar_tree_sum(std::vector<double> work) {
  for (size_t gap = 1; gap < work.size(); gap *= 2)
    for (size_t i = 0; i + gap < work.size(); i += 2 * gap) work[i] += work[i + gap];
  return work.empty() ? 0.0 : work[0];
}

// (1/M) sum_k ||g_k - gbar||_2^2 with the cell-volume weight, pairwise trees
// in both passes; gbar is left in mean_out for the final marginal.
double phase_ensemble_variance(const std::vector<PhaseDensity>& gs, double cellvol,
                               std::vector<double>& mean_out) {
  const size_t m = gs.size();
  std::vector<std::vector<double>> work(m);
  for (size_t k = 0; k < m; ++k) work[k] = gs[k].values;
  phase_tree_accumulate(work);
  mean_out = work[0];
  for (double& v : mean_out) v /= static_cast<double>(m);
  std::vector<double> sq(m, 0.0);
  for (size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (size_t j = 0; j < mean_out.size(); ++j) {
      const double d = gs[k].values[j] - mean_out[j];
      s += d * d;
    }
    sq[k] = cellvol * s;
  }
  return scalar_tree_sum(std::move(sq)) / static_cast<double>(m);
}

void run_phase(Ctx& ctx) {
  const ScenarioConfig& c = ctx.c;
  const SpaceGrid xg = SpaceGrid::uniform(c.x_min, c.x_max, c.nx_cells);
  const VelocityGrid& wg = ctx.grid;
  const double alpha = c.params.at("alpha");
  const double d0 = c.params.at("d_base"), d1 = c.params.at("d_slope");
  const double lx = c.x_max - c.x_min;
  const long long total = std::llround(c.t_final / c.dt);

  // nominal full solve for the conservation and positivity record
  const double theta0 = 0.5 * (c.input_a + c.input_b);
  PhaseDensity full = phase_datum(c, xg, wg);
  const double u_datum = moments(velocity_marginal(full)).mean;
  std::ofstream mass_csv = open_csv(ctx, c.id + "_mass.csv");
  mass_csv << "step,time,mass,min_cell\n";
  auto mass_row = [&](long long n) {
    mass_csv << n << ',' << fmt(n * c.dt) << ',' << fmt(phase_mass(full)) << ','
             << fmt(*std::min_element(full.values.begin(), full.values.end())) << '\n';
  };
  mass_row(0);
  for (long long n = 1; n <= total; ++n) {
    strang_split_step(full, alpha, d0 + d1 * theta0, c.quad, c.dt);
    mass_row(n);
  }

  // Fluctuation ensemble about the quartic profile whose alignment mean is
  // the datum's: the bundled datum is symmetric in w, so this pins the
  // symmetric branch of the self-consistency map instead of letting the
  // damped iteration drift to a polarized one.
  struct PhaseSample {
    PhaseDensity g;
    Density f_inf;
    double diffusion = 0.0;
  };
  std::vector<PhaseSample> samples(c.samples);
  parallel_for(c.samples, ctx.opt.threads, [&](int k) {
    SampleStream stream(ctx.seed, static_cast<std::uint64_t>(k));
    const double th = ctx.input.sample(stream);
    PhaseSample& s = samples[k];
    s.diffusion = d0 + d1 * th;
    s.f_inf = swarming_profile(wg, alpha, s.diffusion, u_datum);
    s.g = phase_datum(c, xg, wg);
    for (int iw = 0; iw < wg.n_cells; ++iw)
      for (int ix = 0; ix < xg.n_cells; ++ix) s.g.at(ix, iw) -= s.f_inf[iw] / lx;
  });

  std::ofstream var_csv = open_csv(ctx, c.id + "_variance.csv");
  var_csv << "step,time,samples,variance\n";
  const double cellvol = xg.dx * wg.dw;
  std::vector<double> mean_g;
  std::vector<PhaseDensity> views(c.samples, PhaseDensity(xg, wg));
  auto var_row = [&](long long n) {
    for (int k = 0; k < c.samples; ++k) views[k].values = samples[k].g.values;
    const double v = phase_ensemble_variance(views, cellvol, mean_g);
    var_csv << n << ',' << fmt(n * c.dt) << ',' << c.samples << ',' << fmt(v) << '\n';
  };
  var_row(0);
  for (long long n = 1; n <= total; ++n) {
    parallel_for(c.samples, ctx.opt.threads, [&](int k) {
      PhaseSample& s = samples[k];
      strang_split_step_mm(s.g, s.f_inf, alpha, s.diffusion, c.quad, c.dt);
    });
    var_row(n);
  }

  // estimator mean marginal: quadrature bank over f_inf plus the g average
  GaussQuadrature q = quadrature_nodes(ctx.input, c.bank_nodes);
  Density bank(wg);
  for (int k = 0; k < q.size(); ++k) {
    Density s = swarming_profile(wg, alpha, d0 + d1 * q.nodes[k], u_datum);
    for (int i = 0; i < wg.n_cells; ++i) bank[i] += q.weights[k] * s[i];
  }
  PhaseDensity gbar(xg, wg);
  gbar.values = mean_g;
  Density marg_g = velocity_marginal(gbar);
  std::ofstream marg = open_csv(ctx, c.id + "_marginal.csv");
  marg << "w,mean_marginal\n";
  for (int i = 0; i < wg.n_cells; ++i)
    marg << fmt(wg.center(i)) << ',' << fmt(bank[i] + marg_g[i]) << '\n';
}

void write_manifest(Ctx& ctx, const std::string& status, const std::string& error) {
  const ScenarioConfig& c = ctx.c;
  std::filesystem::path p =
      std::filesystem::path(ctx.opt.out_dir) / (c.id + "_manifest.txt");
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  f << "scenario.id = " << c.id << '\n';
  f << "scenario.title = " << c.title << '\n';
  f << "scenario.model = " << c.model << '\n';
  f << "scenario.method = " << method_name(c.method) << '\n';
  f << "grid.w_min = " << fmt(c.w_min) << '\n';
  f << "grid.w_max = " << fmt(c.w_max) << '\n';
  f << "grid.n_cells = " << c.n_cells << '\n';
  if (c.has_space) {
    f << "space.x_min = " << fmt(c.x_min) << '\n';
    f << "space.x_max = " << fmt(c.x_max) << '\n';
    f << "space.n_cells = " << c.nx_cells << '\n';
  }
  f << "input.a = " << fmt(c.input_a) << '\n';
  f << "input.b = " << fmt(c.input_b) << '\n';
  for (const auto& kv : c.params)
    f << "model." << kv.first << " = " << fmt(kv.second) << '\n';
  f << "solver.scheme = " << scheme_name(c.scheme) << '\n';
  f << "solver.weights = " << weights_name(c.weights) << '\n';
  f << "solver.flux = " << flux_name(c.flux) << '\n';
  f << "solver.face_rule = " << face_rule_name(c.quad.rule) << '\n';
  f << "solver.gauss_points = " << c.quad.gauss_points << '\n';
  f << "solver.dt_rule = " << c.dt_rule << '\n';
  f << "solver.dt = " << fmt(c.dt) << '\n';
  f << "solver.t_final = " << fmt(c.t_final) << '\n';
  switch (c.method) {
    case RunMethod::collocation:
      f << "uq.nodes = " << c.nodes << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    case RunMethod::entropy:
      f << "uq.nodes = " << c.nodes << '\n';
      break;
    case RunMethod::mc: {
      f << "uq.sample_counts =";
      for (size_t i = 0; i < c.sample_counts.size(); ++i)
        f << (i ? ", " : " ") << c.sample_counts[i];
      f << '\n';
      f << "uq.repetitions = " << c.repetitions << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    }
    case RunMethod::m3c:
      f << "uq.samples = " << c.samples << '\n';
      f << "uq.repetitions = " << c.repetitions << '\n';
      f << "uq.bank = " << bank_name(c.bank) << '\n';
      if (c.bank == BankMode::sample)
        f << "uq.bank_samples = " << c.bank_samples << '\n';
      else
        f << "uq.bank_nodes = " << c.bank_nodes << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    case RunMethod::fm3c:
      f << "uq.initial_samples = " << c.initial_samples << '\n';
      f << "uq.bank = " << bank_name(c.bank) << '\n';
      if (c.bank == BankMode::sample)
        f << "uq.bank_samples = " << c.bank_samples << '\n';
      else
        f << "uq.bank_nodes = " << c.bank_nodes << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    case RunMethod::gpc:
      f << "uq.chaos_order = " << c.chaos_order << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    case RunMethod::node_sweep: {
      f << "uq.node_counts =";
      for (size_t i = 0; i < c.node_counts.size(); ++i)
        f << (i ? ", " : " ") << c.node_counts[i];
      f << '\n';
      f << "uq.face_rules =";
      for (size_t i = 0; i < c.face_rules.size(); ++i)
        f << (i ? ", " : " ") << face_rule_name(c.face_rules[i]);
      f << '\n';
      f << "uq.reference_nodes = " << c.reference_nodes << '\n';
      break;
    }
    case RunMethod::phase:
      f << "uq.samples = " << c.samples << '\n';
      f << "uq.bank_nodes = " << c.bank_nodes << '\n';
      break;
  }
  f << "output.snapshots =";
  for (size_t i = 0; i < c.snapshots.size(); ++i)
    f << (i ? ", " : " ") << fmt(c.snapshots[i]);
  f << '\n';
  if (ctx.seeded)
    f << "run.seed = " << ctx.seed << '\n';
  else
    f << "run.seed = none\n";
  f << "run.threads = " << ctx.opt.threads << '\n';
  f << "run.version = " << version_string << '\n';
  f << "run.warnings = " << ctx.result.warnings.size() << '\n';
  for (const std::string& w : ctx.result.warnings) f << "warning = " << w << '\n';
  for (const std::string& a : ctx.result.files) f << "artifact = " << a << '\n';
  f << "status = " << status << '\n';
  if (!error.empty()) f << "error = " << error << '\n';
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  Ctx ctx{c, opt};
  ctx.model = build_model(c);
  ctx.input = RandomInput::uniform(c.input_a, c.input_b);
  ctx.grid = VelocityGrid::uniform(c.w_min, c.w_max, c.n_cells);
  ctx.solve = SolveOptions{c.scheme, c.weights, c.flux, c.quad, c.dt, c.t_final, false};
  ctx.seeded = c.method == RunMethod::mc || c.method == RunMethod::m3c ||
               c.method == RunMethod::fm3c || c.method == RunMethod::phase;
  ctx.seed = opt.seed.value_or(c.seed);

  std::filesystem::create_directories(opt.out_dir);

  if (c.method != RunMethod::phase) {
    // zero-length probe solve to surface stability and mesh warnings
    SolveOptions probe = ctx.solve;
    probe.t_final = 0.0;
    SolveResult r =
        solve_single(ctx.model, 0.5 * (c.input_a + c.input_b), ctx.grid, probe);
    ctx.result.warnings = r.control.warnings;
  }

  try {
    switch (c.method) {
      case RunMethod::collocation: run_collocation(ctx); break;
      case RunMethod::entropy: run_entropy(ctx); break;
      case RunMethod::mc: run_mc(ctx); break;
      case RunMethod::m3c: run_m3c(ctx); break;
      case RunMethod::fm3c: run_fm3c(ctx); break;
      case RunMethod::gpc: run_gpc(ctx); break;
      case RunMethod::node_sweep: run_node_sweep(ctx); break;
      case RunMethod::phase: run_phase(ctx); break;
    }
  } catch (const std::exception& e) {
    write_manifest(ctx, "error", e.what());
    throw;
  }
  write_manifest(ctx, "ok", "");
  ctx.result.files.push_back(c.id + "_manifest.txt");
  return ctx.result;
}

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("KINETIC_UQ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ConfigError(std::string("KINETIC_UQ_THREADS must be a positive integer, got '") +
                        env + "'");
    return static_cast<int>(v);
  }
  return 1;
}

}  // namespace kinetic_uq
