#include "kinetic_uq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace kinetic_uq {

namespace {

long long step_count(double t_final, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (t_final < 0.0) throw std::invalid_argument("t_final must be nonnegative");
  return static_cast<long long>(std::llround(t_final / dt));
}

// Snapshot times mapped to step indices; each must land on a step.
std::vector<long long> snapshot_steps(const std::vector<double>& times, double dt,
                                      long long total) {
  if (times.empty()) throw std::invalid_argument("snapshot list is empty");
  std::vector<long long> steps;
  steps.reserve(times.size());
  long long prev = -1;
  for (double t : times) {
    const long long s = std::llround(t / dt);
    if (std::abs(s * dt - t) > 1e-9 * std::max(1.0, t))
      throw std::invalid_argument("snapshot time is not a multiple of dt");
    if (s <= prev || s > total)
      throw std::invalid_argument("snapshot times must be ascending and within the horizon");
    steps.push_back(s);
    prev = s;
  }
  return steps;
}

std::vector<double> build_flux(const Density& f, const FluxWeights& w,
                               const DriftDiffusion& dd, FluxForm form) {
  return form == FluxForm::cc ? cc_flux(f, w, dd) : entropic_flux(f, w, dd);
}

// Pairwise tree sum over sample slots, in place; slot 0 ends up holding the
// total. The fold order depends only on the slot count, never on scheduling.
void tree_fold(std::vector<Density>& slots) {
  const size_t m = slots.size();
  for (size_t gap = 1; gap < m; gap *= 2)
    for (size_t i = 0; i + gap < m; i += 2 * gap)
      for (int j = 0; j < slots[i].size(); ++j) slots[i][j] += slots[i + gap][j];
}

// Mean and pointwise variance by pairwise tree reduction. `ddof` is 1 for the
// unbiased sample variance, 0 for quadrature-style averages.
void tree_mean_variance(std::vector<Density> work, int ddof, Density& mean,
                        Density& variance) {
  const int m = static_cast<int>(work.size());
  if (m == 0) throw std::invalid_argument("estimator needs at least one sample");
  std::vector<Density> copy = work;
  tree_fold(copy);
  mean = std::move(copy[0]);
  for (int i = 0; i < mean.size(); ++i) mean[i] /= m;
  for (Density& f : work)
    for (int i = 0; i < f.size(); ++i) {
      const double d = f[i] - mean[i];
      f[i] = d * d;
    }
  tree_fold(work);
  variance = std::move(work[0]);
  variance.signed_values = true;
  const int denom = std::max(1, m - ddof);
  for (int i = 0; i < variance.size(); ++i)
    variance[i] = std::max(0.0, variance[i] / denom);
}

}  // namespace

SolveResult solve_single(const ModelSpec& model, double theta, const VelocityGrid& g,
                         const SolveOptions& opt) {
  SolveResult out;
  const DriftDiffusion dd = model.drift_diffusion(theta);
  out.f = model.initial_datum(theta, g);

  Density f_inf;
  const bool need_inf = opt.weights == WeightMode::exact || opt.record_entropy;
  if (need_inf) {
    if (!model.steady_state)
      throw std::invalid_argument(model.name + " has no closed-form steady state");
    f_inf = model.steady_state(theta, g);
  }

  const bool frozen =
      opt.weights == WeightMode::exact || !model.drift_depends_on_density;
  FluxWeights w = opt.weights == WeightMode::exact ? exact_weights(f_inf, dd)
                                                   : cc_weights(out.f, dd, opt.quad);

  out.control.dt = opt.dt;
  out.control.bound_explicit = cfl_explicit(w, dd, g);
  out.control.bound_semi_implicit = cfl_semi_implicit(w, g);
  if (w.mesh_guard_violated)
    out.control.warnings.push_back(
        "mesh guard: dw max|c_tilde| exceeds twice the face diffusion");
  if (opt.scheme == TimeScheme::semi_implicit) {
    if (opt.dt > out.control.bound_semi_implicit * (1.0 + 1e-12))
      out.control.warnings.push_back("dt exceeds the semi-implicit contraction bound");
  } else if (opt.dt > out.control.bound_explicit * (1.0 + 1e-12)) {
    out.control.warnings.push_back("dt exceeds the explicit positivity bound");
  }

  const DissipationForm dform =
      opt.flux == FluxForm::cc ? DissipationForm::cc : DissipationForm::entropic;
  auto record = [&](double t) {
    if (!opt.record_entropy) return;
    out.trace.times.push_back(t);
    out.trace.entropy.push_back(relative_entropy(out.f, f_inf));
    out.trace.dissipation.push_back(discrete_dissipation(out.f, f_inf, dd, dform));
  };
  record(0.0);

  FluxBuilder builder = [&](const Density& fs) {
    if (!frozen) w = cc_weights(fs, dd, opt.quad);
    return build_flux(fs, w, dd, opt.flux);
  };

  const long long n = step_count(opt.t_final, opt.dt);
  auto advance = [&](double dt) {
    switch (opt.scheme) {
      case TimeScheme::explicit_euler:
        step_explicit(out.f, builder(out.f), dt);
        break;
      case TimeScheme::ssp_rk2:
        step_ssp(out.f, builder, dt, 2);
        break;
      case TimeScheme::ssp_rk3:
        step_ssp(out.f, builder, dt, 3);
        break;
      case TimeScheme::semi_implicit:
        if (!frozen) w = cc_weights(out.f, dd, opt.quad);
        step_semi_implicit(out.f, w, dd, dt);
        break;
    }
  };
  for (long long s = 0; s < n; ++s) {
    advance(opt.dt);
    record((s + 1) * opt.dt);
  }
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int k = std::max(1, std::min(threads, n));
  if (k == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (int t = 0; t < k; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += k) body(i);
    });
  for (auto& th : pool) th.join();
}

CollocationResult collocate(const ModelSpec& model, const RandomInput& input,
                            int m_nodes, const VelocityGrid& g, const SolveOptions& opt,
                            int threads) {
  CollocationResult out;
  GaussQuadrature q = quadrature_nodes(input, m_nodes);
  out.nodes = q.nodes;
  out.weights = q.weights;
  out.fields.resize(q.nodes.size(), Density(g));
  out.traces.resize(opt.record_entropy ? q.nodes.size() : 0);
  parallel_for(static_cast<int>(q.nodes.size()), threads, [&](int k) {
    SolveResult r = solve_single(model, q.nodes[k], g, opt);
    out.fields[k] = std::move(r.f);
    if (opt.record_entropy) out.traces[k] = std::move(r.trace);
  });
  // Quadrature moments need weighted slots; scale copies, then tree-fold.
  std::vector<Density> scaled(out.fields.size(), Density(g));
  for (size_t k = 0; k < out.fields.size(); ++k)
    for (int i = 0; i < g.n_cells; ++i)
      scaled[k][i] = out.weights[k] * out.fields[k][i];
  tree_fold(scaled);
  out.estimate.mean = std::move(scaled[0]);
  std::vector<Density> dev(out.fields.size(), Density(g));
  for (size_t k = 0; k < out.fields.size(); ++k)
    for (int i = 0; i < g.n_cells; ++i) {
      const double d = out.fields[k][i] - out.estimate.mean[i];
      dev[k][i] = out.weights[k] * d * d;
    }
  tree_fold(dev);
  out.estimate.variance = std::move(dev[0]);
  out.estimate.variance.signed_values = true;
  for (int i = 0; i < g.n_cells; ++i)
    out.estimate.variance[i] = std::max(0.0, out.estimate.variance[i]);
  out.estimate.method = UqMethod::collocation;
  out.estimate.n_nodes_or_samples = static_cast<int>(q.nodes.size());
  out.estimate.time = opt.t_final;
  return out;
}

namespace {

// March one sample to each snapshot step, storing the field per snapshot.
void solve_snapshots(const ModelSpec& model, double theta, const VelocityGrid& g,
                     const SolveOptions& opt, const std::vector<long long>& steps,
                     std::vector<Density>& out) {
  const DriftDiffusion dd = model.drift_diffusion(theta);
  Density f = model.initial_datum(theta, g);
  Density f_inf;
  if (opt.weights == WeightMode::exact) {
    if (!model.steady_state)
      throw std::invalid_argument(model.name + " has no closed-form steady state");
    f_inf = model.steady_state(theta, g);
  }
  const bool frozen =
      opt.weights == WeightMode::exact || !model.drift_depends_on_density;
  FluxWeights w = opt.weights == WeightMode::exact ? exact_weights(f_inf, dd)
                                                   : cc_weights(f, dd, opt.quad);
  FluxBuilder builder = [&](const Density& fs) {
    if (!frozen) w = cc_weights(fs, dd, opt.quad);
    return build_flux(fs, w, dd, opt.flux);
  };
  long long step = 0;
  for (size_t s = 0; s < steps.size(); ++s) {
    for (; step < steps[s]; ++step) {
      switch (opt.scheme) {
        case TimeScheme::explicit_euler:
          step_explicit(f, builder(f), opt.dt);
          break;
        case TimeScheme::ssp_rk2:
          step_ssp(f, builder, opt.dt, 2);
          break;
        case TimeScheme::ssp_rk3:
          step_ssp(f, builder, opt.dt, 3);
          break;
        case TimeScheme::semi_implicit:
          if (!frozen) w = cc_weights(f, dd, opt.quad);
          step_semi_implicit(f, w, dd, opt.dt);
          break;
      }
    }
    out[s] = f;
  }
}

UqEstimate finalize_estimate(std::vector<Density> fields, UqMethod method,
                             std::uint64_t seed, bool seeded, double time, int ddof) {
  UqEstimate est;
  est.method = method;
  est.n_nodes_or_samples = static_cast<int>(fields.size());
  est.seed = seed;
  est.seeded = seeded;
  est.time = time;
  tree_mean_variance(std::move(fields), ddof, est.mean, est.variance);
  return est;
}

}  // namespace

std::vector<Density> solve_at_times(const ModelSpec& model, double theta,
                                    const VelocityGrid& g, const SolveOptions& opt,
                                    const std::vector<double>& times) {
  const long long total = step_count(opt.t_final, opt.dt);
  const std::vector<long long> steps = snapshot_steps(times, opt.dt, total);
  std::vector<Density> out(steps.size(), Density(g));
  solve_snapshots(model, theta, g, opt, steps, out);
  return out;
}

UqSeries mc_series(const ModelSpec& model, const RandomInput& input,
                   const VelocityGrid& g, const SolveOptions& opt, const McOptions& mc,
                   const std::vector<double>& times) {
  if (mc.samples <= 0) throw std::invalid_argument("estimator needs at least one sample");
  const long long total = step_count(opt.t_final, opt.dt);
  const std::vector<long long> steps = snapshot_steps(times, opt.dt, total);

  std::vector<std::vector<Density>> slots(
      mc.samples, std::vector<Density>(steps.size(), Density(g)));
  parallel_for(mc.samples, mc.threads, [&](int k) {
    SampleStream stream(mc.seed, static_cast<std::uint64_t>(k));
    solve_snapshots(model, input.sample(stream), g, opt, steps, slots[k]);
  });

  UqSeries out;
  out.times = times;
  for (size_t s = 0; s < steps.size(); ++s) {
    std::vector<Density> fields;
    fields.reserve(mc.samples);
    for (int k = 0; k < mc.samples; ++k) fields.push_back(std::move(slots[k][s]));
    out.estimates.push_back(
        finalize_estimate(std::move(fields), UqMethod::mc, mc.seed, true, times[s], 1));
  }
  return out;
}

UqEstimate mc_estimate(const ModelSpec& model, const RandomInput& input,
                       const VelocityGrid& g, const SolveOptions& opt,
                       const McOptions& mc) {
  return std::move(mc_series(model, input, g, opt, mc, {opt.t_final}).estimates[0]);
}

std::vector<double> micro_macro_ref_flux(const Density& f_inf, const DriftDiffusion& dd,
                                         const QuadSpec& quad) {
  return cc_flux(f_inf, cc_weights(f_inf, dd, quad), dd);
}

namespace {

// One fluctuation step; `frozen` carries prebuilt weights for drifts that do
// not depend on the density.
void mm_step(Density& g, const Density& f_inf, const DriftDiffusion& dd,
             const QuadSpec& quad, const std::vector<double>& ref_flux, double dt,
             const FluxWeights* frozen, Density& h) {
  for (int i = 0; i < g.size(); ++i) h[i] = f_inf[i] + g[i];
  const std::vector<double> flux =
      frozen ? cc_flux(h, *frozen, dd) : cc_flux(h, cc_weights(h, dd, quad), dd);
  const double nu = dt / g.grid.dw;
  for (int i = 0; i < g.size(); ++i)
    g[i] += nu * ((flux[i + 1] - ref_flux[i + 1]) - (flux[i] - ref_flux[i]));
}

struct MmSample {
  Density f_inf;
  Density g;
  DriftDiffusion dd;
  std::vector<double> ref_flux;
  FluxWeights frozen_w;
  bool frozen = false;
};

MmSample make_mm_sample(const ModelSpec& model, double theta, const VelocityGrid& grid,
                        const QuadSpec& quad) {
  MmSample s;
  s.dd = model.drift_diffusion(theta);
  Density datum = model.initial_datum(theta, grid);
  if (!model.equilibrium_from_datum && !model.steady_state)
    throw std::invalid_argument(model.name + " has no equilibrium constructor");
  s.f_inf = model.equilibrium_from_datum
                ? model.equilibrium_from_datum(theta, datum)
                : model.steady_state(theta, grid);
  s.g = Density(grid);
  s.g.signed_values = true;
  for (int i = 0; i < grid.n_cells; ++i) s.g[i] = datum[i] - s.f_inf[i];
  s.frozen = !model.drift_depends_on_density;
  if (s.frozen) s.frozen_w = cc_weights(s.f_inf, s.dd, quad);
  s.ref_flux = s.frozen ? cc_flux(s.f_inf, s.frozen_w, s.dd)
                        : micro_macro_ref_flux(s.f_inf, s.dd, quad);
  return s;
}

Density bank_mean_field(const ModelSpec& model, const RandomInput& input,
                        const VelocityGrid& grid, BankMode mode, int bank_samples,
                        int bank_nodes, std::uint64_t seed) {
  auto equilibrium = [&](double theta) {
    if (model.equilibrium_from_datum)
      return model.equilibrium_from_datum(theta, model.initial_datum(theta, grid));
    return model.steady_state(theta, grid);
  };
  Density bank(grid);
  if (mode == BankMode::sample) {
    if (bank_samples <= 0)
      throw std::invalid_argument("sample bank needs bank_samples >= 1");
    std::vector<Density> slots(bank_samples, Density(grid));
    for (int k = 0; k < bank_samples; ++k) {
      SampleStream stream(seed, static_cast<std::uint64_t>(k));
      slots[k] = equilibrium(input.sample(stream));
    }
    tree_fold(slots);
    bank = std::move(slots[0]);
    for (int i = 0; i < grid.n_cells; ++i) bank[i] /= bank_samples;
  } else {
    if (bank_nodes <= 0) throw std::invalid_argument("quadrature bank needs bank_nodes >= 1");
    GaussQuadrature q = quadrature_nodes(input, bank_nodes);
    std::vector<Density> slots(q.nodes.size(), Density(grid));
    for (size_t k = 0; k < q.nodes.size(); ++k) {
      Density e = equilibrium(q.nodes[k]);
      for (int i = 0; i < grid.n_cells; ++i) slots[k][i] = q.weights[k] * e[i];
    }
    tree_fold(slots);
    bank = std::move(slots[0]);
  }
  return bank;
}

}  // namespace

void evolve_micro_macro(Density& g, const Density& f_inf, const DriftDiffusion& dd,
                        const QuadSpec& quad, const std::vector<double>& ref_flux,
                        double dt) {
  require_same_grid(g.grid, f_inf.grid, "evolve_micro_macro");
  Density h(g.grid);
  h.signed_values = true;
  mm_step(g, f_inf, dd, quad, ref_flux, dt, nullptr, h);
}

M3cSeries m3c_series(const ModelSpec& model, const RandomInput& input,
                     const VelocityGrid& g, const SolveOptions& opt,
                     const M3cOptions& m3c, const std::vector<double>& times) {
  if (m3c.samples <= 0) throw std::invalid_argument("estimator needs at least one sample");
  if (m3c.bank == BankMode::sample && m3c.bank_samples < m3c.samples)
    throw std::invalid_argument("sample bank must cover the fluctuation samples");
  const long long total = step_count(opt.t_final, opt.dt);
  const std::vector<long long> steps = snapshot_steps(times, opt.dt, total);

  M3cSeries out;
  out.bank_mean = bank_mean_field(model, input, g, m3c.bank, m3c.bank_samples,
                                  m3c.bank_nodes, m3c.seed);

  std::vector<std::vector<Density>> slots(
      m3c.samples, std::vector<Density>(steps.size(), Density(g)));
  parallel_for(m3c.samples, m3c.threads, [&](int k) {
    SampleStream stream(m3c.seed, static_cast<std::uint64_t>(k));
    MmSample s = make_mm_sample(model, input.sample(stream), g, opt.quad);
    Density h(g);
    h.signed_values = true;
    long long step = 0;
    for (size_t sn = 0; sn < steps.size(); ++sn) {
      for (; step < steps[sn]; ++step)
        mm_step(s.g, s.f_inf, s.dd, opt.quad, s.ref_flux, opt.dt,
                s.frozen ? &s.frozen_w : nullptr, h);
      slots[k][sn] = s.g;
    }
  });

  out.series.times = times;
  for (size_t sn = 0; sn < steps.size(); ++sn) {
    std::vector<Density> fields;
    fields.reserve(m3c.samples);
    for (int k = 0; k < m3c.samples; ++k) fields.push_back(std::move(slots[k][sn]));
    UqEstimate est = finalize_estimate(std::move(fields), UqMethod::m3c, m3c.seed, true,
                                       times[sn], 1);
    for (int i = 0; i < g.n_cells; ++i) est.mean[i] += out.bank_mean[i];
    est.mean.signed_values = false;
    out.series.estimates.push_back(std::move(est));
  }
  return out;
}

UqEstimate m3c_estimate(const ModelSpec& model, const RandomInput& input,
                        const VelocityGrid& g, const SolveOptions& opt,
                        const M3cOptions& m3c) {
  return std::move(
      m3c_series(model, input, g, opt, m3c, {opt.t_final}).series.estimates[0]);
}

Fm3cSeries fm3c_series(const ModelSpec& model, const RandomInput& input,
                       const VelocityGrid& g, const SolveOptions& opt,
                       const Fm3cOptions& fm, const std::vector<double>& times) {
  if (fm.initial_samples <= 0)
    throw std::invalid_argument("estimator needs at least one sample");
  if (fm.bank == BankMode::sample && fm.bank_samples < fm.initial_samples)
    throw std::invalid_argument("sample bank must cover the fluctuation samples");
  const long long total = step_count(opt.t_final, opt.dt);
  const std::vector<long long> steps = snapshot_steps(times, opt.dt, total);

  Fm3cSeries out;
  out.bank_mean = bank_mean_field(model, input, g, fm.bank, fm.bank_samples,
                                  fm.bank_nodes, fm.seed);

  std::vector<MmSample> samples;
  samples.reserve(fm.initial_samples);
  for (int k = 0; k < fm.initial_samples; ++k) {
    SampleStream stream(fm.seed, static_cast<std::uint64_t>(k));
    samples.push_back(make_mm_sample(model, input.sample(stream), g, opt.quad));
  }

  auto fluctuation_variance = [&]() {
    const int m = static_cast<int>(samples.size());
    std::vector<Density> work(m, Density(g));
    for (int k = 0; k < m; ++k) work[k] = samples[k].g;
    std::vector<Density> sum = work;
    tree_fold(sum);
    Density gbar = std::move(sum[0]);
    for (int i = 0; i < g.n_cells; ++i) gbar[i] /= m;
    for (Density& f : work)
      for (int i = 0; i < g.n_cells; ++i) {
        const double d = f[i] - gbar[i];
        f[i] = d * d;
      }
    tree_fold(work);
    double var = 0.0;
    for (int i = 0; i < g.n_cells; ++i) var += work[0][i];
    return var * g.dw / m;
  };

  auto snapshot = [&](double t) {
    std::vector<Density> fields;
    fields.reserve(samples.size());
    for (const MmSample& s : samples) fields.push_back(s.g);
    UqEstimate est =
        finalize_estimate(std::move(fields), UqMethod::fm3c, fm.seed, true, t, 1);
    for (int i = 0; i < g.n_cells; ++i) est.mean[i] += out.bank_mean[i];
    est.mean.signed_values = false;
    out.series.estimates.push_back(std::move(est));
  };

  out.step_times.push_back(0.0);
  out.sample_trace.push_back(static_cast<int>(samples.size()));
  out.variance_trace.push_back(fluctuation_variance());

  size_t next_snap = 0;
  for (long long n = 0; n < total; ++n) {
    const int m_cur = static_cast<int>(samples.size());
    parallel_for(m_cur, fm.threads, [&](int k) {
      Density h(g);
      h.signed_values = true;
      MmSample& s = samples[k];
      mm_step(s.g, s.f_inf, s.dd, opt.quad, s.ref_flux, opt.dt,
              s.frozen ? &s.frozen_w : nullptr, h);
    });

    const double var = fluctuation_variance();
    const double prev = out.variance_trace.back();
    int m_next = m_cur;
    if (prev > 0.0) {
      m_next = static_cast<int>(std::floor(m_cur * (var / prev)));
      m_next = std::max(1, std::min(m_next, m_cur));
    } else if (var > 0.0) {
      throw std::runtime_error("fluctuation variance grew from zero; cannot add samples");
    }
    if (m_next < m_cur) {
      std::vector<MmSample> kept;
      kept.reserve(m_next);
      for (int j = 0; j < m_next; ++j)
        kept.push_back(std::move(samples[(static_cast<long long>(j) * m_cur) / m_next]));
      samples.swap(kept);
    }
    out.step_times.push_back((n + 1) * opt.dt);
    out.variance_trace.push_back(var);
    out.sample_trace.push_back(static_cast<int>(samples.size()));

    if (next_snap < steps.size() && n + 1 == steps[next_snap]) {
      out.series.times.push_back(times[next_snap]);
      snapshot(times[next_snap]);
      ++next_snap;
    }
  }
  return out;
}

}  // namespace kinetic_uq
