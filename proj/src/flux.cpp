#include "kinetic_uq/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kinetic_uq/random_input.hpp"

namespace kinetic_uq {

double delta_from_lambda(double lambda) {
  if (std::abs(lambda) < 1e-8) return 0.5 - lambda / 12.0;
  // exp overflow is benign: 1/(1 - inf) -> -0, leaving the upwind limit 1/lambda.
  return 1.0 / lambda + 1.0 / (1.0 - std::exp(lambda));
}

double log_mean(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_mean requires positive arguments");
  if (a == b) return a;
  const double u = b / a;
  const double um1 = u - 1.0;
  if (std::abs(um1) < 1e-4) {
    // series of (u-1)/log(u) about u = 1; relative error O(um1^4)
    return a * (1.0 + um1 * (0.5 + um1 * (-1.0 / 12.0 + um1 / 24.0)));
  }
  return a * um1 / std::log(u);
}

double entropic_delta(double f_i, double f_ip1) {
  if (!(f_i > 0.0) || !(f_ip1 > 0.0))
    throw std::domain_error("entropic flux requires positivity");
  if (f_i == f_ip1) return 0.5;
  // delta*f_i + (1-delta)*f_ip1 == logmean(f_i, f_ip1)
  return (log_mean(f_i, f_ip1) - f_ip1) / (f_i - f_ip1);
}

void face_rule_points(const QuadSpec& quad, std::vector<double>& fractions,
                      std::vector<double>& weights) {
  switch (quad.rule) {
    case FaceRule::midpoint:
      fractions = {0.5};
      weights = {1.0};
      return;
    case FaceRule::open_nc2:
      fractions = {1.0 / 3.0, 2.0 / 3.0};
      weights = {0.5, 0.5};
      return;
    case FaceRule::open_nc4:
      fractions = {0.25, 0.5, 0.75};
      weights = {2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0};
      return;
    case FaceRule::open_nc6:
      fractions = {1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0, 4.0 / 6.0, 5.0 / 6.0};
      weights = {11.0 / 20.0, -14.0 / 20.0, 26.0 / 20.0, -14.0 / 20.0, 11.0 / 20.0};
      return;
    case FaceRule::gauss: {
      const int n = quad.gauss_points;
      if (n < 1) throw std::invalid_argument("gauss face rule requires >= 1 point");
      std::vector<double> z, w;
      gauss_legendre(n, z, w);
      fractions.resize(z.size());
      weights.resize(w.size());
      for (size_t q = 0; q < z.size(); ++q) {
        fractions[q] = 0.5 * (1.0 + z[q]);
        weights[q] = 0.5 * w[q];
      }
      return;
    }
  }
  throw std::logic_error("unknown face rule");
}

namespace {

FluxWeights make_empty_weights(int n_faces) {
  FluxWeights w;
  w.c_tilde.assign(static_cast<size_t>(n_faces), 0.0);
  w.lambda.assign(static_cast<size_t>(n_faces), 0.0);
  w.delta.assign(static_cast<size_t>(n_faces), 0.5);
  return w;
}

void run_mesh_guard(FluxWeights& w, const Density& f, const DriftDiffusion& dd) {
  const VelocityGrid& g = f.grid;
  double max_adv = 0.0;
  double min_diff = std::numeric_limits<double>::infinity();
  for (int j = 1; j < g.n_cells; ++j) {
    max_adv = std::max(max_adv, std::abs(w.c_tilde[static_cast<size_t>(j)]));
    min_diff = std::min(min_diff, dd.diffusion(g.face(j)));
  }
  w.mesh_guard_violated = g.dw * max_adv > 2.0 * min_diff;
}

}  // namespace

FluxWeights cc_weights(const Density& f, const DriftDiffusion& dd, const QuadSpec& quad) {
  const VelocityGrid& g = f.grid;
  FluxWeights w = make_empty_weights(g.n_faces());

  std::vector<double> frac, qw;
  face_rule_points(quad, frac, qw);
  const auto drift = dd.drift_builder(f);

  for (int j = 1; j < g.n_cells; ++j) {
    const double left = g.center(j - 1);
    double lam = 0.0;
    for (size_t q = 0; q < frac.size(); ++q) {
      const double x = left + frac[q] * g.dw;
      const double diff = dd.diffusion(x);
      if (!(diff > 0.0))
        throw std::domain_error("singular diffusion at w = " + std::to_string(x));
      lam += qw[q] * (drift(x) + dd.diffusion_prime(x)) / diff;
    }
    lam *= g.dw;
    const double d_face = dd.diffusion(g.face(j));
    if (!(d_face > 0.0))
      throw std::domain_error("singular diffusion at w = " + std::to_string(g.face(j)));
    w.lambda[static_cast<size_t>(j)] = lam;
    w.c_tilde[static_cast<size_t>(j)] = d_face * lam / g.dw;
    w.delta[static_cast<size_t>(j)] = delta_from_lambda(lam);
  }
  run_mesh_guard(w, f, dd);
  return w;
}

FluxWeights exact_weights(const Density& f_inf, const DriftDiffusion& dd) {
  const VelocityGrid& g = f_inf.grid;
  for (double v : f_inf.values)
    if (!(v > 0.0))
      throw std::domain_error("exact weights require a strictly positive steady state");

  FluxWeights w = make_empty_weights(g.n_faces());
  for (int j = 1; j < g.n_cells; ++j) {
    const double lam = std::log(f_inf[j - 1]) - std::log(f_inf[j]);
    const double d_face = dd.diffusion(g.face(j));
    if (!(d_face > 0.0))
      throw std::domain_error("singular diffusion at w = " + std::to_string(g.face(j)));
    w.lambda[static_cast<size_t>(j)] = lam;
    w.c_tilde[static_cast<size_t>(j)] = d_face * lam / g.dw;
    w.delta[static_cast<size_t>(j)] = delta_from_lambda(lam);
  }
  run_mesh_guard(w, f_inf, dd);
  return w;
}

std::vector<double> cc_flux(const Density& f, const FluxWeights& w, const DriftDiffusion& dd) {
  const VelocityGrid& g = f.grid;
  if (w.n_faces() != g.n_faces()) throw std::invalid_argument("cc_flux: grid mismatch");
  std::vector<double> flux(static_cast<size_t>(g.n_faces()), 0.0);
  for (int j = 1; j < g.n_cells; ++j) {
    const double d_face = dd.diffusion(g.face(j));
    const double del = w.delta[static_cast<size_t>(j)];
    flux[static_cast<size_t>(j)] =
        w.c_tilde[static_cast<size_t>(j)] * ((1.0 - del) * f[j] + del * f[j - 1]) +
        d_face * (f[j] - f[j - 1]) / g.dw;
  }
  return flux;
}

std::vector<double> entropic_flux(const Density& f, const FluxWeights& w,
                                  const DriftDiffusion& dd) {
  const VelocityGrid& g = f.grid;
  if (w.n_faces() != g.n_faces()) throw std::invalid_argument("entropic_flux: grid mismatch");
  for (double v : f.values)
    if (!(v > 0.0)) throw std::domain_error("entropic flux requires positivity");

  std::vector<double> flux(static_cast<size_t>(g.n_faces()), 0.0);
  for (int j = 1; j < g.n_cells; ++j) {
    const double d_face = dd.diffusion(g.face(j));
    const double dlog = std::log(f[j]) - std::log(f[j - 1]);
    flux[static_cast<size_t>(j)] =
        (w.c_tilde[static_cast<size_t>(j)] + d_face * dlog / g.dw) * log_mean(f[j - 1], f[j]);
  }
  return flux;
}

}  // namespace kinetic_uq
