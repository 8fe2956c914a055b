#pragma once

#include <functional>
#include <string>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/grid.hpp"

namespace kinetic_uq {

enum class BoundaryRule { no_flux, quasi_stationary_right };

/// One uncertain mean-field model: drift/diffusion family over theta plus the
/// closed-form steady state where one exists. Densities produced by
/// initial_datum / steady_state are normalized on their grid.
struct ModelSpec {
  std::string name;
  double default_w_min = -1.0;
  double default_w_max = 1.0;
  BoundaryRule boundary = BoundaryRule::no_flux;
  // false: drift is a fixed function of w, so flux weights can be frozen
  // across time steps for a given theta.
  bool drift_depends_on_density = true;

  std::function<DriftDiffusion(double theta)> drift_diffusion;
  std::function<Density(double theta, const VelocityGrid&)> initial_datum;
  std::function<Density(double theta, const VelocityGrid&)> steady_state;  // may be empty
  // Equilibrium matched to a sampled datum's moments (micro-macro bank).
  // Empty: fall back to steady_state.
  std::function<Density(double theta, const Density& datum)> equilibrium_from_datum;
};

/// Linear relaxation toward a Maxwellian: B = w - u, D = T(theta).
ModelSpec linear_fp_model(double u, std::function<double(double)> T);

/// Consensus dynamics on [-1,1]: B[f] = P(theta) (w m0[f] - m1[f]),
/// D = (sigma2/2)(1-w^2)^2.
ModelSpec opinion_model(std::function<double(double)> P, double sigma2);

/// Trading dynamics on [0,L]: B[f] = w m0[f] - m1[f],
/// D = (sigma2(theta)/2) w^2; inverse-Gamma-type steady state with
/// mu = 1 + 2/sigma2(theta), scaled to the conserved mean wealth.
ModelSpec wealth_model(std::function<double(double)> sigma2);

/// Self-propulsion with alignment: B[f] = alpha w (w^2 - 1) + (w - u_f),
/// D = D(theta); quartic-potential steady state with self-consistent u.
ModelSpec swarming_model(double alpha, std::function<double(double)> D);

// ---- initial data used by the bundled scenarios ----

/// Symmetric two-Gaussian mixture with centers +-c and variance sigma2(theta).
std::function<Density(double, const VelocityGrid&)> mixture_datum(
    double c, std::function<double(double)> sigma2);

/// beta [exp(-c (w+1/2)^2) + exp(-c (w-1/2)^2)].
std::function<Density(double, const VelocityGrid&)> two_bump_datum(double c);

/// beta exp(-c (w-u0)^2).
std::function<Density(double, const VelocityGrid&)> bump_datum(double c, double u0);

/// Self-consistent mean of the swarming steady profile: damped fixed point
/// u <- (1-omega) u + omega mean(profile(u)), omega = 0.5, tol 1e-12.
double swarming_mean_fixed_point(const VelocityGrid& g, double alpha, double diffusion,
                                 double u_start);

/// exp(-(alpha w^4/4 + (1-alpha) w^2/2 - u w)/D), normalized on g.
Density swarming_profile(const VelocityGrid& g, double alpha, double diffusion, double u);

}  // namespace kinetic_uq
