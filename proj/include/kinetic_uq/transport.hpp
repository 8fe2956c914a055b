#pragma once

#include <string>
#include <vector>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/grid.hpp"

namespace kinetic_uq {

struct SpaceGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 0;
  double dx = 0.0;

  static SpaceGrid uniform(double x_min, double x_max, int n_cells);
  double center(int i) const { return x_min + (i + 0.5) * dx; }
};

/// Phase-space density on a tensor grid, x fastest: values[iw * nx + ix].
struct PhaseDensity {
  SpaceGrid xgrid;
  VelocityGrid wgrid;
  std::vector<double> values;

  PhaseDensity() = default;
  PhaseDensity(const SpaceGrid& x, const VelocityGrid& w)
      : xgrid(x), wgrid(w), values(static_cast<size_t>(x.n_cells) * w.n_cells, 0.0) {}

  double& at(int ix, int iw) { return values[static_cast<size_t>(iw) * xgrid.n_cells + ix]; }
  double at(int ix, int iw) const {
    return values[static_cast<size_t>(iw) * xgrid.n_cells + ix];
  }
};

double phase_mass(const PhaseDensity& f);
/// (mass, raw first w-moment) so callers can form the alignment mean.
struct PhaseMoments {
  double mass = 0.0;
  double momentum = 0.0;
};
PhaseMoments phase_moments(const PhaseDensity& f);

/// Velocity marginal: integrates over x.
Density velocity_marginal(const PhaseDensity& f);

/// One SSP-RK3 step of u_t + a u_x = 0 on a periodic line, fifth-order WENO
/// reconstruction. When the line is entirely nonnegative and |a| dt / dx <= 1
/// a flux limiter blends toward first-order upwind to keep it nonnegative;
/// signed data (or an over-CFL step) is advected unlimited.
void advect_line_weno5(std::vector<double>& line, double speed, double dx, double dt);

/// Advects every w-row of f at its own speed w (periodic in x). A step past
/// the advective bound dx / max|w| is recorded as a warning, not an error.
void transport_step(PhaseDensity& f, double dt, std::vector<std::string>* warnings = nullptr);

/// Strang step for the alignment model: transport dt/2, velocity relaxation
/// dt (substepped to the explicit bound, flux weights shared across columns
/// since the alignment mean is global), transport dt/2.
void strang_split_step(PhaseDensity& f, double alpha, double diffusion,
                       const QuadSpec& quad, double dt);

/// Same splitting applied to the fluctuation g about a global-in-x
/// equilibrium profile f_inf_w (mass 1 in w, uniform in x). The relaxation
/// increment is flux(f_inf/Lx + g) - flux_frozen(f_inf/Lx), so g == 0 is a
/// fixed point to machine precision.
void strang_split_step_mm(PhaseDensity& g, const Density& f_inf_w, double alpha,
                          double diffusion, const QuadSpec& quad, double dt);

}  // namespace kinetic_uq
