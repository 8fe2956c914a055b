#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/grid.hpp"

namespace kinetic_uq {

/// Resolved step size together with the stability bounds it was checked
/// against. CFL violations are recorded as warnings, never as errors.
struct StepControl {
  double dt = 0.0;
  double bound_explicit = 0.0;
  double bound_semi_implicit = 0.0;
  std::vector<std::string> warnings;
};

/// Positivity bound for explicit stepping: dw^2 / (2 (U dw + D_max)) with
/// U = max|c_tilde| and D_max the largest interior-face diffusion.
double cfl_explicit(const FluxWeights& w, const DriftDiffusion& dd, const VelocityGrid& g);

/// Positivity bound for the semi-implicit solve: dw / (2 U); +inf when U = 0.
double cfl_semi_implicit(const FluxWeights& w, const VelocityGrid& g);

/// Forward Euler in conservative form: f_i += dt (F_{j+1} - F_j)/dw.
void step_explicit(Density& f, const std::vector<double>& flux, double dt);

using FluxBuilder = std::function<std::vector<double>(const Density&)>;

/// Strong-stability-preserving Runge-Kutta (order 2 or 3); fluxes are rebuilt
/// through `builder` at every stage.
void step_ssp(Density& f, const FluxBuilder& builder, double dt, int order);

/// Semi-implicit step: weights frozen at time n, flux unknowns at n+1.
/// Tridiagonal system solved by a Thomas sweep (column-diagonally dominant).
void step_semi_implicit(Density& f, const FluxWeights& w, const DriftDiffusion& dd, double dt);

/// Thomas solve of a tridiagonal system in place; rhs becomes the solution.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs);

}  // namespace kinetic_uq
