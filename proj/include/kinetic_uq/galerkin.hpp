#pragma once

#include <functional>
#include <vector>

#include "kinetic_uq/grid.hpp"
#include "kinetic_uq/random_input.hpp"

namespace kinetic_uq {

/// Legendre chaos on a uniform input, shifted to (a,b). Phi_0 = 1 and
/// E[Phi_h Phi_k] = delta_hk / (2h+1) against the normalized density.
struct GpcBasis {
  RandomInput input;
  int order = 0;
  std::vector<double> quad_nodes;    // 2*order+4 Gauss points
  std::vector<double> quad_weights;  // sum to 1

  int size() const { return order + 1; }
  double eval(int h, double theta) const;
  double norm_sq(int h) const { return 1.0 / (2.0 * h + 1.0); }
};

GpcBasis make_legendre_basis(const RandomInput& input, int order);

/// Chaos coefficients of a density field: coeff[h * n_cells + i].
struct GpcField {
  VelocityGrid grid;
  int modes = 0;
  std::vector<double> coeff;

  GpcField() = default;
  GpcField(const VelocityGrid& g, int m)
      : grid(g), modes(m), coeff(static_cast<size_t>(m) * g.n_cells, 0.0) {}
  double& at(int h, int i) { return coeff[static_cast<size_t>(h) * grid.n_cells + i]; }
  double at(int h, int i) const {
    return coeff[static_cast<size_t>(h) * grid.n_cells + i];
  }
};

/// Quadrature projection f_h = E[f(theta) Phi_h] / ||Phi_h||^2.
GpcField project(const GpcBasis& basis, const VelocityGrid& g,
                 const std::function<Density(double)>& sampler);

/// Pointwise series evaluation at one theta.
Density evaluate(const GpcField& f, const GpcBasis& basis, double theta);

Density mean_field(const GpcField& f);
Density variance_field(const GpcField& f, const GpcBasis& basis);

/// d_hk = E[c Phi_h Phi_k] / ||Phi_h||^2; tridiagonal when c is linear.
std::vector<double> pair_tensor(const GpcBasis& basis,
                                const std::function<double(double)>& c);

/// G_{hkm} = E[c Phi_h Phi_k Phi_m] / ||Phi_h||^2, layout h*(n*n)+k*n+m.
std::vector<double> triple_tensor(const GpcBasis& basis,
                                  const std::function<double(double)>& c);

/// Galerkin system for drift b(w) (deterministic) and diffusion c_D(theta)
/// (w-independent): d f_h/dt = d_w(b f_h) + sum_k d_hk d_ww f_k, second-order
/// central fluxes, zero flux through the boundary faces.
struct GpcSystem {
  VelocityGrid grid;
  int modes = 0;
  std::vector<double> drift;      // b at cell centers
  std::vector<double> diffusion;  // d_hk, row-major modes x modes
};

GpcSystem make_gpc_system(const GpcBasis& basis, const VelocityGrid& g,
                          const std::function<double(double)>& b,
                          const std::function<double(double)>& c_D);

/// One backward Euler step; the block-tridiagonal system is solved by a block
/// Thomas sweep with dense partial-pivot LU on the mode blocks.
void gpc_step_backward_euler(GpcField& f, const GpcSystem& sys, double dt);

/// Fluctuation step about a projected equilibrium: subtracting the frozen
/// equilibrium flux leaves the same homogeneous operator, so g == 0 is an
/// exact fixed point of the solve.
void mm_gpc_step_backward_euler(GpcField& g, const GpcSystem& sys, double dt);

}  // namespace kinetic_uq
