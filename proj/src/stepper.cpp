#include "kinetic_uq/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kinetic_uq {

double cfl_explicit(const FluxWeights& w, const DriftDiffusion& dd, const VelocityGrid& g) {
  double u_max = 0.0;
  double d_max = 0.0;
  for (int j = 1; j < g.n_cells; ++j) {
    u_max = std::max(u_max, std::abs(w.c_tilde[static_cast<size_t>(j)]));
    d_max = std::max(d_max, dd.diffusion(g.face(j)));
  }
  const double denom = 2.0 * (u_max * g.dw + d_max);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return g.dw * g.dw / denom;
}

double cfl_semi_implicit(const FluxWeights& w, const VelocityGrid& g) {
  double u_max = 0.0;
  for (int j = 1; j < g.n_cells; ++j)
    u_max = std::max(u_max, std::abs(w.c_tilde[static_cast<size_t>(j)]));
  if (u_max == 0.0) return std::numeric_limits<double>::infinity();
  return g.dw / (2.0 * u_max);
}

void step_explicit(Density& f, const std::vector<double>& flux, double dt) {
  const double nu = dt / f.grid.dw;
  for (int i = 0; i < f.size(); ++i)
    f[i] += nu * (flux[static_cast<size_t>(i + 1)] - flux[static_cast<size_t>(i)]);
}

void step_ssp(Density& f, const FluxBuilder& builder, double dt, int order) {
  if (order != 2 && order != 3) throw std::invalid_argument("step_ssp: order must be 2 or 3");
  Density f1 = f;
  step_explicit(f1, builder(f1), dt);
  if (order == 2) {
    Density f2 = f1;
    step_explicit(f2, builder(f2), dt);
    for (int i = 0; i < f.size(); ++i) f[i] = 0.5 * f[i] + 0.5 * f2[i];
    return;
  }
  Density f2 = f1;
  step_explicit(f2, builder(f2), dt);
  for (int i = 0; i < f.size(); ++i) f2[i] = 0.75 * f[i] + 0.25 * f2[i];
  Density f3 = f2;
  step_explicit(f3, builder(f3), dt);
  for (int i = 0; i < f.size(); ++i) f[i] = f[i] / 3.0 + 2.0 / 3.0 * f3[i];
}

void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

void step_semi_implicit(Density& f, const FluxWeights& w, const DriftDiffusion& dd, double dt) {
  const VelocityGrid& g = f.grid;
  const int n = g.n_cells;
  const double nu = dt / g.dw;

  // Face coefficients of F_j = a_j f_{j-1} + b_j f_j; a <= 0 <= b holds for
  // every lambda in exact arithmetic and gives the M-matrix sign pattern
  // below. At extreme face ratios (|lambda| in the hundreds, where one
  // coefficient tends to zero) the composition can round to the wrong side,
  // so clip the residue to keep the sign pattern bitwise.
  std::vector<double> a(static_cast<size_t>(n + 1), 0.0), b(static_cast<size_t>(n + 1), 0.0);
  for (int j = 1; j < n; ++j) {
    const double d_face = dd.diffusion(g.face(j));
    const double del = w.delta[static_cast<size_t>(j)];
    const double ct = w.c_tilde[static_cast<size_t>(j)];
    a[static_cast<size_t>(j)] = std::min(ct * del - d_face / g.dw, 0.0);
    b[static_cast<size_t>(j)] = std::max(ct * (1.0 - del) + d_face / g.dw, 0.0);
  }

  std::vector<double> lo(static_cast<size_t>(n)), di(static_cast<size_t>(n)),
      up(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    lo[static_cast<size_t>(i)] = nu * a[static_cast<size_t>(i)];
    di[static_cast<size_t>(i)] =
        1.0 - nu * a[static_cast<size_t>(i + 1)] + nu * b[static_cast<size_t>(i)];
    up[static_cast<size_t>(i)] = -nu * b[static_cast<size_t>(i + 1)];
  }
  solve_tridiagonal(lo, di, up, f.values);
}

}  // namespace kinetic_uq
