#include "kinetic_uq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinetic_uq {

ErrorNorms error_norms(const Density& f, const Density& ref) {
  require_same_grid(f.grid, ref.grid, "error_norms");
  ErrorNorms e;
  for (int i = 0; i < f.size(); ++i) {
    const double d = std::abs(f[i] - ref[i]);
    e.l1 += d;
    e.l2 += d * d;
    e.linf = std::max(e.linf, d);
  }
  e.l1 *= f.grid.dw;
  e.l2 = std::sqrt(e.l2 * f.grid.dw);
  return e;
}

double relative_entropy(const Density& f, const Density& ref) {
  require_same_grid(f.grid, ref.grid, "relative_entropy");
  double h = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) throw std::domain_error("relative_entropy: negative density");
    if (f[i] == 0.0) continue;  // 0 log 0 = 0
    if (!(ref[i] > 0.0))
      throw std::domain_error("relative_entropy: reference vanishes where f > 0");
    h += f[i] * std::log(f[i] / ref[i]);
  }
  return h * f.grid.dw;
}

double discrete_dissipation(const Density& f, const Density& f_inf, const DriftDiffusion& dd,
                            DissipationForm form) {
  require_same_grid(f.grid, f_inf.grid, "discrete_dissipation");
  const VelocityGrid& g = f.grid;
  double total = 0.0;
  for (int j = 1; j < g.n_cells; ++j) {
    const double d_face = dd.diffusion(g.face(j));
    const double rl = f[j - 1] / f_inf[j - 1];
    const double rr = f[j] / f_inf[j];
    if (!(rl > 0.0) || !(rr > 0.0))
      throw std::domain_error("discrete_dissipation requires positive ratios");
    const double dlog = std::log(rr) - std::log(rl);
    if (form == DissipationForm::cc) {
      total += dlog * (rr - rl) * log_mean(f_inf[j - 1], f_inf[j]) * d_face;
    } else {
      total += dlog * dlog * log_mean(f[j - 1], f[j]) * d_face;
    }
  }
  return total;
}

double free_energy(const Density& f, const std::function<double(double)>& interaction,
                   double diffusion_const) {
  const VelocityGrid& g = f.grid;
  double total = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    double conv = 0.0;
    for (int i = 0; i < f.size(); ++i)
      conv += interaction(g.center(j) - g.center(i)) * f[i];
    conv *= 0.5 * g.dw;
    double ent = 0.0;
    if (f[j] > 0.0) ent = diffusion_const * f[j] * std::log(f[j]);
    else if (f[j] < 0.0) throw std::domain_error("free_energy: negative density");
    total += conv * f[j] + ent;
  }
  return total * g.dw;
}

}  // namespace kinetic_uq
