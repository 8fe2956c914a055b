#include "kinetic_uq/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kinetic_uq {

VelocityGrid VelocityGrid::uniform(double w_min, double w_max, int n_cells) {
  if (n_cells < 2) throw std::invalid_argument("n_cells must be >= 2");
  if (!(w_max > w_min)) throw std::invalid_argument("grid requires w_max > w_min");
  VelocityGrid g;
  g.w_min = w_min;
  g.w_max = w_max;
  g.n_cells = n_cells;
  g.dw = (w_max - w_min) / n_cells;
  return g;
}

bool VelocityGrid::same_as(const VelocityGrid& other) const {
  return n_cells == other.n_cells && w_min == other.w_min && w_max == other.w_max;
}

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b, const char* where) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

double mass(const Density& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.dw;
}

Moments moments(const Density& f) {
  const double m0 = mass(f);
  if (!(m0 > 0.0)) throw std::domain_error("degenerate density: mass <= 0");
  double m1 = 0.0;
  for (int i = 0; i < f.size(); ++i) m1 += f.grid.center(i) * f[i];
  m1 *= f.grid.dw;
  const double u = m1 / m0;
  double t = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double d = f.grid.center(i) - u;
    t += d * d * f[i];
  }
  t *= f.grid.dw / m0;
  return Moments{m0, u, t};
}

void normalize(Density& f) {
  const double m0 = mass(f);
  if (!(m0 > 0.0)) throw std::domain_error("degenerate density: mass <= 0");
  for (double& v : f.values) v /= m0;
}

Density maxwellian(const VelocityGrid& g, double u, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("maxwellian requires T > 0");
  Density f(g);
  for (int i = 0; i < g.n_cells; ++i) {
    const double d = g.center(i) - u;
    f[i] = std::exp(-0.5 * d * d / T);
  }
  normalize(f);
  return f;
}

}  // namespace kinetic_uq
