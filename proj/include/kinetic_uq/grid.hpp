#pragma once

#include <vector>

namespace kinetic_uq {

/// Uniform cell-centered mesh on [w_min, w_max]. Cell i owns
/// [w_min + i*dw, w_min + (i+1)*dw]; densities live at cell centers.
struct VelocityGrid {
  double w_min = -1.0;
  double w_max = 1.0;
  int n_cells = 0;
  double dw = 0.0;

  static VelocityGrid uniform(double w_min, double w_max, int n_cells);

  double center(int i) const { return w_min + (i + 0.5) * dw; }
  double face(int j) const { return w_min + j * dw; }  // j in [0, n_cells]
  int n_faces() const { return n_cells + 1; }
  bool same_as(const VelocityGrid& other) const;
};

/// Cell-centered density samples. `signed_values` marks perturbation fields
/// (micro-macro g) that are allowed to change sign.
struct Density {
  VelocityGrid grid;
  std::vector<double> values;
  bool signed_values = false;

  Density() = default;
  explicit Density(const VelocityGrid& g, double fill = 0.0, bool signed_vals = false)
      : grid(g), values(static_cast<size_t>(g.n_cells), fill), signed_values(signed_vals) {}

  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  int size() const { return grid.n_cells; }
};

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double temperature = 0.0;
};

/// Midpoint-rule mass dw * sum(f_i).
double mass(const Density& f);

/// Mass, mean and temperature by midpoint sums. Throws on mass <= 0.
Moments moments(const Density& f);

/// Scales f to unit mass. Throws on mass <= 0.
void normalize(Density& f);

/// Grid-sampled normal density with mean u and variance T, normalized.
Density maxwellian(const VelocityGrid& g, double u, double T);

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b, const char* where);

}  // namespace kinetic_uq
