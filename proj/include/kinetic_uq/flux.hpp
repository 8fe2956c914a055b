#pragma once

#include <functional>
#include <vector>

#include "kinetic_uq/grid.hpp"

namespace kinetic_uq {

/// Face-integral quadrature for the weight exponent lambda.
enum class FaceRule { midpoint, open_nc2, open_nc4, open_nc6, gauss };

struct QuadSpec {
  FaceRule rule = FaceRule::gauss;
  int gauss_points = 20;
};

/// Drift-diffusion pair for one frozen value of theta. The drift may be a
/// nonlocal functional of the density; drift_builder is invoked once per
/// weight build and returns a pointwise evaluator (capturing precomputed
/// moments or convolution tables).
struct DriftDiffusion {
  std::function<std::function<double(double)>(const Density&)> drift_builder;
  std::function<double(double)> diffusion;
  std::function<double(double)> diffusion_prime;
};

/// Per-face weights of the quasi-steady flux. Arrays are indexed by face
/// j in [0, n_cells]; entries 0 and n_cells belong to boundary faces where the
/// flux vanishes and are never read.
struct FluxWeights {
  std::vector<double> c_tilde;  // advective coefficient, c_tilde = D * lambda / dw
  std::vector<double> lambda;   // integral of (B + D')/D across the face gap
  std::vector<double> delta;    // interpolation weight, in (0,1)
  bool mesh_guard_violated = false;  // dw * max|c_tilde| > 2 * min D at faces
  int n_faces() const { return static_cast<int>(delta.size()); }
};

/// delta(lambda) = 1/lambda + 1/(1 - e^lambda); removable singularity at 0,
/// series branch 1/2 - lambda/12 for |lambda| < 1e-8. Always in (0,1).
double delta_from_lambda(double lambda);

/// Logarithmic mean (a - b)/(log a - log b) for a, b > 0; equal-value branch
/// returns a. Lies strictly between min and max for distinct arguments.
double log_mean(double a, double b);

/// Entropic interpolation weight: delta such that
/// delta*f_i + (1-delta)*f_ip1 equals the logarithmic mean. In (0,1).
double entropic_delta(double f_i, double f_ip1);

/// Quasi-steady weights with the face integral evaluated by `quad`.
/// Throws "singular diffusion" if D <= 0 at any quadrature point.
FluxWeights cc_weights(const Density& f, const DriftDiffusion& dd, const QuadSpec& quad);

/// Weights that make the flux vanish identically on f_inf:
/// lambda = log(f_inf_i / f_inf_ip1). Requires strictly positive f_inf.
FluxWeights exact_weights(const Density& f_inf, const DriftDiffusion& dd);

/// Chang-Cooper form flux over faces; boundary entries are zero.
/// F_j = c_tilde_j * ((1-delta_j) f_j + delta_j f_{j-1}) + D_j (f_j - f_{j-1})/dw.
std::vector<double> cc_flux(const Density& f, const FluxWeights& w, const DriftDiffusion& dd);

/// Entropic-average flux; requires strictly positive f.
/// F_j = (c_tilde_j + D_j (log f_j - log f_{j-1})/dw) * logmean(f_{j-1}, f_j).
std::vector<double> entropic_flux(const Density& f, const FluxWeights& w,
                                  const DriftDiffusion& dd);

/// Nodes (as fractions of the face gap) and weights (summing to 1) of a rule.
void face_rule_points(const QuadSpec& quad, std::vector<double>& fractions,
                      std::vector<double>& weights);

}  // namespace kinetic_uq
