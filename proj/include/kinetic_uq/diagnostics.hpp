#pragma once

#include <vector>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/grid.hpp"

namespace kinetic_uq {

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// dw-weighted L1/L2/Linf distance between two densities on the same grid.
ErrorNorms error_norms(const Density& f, const Density& ref);

/// Discrete relative entropy dw * sum f_i log(f_i / ref_i) with 0 log 0 = 0.
/// Throws if ref_i <= 0 where f_i > 0, or on negative f_i.
double relative_entropy(const Density& f, const Density& ref);

enum class DissipationForm { cc, entropic };

/// Nonnegative entropy-dissipation functional of the discrete flux.
/// cc form: sum d(log r) * d(r) * logmean(f_inf) * D_face, r = f/f_inf.
/// entropic form: sum (d log r)^2 * D_face * logmean(f).
double discrete_dissipation(const Density& f, const Density& f_inf, const DriftDiffusion& dd,
                            DissipationForm form);

/// Discrete free energy dw * sum_j [ (dw/2) sum_i U(w_j - w_i) f_i f_j
///                                   + D f_j log f_j ] for constant D.
/// The interaction kernel is sampled at signed center differences.
double free_energy(const Density& f, const std::function<double(double)>& interaction,
                   double diffusion_const);

/// Entropy history of a run: one value (and one dissipation value) per time.
struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> dissipation;
};

}  // namespace kinetic_uq
