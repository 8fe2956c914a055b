#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kinetic_uq {

/// Deterministic substream: sample index k of a run with master seed s always
/// sees the same variates, independent of thread count or sibling samples.
struct SampleStream {
  SampleStream(std::uint64_t master_seed, std::uint64_t index);
  /// Uniform in [0,1) with 53 random bits; avoids the implementation-defined
  /// std::uniform_real_distribution so results are portable.
  double uniform01();

 private:
  std::mt19937_64 eng_;
};

/// Uncertain parameter theta ~ Uniform(a, b).
struct RandomInput {
  double a = -1.0;
  double b = 1.0;

  static RandomInput uniform(double a, double b);

  double sample(SampleStream& stream) const;
  double density(double theta) const;  // p(theta) = 1/(b-a) on [a,b]
};

/// Quadrature against the input's density: sum(weights) == 1 and
/// sum(w_k g(theta_k)) approximates E[g(theta)].
struct GaussQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre nodes/weights on [-1,1]; weights sum to 2.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// M-point Gauss rule for E[.] under the input's density. M >= 1.
GaussQuadrature quadrature_nodes(const RandomInput& input, int m);

}  // namespace kinetic_uq
