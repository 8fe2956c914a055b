#include "kinetic_uq/random_input.hpp"

#include <cmath>
#include <stdexcept>

namespace kinetic_uq {

namespace {

// splitmix64; decorrelates (seed, index) pairs before seeding the engine.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SampleStream::SampleStream(std::uint64_t master_seed, std::uint64_t index)
    : eng_(splitmix64(splitmix64(master_seed) ^ splitmix64(index * 0x9E3779B97F4A7C15ULL + 1))) {}

double SampleStream::uniform01() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

RandomInput RandomInput::uniform(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("uniform input requires b > a");
  return RandomInput{a, b};
}

double RandomInput::sample(SampleStream& stream) const {
  return a + (b - a) * stream.uniform01();
}

double RandomInput::density(double theta) const {
  return (theta >= a && theta <= b) ? 1.0 / (b - a) : 0.0;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre requires n >= 1");
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;  // roots come in +- pairs
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = -z;
    nodes[static_cast<size_t>(n - 1 - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<size_t>(n / 2)] = 0.0;
}

GaussQuadrature quadrature_nodes(const RandomInput& input, int m) {
  if (m < 1) throw std::invalid_argument("quadrature_nodes requires M >= 1");
  std::vector<double> z, w;
  gauss_legendre(m, z, w);
  GaussQuadrature q;
  q.nodes.resize(static_cast<size_t>(m));
  q.weights.resize(static_cast<size_t>(m));
  const double mid = 0.5 * (input.a + input.b);
  const double half = 0.5 * (input.b - input.a);
  for (int k = 0; k < m; ++k) {
    q.nodes[static_cast<size_t>(k)] = mid + half * z[static_cast<size_t>(k)];
    q.weights[static_cast<size_t>(k)] = 0.5 * w[static_cast<size_t>(k)];  // against p = 1/(b-a)
  }
  return q;
}

}  // namespace kinetic_uq
