#pragma once

#include <cstdint>
#include <vector>

#include "kinetic_uq/diagnostics.hpp"
#include "kinetic_uq/models.hpp"
#include "kinetic_uq/random_input.hpp"
#include "kinetic_uq/stepper.hpp"

namespace kinetic_uq {

enum class TimeScheme { explicit_euler, ssp_rk2, ssp_rk3, semi_implicit };
enum class WeightMode { quasi_steady, exact };
enum class FluxForm { cc, entropic };

struct SolveOptions {
  TimeScheme scheme = TimeScheme::explicit_euler;
  WeightMode weights = WeightMode::quasi_steady;
  FluxForm flux = FluxForm::cc;
  QuadSpec quad;
  double dt = 0.0;
  double t_final = 0.0;
  bool record_entropy = false;  // relative to the model steady state
};

struct SolveResult {
  Density f;
  StepControl control;
  EntropyTrace trace;
};

/// Time-marches one frozen-theta problem from the model datum. Weights are
/// rebuilt every step only when the drift depends on the density; exact mode
/// freezes them from the closed-form steady state.
SolveResult solve_single(const ModelSpec& model, double theta, const VelocityGrid& g,
                         const SolveOptions& opt);

/// Same march, returning the field at each snapshot time (ascending multiples
/// of dt; the last one is the horizon).
std::vector<Density> solve_at_times(const ModelSpec& model, double theta,
                                    const VelocityGrid& g, const SolveOptions& opt,
                                    const std::vector<double>& times);

/// Runs body(0..n-1); sample index fixes all randomness, so slot writes make
/// the result independent of the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

enum class UqMethod { collocation, mc, m3c, fm3c, galerkin };

struct UqEstimate {
  Density mean;
  Density variance;  // pointwise, clipped at 0
  UqMethod method = UqMethod::mc;
  int n_nodes_or_samples = 0;
  std::uint64_t seed = 0;
  bool seeded = false;
  double time = 0.0;
};

/// Estimates at a fixed list of snapshot times (ascending, each a multiple of
/// dt up to 1e-9 rounding; the last one is the horizon).
struct UqSeries {
  std::vector<double> times;
  std::vector<UqEstimate> estimates;
};

struct CollocationResult {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1 against the input density
  std::vector<Density> fields;
  std::vector<EntropyTrace> traces;  // one per node when record_entropy
  UqEstimate estimate;
};

/// Deterministic collocation on the Gauss nodes of the input; variance is the
/// quadrature second moment about the mean.
CollocationResult collocate(const ModelSpec& model, const RandomInput& input,
                            int m_nodes, const VelocityGrid& g, const SolveOptions& opt,
                            int threads = 1);

struct McOptions {
  int samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Plain Monte Carlo over theta; sample k draws from SampleStream(seed, k).
UqSeries mc_series(const ModelSpec& model, const RandomInput& input,
                   const VelocityGrid& g, const SolveOptions& opt, const McOptions& mc,
                   const std::vector<double>& times);
UqEstimate mc_estimate(const ModelSpec& model, const RandomInput& input,
                       const VelocityGrid& g, const SolveOptions& opt,
                       const McOptions& mc);

/// Flux of the equilibrium under its own quasi-steady weights; subtracting it
/// from the fluctuation update pins g == 0 exactly.
std::vector<double> micro_macro_ref_flux(const Density& f_inf, const DriftDiffusion& dd,
                                         const QuadSpec& quad);

/// One forward-Euler step of the fluctuation g about f_inf:
/// g += dt/dw * d[ flux(W(f_inf+g), f_inf+g) - ref_flux ].
void evolve_micro_macro(Density& g, const Density& f_inf, const DriftDiffusion& dd,
                        const QuadSpec& quad, const std::vector<double>& ref_flux,
                        double dt);

enum class BankMode { sample, quadrature };

struct M3cOptions {
  int samples = 0;       // fluctuation samples M
  BankMode bank = BankMode::sample;
  int bank_samples = 0;  // M_E >= samples; sample mode reuses streams 0..M-1
  int bank_nodes = 0;    // quadrature mode
  std::uint64_t seed = 0;
  int threads = 1;
};

struct M3cSeries {
  UqSeries series;  // bank mean + fluctuation sample mean per snapshot
  Density bank_mean;
};

/// Micro-macro Monte Carlo: equilibrium part from the bank, fluctuation part
/// from M evolved g samples.
M3cSeries m3c_series(const ModelSpec& model, const RandomInput& input,
                     const VelocityGrid& g, const SolveOptions& opt,
                     const M3cOptions& m3c, const std::vector<double>& times);
UqEstimate m3c_estimate(const ModelSpec& model, const RandomInput& input,
                        const VelocityGrid& g, const SolveOptions& opt,
                        const M3cOptions& m3c);

struct Fm3cOptions {
  int initial_samples = 0;  // M_0 <= bank_samples in sample mode
  BankMode bank = BankMode::sample;
  int bank_samples = 0;
  int bank_nodes = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct Fm3cSeries {
  UqSeries series;
  Density bank_mean;
  std::vector<double> step_times;      // every time step
  std::vector<int> sample_trace;       // M_n after each step's discard
  std::vector<double> variance_trace;  // (1/M_n) sum ||g_k - gbar||_2^2
};

/// Variance-faded micro-macro Monte Carlo: after every time step the active
/// set shrinks to floor(M_n * Var(g^{n+1})/Var(g^n)), clamped to [1, M_n],
/// discarding evenly spaced indices. Zero variance freezes the count; growth
/// out of an exactly zero variance is an error (samples cannot be added).
Fm3cSeries fm3c_series(const ModelSpec& model, const RandomInput& input,
                       const VelocityGrid& g, const SolveOptions& opt,
                       const Fm3cOptions& fm, const std::vector<double>& times);

}  // namespace kinetic_uq
