#include "kinetic_uq/models.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kinetic_uq {

namespace {

double raw_moment0(const Density& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += f[i];
  return s * f.grid.dw;
}

double raw_moment1(const Density& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += f.grid.center(i) * f[i];
  return s * f.grid.dw;
}

Density density_from_log(const VelocityGrid& g, const std::vector<double>& logv) {
  double top = logv[0];
  for (double v : logv) top = std::max(top, v);
  Density f(g);
  for (int i = 0; i < g.n_cells; ++i) f[i] = std::exp(logv[i] - top);
  normalize(f);
  return f;
}

}  // namespace

ModelSpec linear_fp_model(double u, std::function<double(double)> T) {
  ModelSpec m;
  m.name = "linear_fp";
  m.default_w_min = -1.0;
  m.default_w_max = 1.0;
  m.drift_depends_on_density = false;
  m.drift_diffusion = [u, T](double theta) {
    DriftDiffusion dd;
    dd.drift_builder = [u](const Density&) {
      return [u](double w) { return w - u; };
    };
    const double temp = T(theta);
    dd.diffusion = [temp](double) { return temp; };
    dd.diffusion_prime = [](double) { return 0.0; };
    return dd;
  };
  m.steady_state = [u, T](double theta, const VelocityGrid& g) {
    return maxwellian(g, u, T(theta));
  };
  m.initial_datum = [u, T](double theta, const VelocityGrid& g) {
    return maxwellian(g, u, T(theta));
  };
  // The linear drift relaxes mean and temperature to the model values; only
  // the mass of the datum survives.
  m.equilibrium_from_datum = [u, T](double theta, const Density& datum) {
    Density out = maxwellian(datum.grid, u, T(theta));
    const double m0 = moments(datum).mass;
    for (int i = 0; i < out.size(); ++i) out[i] *= m0;
    return out;
  };
  return m;
}

namespace {

// log of the consensus steady state up to a constant:
//   -2 log(1-w^2) + a log((1+w)/(1-w)) - b (1 - u w)/(1-w^2)
// with b = P/sigma2, a = b u / 2. The flux of this profile vanishes
// identically, which the weight construction reproduces at the discrete
// level through the face quadrature.
Density opinion_steady(const VelocityGrid& g, double P, double sigma2, double u) {
  const double b = P / sigma2;
  const double a = 0.5 * b * u;
  std::vector<double> logv(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double w = g.center(i);
    const double om = 1.0 - w * w;
    logv[i] = -2.0 * std::log(om) + a * std::log((1.0 + w) / (1.0 - w)) -
              b * (1.0 - u * w) / om;
  }
  return density_from_log(g, logv);
}

}  // namespace

ModelSpec opinion_model(std::function<double(double)> P, double sigma2) {
  ModelSpec m;
  m.name = "opinion";
  m.default_w_min = -1.0;
  m.default_w_max = 1.0;
  m.drift_depends_on_density = true;
  m.drift_diffusion = [P, sigma2](double theta) {
    DriftDiffusion dd;
    const double p = P(theta);
    dd.drift_builder = [p](const Density& f) {
      const double m0 = raw_moment0(f);
      const double m1 = raw_moment1(f);
      return [p, m0, m1](double w) { return p * (w * m0 - m1); };
    };
    dd.diffusion = [sigma2](double w) {
      const double om = 1.0 - w * w;
      return 0.5 * sigma2 * om * om;
    };
    dd.diffusion_prime = [sigma2](double w) {
      return -2.0 * sigma2 * w * (1.0 - w * w);
    };
    return dd;
  };
  m.initial_datum = [](double, const VelocityGrid& g) {
    return two_bump_datum(30.0)(0.0, g);
  };
  m.steady_state = [P, sigma2, m](double theta, const VelocityGrid& g) {
    const double u = moments(m.initial_datum(theta, g)).mean;
    return opinion_steady(g, P(theta), sigma2, u);
  };
  m.equilibrium_from_datum = [P, sigma2](double theta, const Density& datum) {
    const double u = moments(datum).mean;
    return opinion_steady(datum.grid, P(theta), sigma2, u);
  };
  return m;
}

namespace {

// Inverse-Gamma-type profile with Pareto exponent mu = 1 + 2/sigma2 and the
// scale fixed by the conserved mean wealth: log f = -(1+mu) log w - (mu-1) wbar / w.
Density wealth_steady(const VelocityGrid& g, double sigma2, double wbar) {
  const double mu = 1.0 + 2.0 / sigma2;
  const double beta = (mu - 1.0) * wbar;
  std::vector<double> logv(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double w = g.center(i);
    logv[i] = -(1.0 + mu) * std::log(w) - beta / w;
  }
  return density_from_log(g, logv);
}

}  // namespace

ModelSpec wealth_model(std::function<double(double)> sigma2) {
  ModelSpec m;
  m.name = "wealth";
  m.default_w_min = 0.0;
  m.default_w_max = 10.0;
  m.boundary = BoundaryRule::quasi_stationary_right;
  m.drift_depends_on_density = true;
  m.drift_diffusion = [sigma2](double theta) {
    DriftDiffusion dd;
    dd.drift_builder = [](const Density& f) {
      const double m0 = raw_moment0(f);
      const double m1 = raw_moment1(f);
      return [m0, m1](double w) { return w * m0 - m1; };
    };
    const double s2 = sigma2(theta);
    dd.diffusion = [s2](double w) { return 0.5 * s2 * w * w; };
    dd.diffusion_prime = [s2](double w) { return s2 * w; };
    return dd;
  };
  m.initial_datum = [](double, const VelocityGrid& g) {
    return bump_datum(20.0, 2.0)(0.0, g);
  };
  m.steady_state = [sigma2, m](double theta, const VelocityGrid& g) {
    const double wbar = moments(m.initial_datum(theta, g)).mean;
    return wealth_steady(g, sigma2(theta), wbar);
  };
  m.equilibrium_from_datum = [sigma2](double theta, const Density& datum) {
    const double wbar = moments(datum).mean;
    return wealth_steady(datum.grid, sigma2(theta), wbar);
  };
  return m;
}

Density swarming_profile(const VelocityGrid& g, double alpha, double diffusion,
                         double u) {
  std::vector<double> logv(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double w = g.center(i);
    const double pot = 0.25 * alpha * w * w * w * w +
                       0.5 * (1.0 - alpha) * w * w - u * w;
    logv[i] = -pot / diffusion;
  }
  return density_from_log(g, logv);
}

double swarming_mean_fixed_point(const VelocityGrid& g, double alpha, double diffusion,
                                 double u_start) {
  double u = u_start;
  const double omega = 0.5;
  for (int it = 0; it < 10000; ++it) {
    const double next = (1.0 - omega) * u +
                        omega * moments(swarming_profile(g, alpha, diffusion, u)).mean;
    if (std::abs(next - u) < 1e-12) return next;
    u = next;
  }
  throw std::runtime_error("swarming mean iteration stalled at u = " + std::to_string(u) +
                           " after 10000 iterations");
}

ModelSpec swarming_model(double alpha, std::function<double(double)> D) {
  ModelSpec m;
  m.name = "swarming";
  m.default_w_min = -3.0;
  m.default_w_max = 3.0;
  m.drift_depends_on_density = true;
  m.drift_diffusion = [alpha, D](double theta) {
    DriftDiffusion dd;
    dd.drift_builder = [alpha](const Density& f) {
      const double m0 = raw_moment0(f);
      if (m0 <= 0.0) throw std::domain_error("degenerate density: mass <= 0");
      const double uf = raw_moment1(f) / m0;
      return [alpha, uf](double w) {
        return alpha * w * (w * w - 1.0) + (w - uf);
      };
    };
    const double d = D(theta);
    dd.diffusion = [d](double) { return d; };
    dd.diffusion_prime = [](double) { return 0.0; };
    return dd;
  };
  m.initial_datum = [](double, const VelocityGrid& g) {
    return bump_datum(2.0, 1.5)(0.0, g);
  };
  m.steady_state = [alpha, D, m](double theta, const VelocityGrid& g) {
    const double u0 = moments(m.initial_datum(theta, g)).mean;
    const double u = swarming_mean_fixed_point(g, alpha, D(theta), u0);
    return swarming_profile(g, alpha, D(theta), u);
  };
  m.equilibrium_from_datum = [alpha, D](double theta, const Density& datum) {
    const double u0 = moments(datum).mean;
    const double u = swarming_mean_fixed_point(datum.grid, alpha, D(theta), u0);
    return swarming_profile(datum.grid, alpha, D(theta), u);
  };
  return m;
}

std::function<Density(double, const VelocityGrid&)> mixture_datum(
    double c, std::function<double(double)> sigma2) {
  return [c, sigma2](double theta, const VelocityGrid& g) {
    const double s2 = sigma2(theta);
    if (s2 <= 0.0) throw std::domain_error("mixture variance must be positive");
    Density f(g);
    for (int i = 0; i < g.n_cells; ++i) {
      const double w = g.center(i);
      f[i] = std::exp(-0.5 * (w - c) * (w - c) / s2) +
             std::exp(-0.5 * (w + c) * (w + c) / s2);
    }
    normalize(f);
    return f;
  };
}

std::function<Density(double, const VelocityGrid&)> two_bump_datum(double c) {
  return [c](double, const VelocityGrid& g) {
    Density f(g);
    for (int i = 0; i < g.n_cells; ++i) {
      const double w = g.center(i);
      f[i] = std::exp(-c * (w + 0.5) * (w + 0.5)) +
             std::exp(-c * (w - 0.5) * (w - 0.5));
    }
    normalize(f);
    return f;
  };
}

std::function<Density(double, const VelocityGrid&)> bump_datum(double c, double u0) {
  return [c, u0](double, const VelocityGrid& g) {
    Density f(g);
    for (int i = 0; i < g.n_cells; ++i) {
      const double w = g.center(i);
      f[i] = std::exp(-c * (w - u0) * (w - u0));
    }
    normalize(f);
    return f;
  };
}

}  // namespace kinetic_uq
