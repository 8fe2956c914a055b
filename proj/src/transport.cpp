#include "kinetic_uq/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinetic_uq/stepper.hpp"

namespace kinetic_uq {

SpaceGrid SpaceGrid::uniform(double x_min, double x_max, int n_cells) {
  if (n_cells < 2) throw std::invalid_argument("n_cells must be >= 2");
  if (!(x_max > x_min)) throw std::invalid_argument("grid requires x_max > x_min");
  SpaceGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_cells = n_cells;
  g.dx = (x_max - x_min) / n_cells;
  return g;
}

double phase_mass(const PhaseDensity& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.xgrid.dx * f.wgrid.dw;
}

PhaseMoments phase_moments(const PhaseDensity& f) {
  PhaseMoments m;
  const int nx = f.xgrid.n_cells;
  for (int iw = 0; iw < f.wgrid.n_cells; ++iw) {
    double row = 0.0;
    const double* p = f.values.data() + static_cast<size_t>(iw) * nx;
    for (int ix = 0; ix < nx; ++ix) row += p[ix];
    m.mass += row;
    m.momentum += row * f.wgrid.center(iw);
  }
  const double cell = f.xgrid.dx * f.wgrid.dw;
  m.mass *= cell;
  m.momentum *= cell;
  return m;
}

Density velocity_marginal(const PhaseDensity& f) {
  Density out(f.wgrid);
  const int nx = f.xgrid.n_cells;
  for (int iw = 0; iw < f.wgrid.n_cells; ++iw) {
    double row = 0.0;
    const double* p = f.values.data() + static_cast<size_t>(iw) * nx;
    for (int ix = 0; ix < nx; ++ix) row += p[ix];
    out[iw] = row * f.xgrid.dx;
  }
  return out;
}

namespace {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

// Left-biased fifth-order reconstruction of the face value at i+1/2.
double weno_face(const std::vector<double>& u, int i, int n) {
  const double um2 = u[wrap(i - 2, n)];
  const double um1 = u[wrap(i - 1, n)];
  const double u0 = u[i];
  const double up1 = u[wrap(i + 1, n)];
  const double up2 = u[wrap(i + 2, n)];

  const double q0 = (2.0 * um2 - 7.0 * um1 + 11.0 * u0) / 6.0;
  const double q1 = (-um1 + 5.0 * u0 + 2.0 * up1) / 6.0;
  const double q2 = (2.0 * u0 + 5.0 * up1 - up2) / 6.0;

  const double b0 = (13.0 / 12.0) * (um2 - 2.0 * um1 + u0) * (um2 - 2.0 * um1 + u0) +
                    0.25 * (um2 - 4.0 * um1 + 3.0 * u0) * (um2 - 4.0 * um1 + 3.0 * u0);
  const double b1 = (13.0 / 12.0) * (um1 - 2.0 * u0 + up1) * (um1 - 2.0 * u0 + up1) +
                    0.25 * (um1 - up1) * (um1 - up1);
  const double b2 = (13.0 / 12.0) * (u0 - 2.0 * up1 + up2) * (u0 - 2.0 * up1 + up2) +
                    0.25 * (3.0 * u0 - 4.0 * up1 + up2) * (3.0 * u0 - 4.0 * up1 + up2);

  const double eps = 1e-6;
  double a0 = 0.1 / ((eps + b0) * (eps + b0));
  double a1 = 0.6 / ((eps + b1) * (eps + b1));
  double a2 = 0.3 / ((eps + b2) * (eps + b2));
  const double s = a0 + a1 + a2;
  return (a0 * q0 + a1 * q1 + a2 * q2) / s;
}

// One forward-Euler substage for u_t + a u_x = 0 with a > 0. When `limited`
// the high-order flux is blended toward first-order upwind so nonnegative
// input stays nonnegative (requires c = a dt / dx <= 1).
void euler_substage(std::vector<double>& u, double a, double dx, double dt,
                    bool limited, std::vector<double>& face,
                    std::vector<double>& scratch) {
  const int n = static_cast<int>(u.size());
  const double c = dt / dx;
  for (int i = 0; i < n; ++i) face[i] = a * weno_face(u, i, n);
  if (limited) {
    // face[i] sits at i+1/2; upwind flux there is a*u[i].
    for (int i = 0; i < n; ++i) {
      const double up = u[i] - a * c * (u[i] - u[wrap(i - 1, n)]);
      scratch[i] = up;  // first-order update, nonnegative by the CFL bound
    }
    std::vector<double> theta(n, 1.0);
    for (int i = 0; i < n; ++i) {
      const double anti_out = std::max(face[i] - a * u[i], 0.0);
      const double anti_in = std::min(face[wrap(i - 1, n)] - a * u[wrap(i - 1, n)], 0.0);
      const double drain = c * (anti_out - anti_in);
      const double r = drain > 1e-300 ? std::min(1.0, scratch[i] / drain) : 1.0;
      theta[i] = r;
    }
    for (int i = 0; i < n; ++i) {
      const double anti = face[i] - a * u[i];
      const double t = anti >= 0.0 ? theta[i] : theta[wrap(i + 1, n)];
      face[i] = a * u[i] + t * anti;
    }
  }
  for (int i = 0; i < n; ++i) {
    double v = u[i] - c * (face[i] - face[wrap(i - 1, n)]);
    // The limited value is >= 0 in exact arithmetic; clip the last-ulp
    // rounding residue so the invariant holds bitwise too.
    if (limited && v < 0.0) v = 0.0;
    scratch[i] = v;
  }
  u.swap(scratch);
}

}  // namespace

void advect_line_weno5(std::vector<double>& line, double speed, double dx, double dt) {
  const int n = static_cast<int>(line.size());
  if (n < 5) throw std::invalid_argument("weno5 line needs at least 5 cells");
  if (speed == 0.0 || dt == 0.0) return;
  const double a = std::abs(speed);

  const bool reversed = speed < 0.0;
  if (reversed) std::reverse(line.begin(), line.end());

  // The upwind fallback needs a dt/dx <= 1; past the bound run unlimited.
  bool limited = a * dt / dx <= 1.0 + 1e-12;
  if (limited)
    for (double v : line)
      if (v < 0.0) {
        limited = false;
        break;
      }

  std::vector<double> face(n), scratch(n);
  std::vector<double> u1 = line, u2;
  euler_substage(u1, a, dx, dt, limited, face, scratch);
  u2 = u1;
  euler_substage(u2, a, dx, dt, limited, face, scratch);
  for (int i = 0; i < n; ++i) u2[i] = 0.75 * line[i] + 0.25 * u2[i];
  euler_substage(u2, a, dx, dt, limited, face, scratch);
  for (int i = 0; i < n; ++i) line[i] = line[i] / 3.0 + 2.0 / 3.0 * u2[i];

  if (reversed) std::reverse(line.begin(), line.end());
}

void transport_step(PhaseDensity& f, double dt, std::vector<std::string>* warnings) {
  const int nx = f.xgrid.n_cells;
  const double wmax = std::max(std::abs(f.wgrid.w_min), std::abs(f.wgrid.w_max));
  if (warnings && wmax * dt / f.xgrid.dx > 1.0 + 1e-12)
    warnings->push_back("dt exceeds the advective bound dx / max|w|");
  std::vector<double> line(nx);
  for (int iw = 0; iw < f.wgrid.n_cells; ++iw) {
    const double w = f.wgrid.center(iw);
    if (w == 0.0) continue;
    double* p = f.values.data() + static_cast<size_t>(iw) * nx;
    std::copy(p, p + nx, line.begin());
    advect_line_weno5(line, w, f.xgrid.dx, dt);
    std::copy(line.begin(), line.end(), p);
  }
}

namespace {

DriftDiffusion alignment_dd(double alpha, double diffusion, double uf) {
  DriftDiffusion dd;
  dd.drift_builder = [alpha, uf](const Density&) {
    return [alpha, uf](double w) { return alpha * w * (w * w - 1.0) + (w - uf); };
  };
  dd.diffusion = [diffusion](double) { return diffusion; };
  dd.diffusion_prime = [](double) { return 0.0; };
  return dd;
}

struct FaceCoeffs {
  std::vector<double> a;  // F_j = a_j f_{j-1} + b_j f_j, zero on the boundary faces
  std::vector<double> b;
};

FaceCoeffs face_coeffs(const VelocityGrid& g, const FluxWeights& wts,
                       const DriftDiffusion& dd) {
  FaceCoeffs fc;
  fc.a.assign(g.n_faces(), 0.0);
  fc.b.assign(g.n_faces(), 0.0);
  // a <= 0 <= b for every lambda in exact arithmetic; clip the last-ulp
  // residue at extreme face ratios so the sign pattern holds bitwise.
  for (int j = 1; j < g.n_cells; ++j) {
    const double d = dd.diffusion(g.face(j));
    fc.a[j] = std::min(wts.c_tilde[j] * wts.delta[j] - d / g.dw, 0.0);
    fc.b[j] = std::max(wts.c_tilde[j] * (1.0 - wts.delta[j]) + d / g.dw, 0.0);
  }
  return fc;
}

// In-place explicit relaxation update of one w-column with shared
// coefficients; col must hold the old values on entry.
void column_update(double* p, int stride, int nv, const FaceCoeffs& fc, double nu,
                   std::vector<double>& col) {
  for (int i = 0; i < nv; ++i) col[i] = p[static_cast<size_t>(i) * stride];
  for (int i = 0; i < nv; ++i) {
    const double fl = i > 0 ? fc.a[i] * col[i - 1] + fc.b[i] * col[i] : 0.0;
    const double fr = i + 1 < nv ? fc.a[i + 1] * col[i] + fc.b[i + 1] * col[i + 1] : 0.0;
    p[static_cast<size_t>(i) * stride] += nu * (fr - fl);
  }
}

}  // namespace

void strang_split_step(PhaseDensity& f, double alpha, double diffusion,
                       const QuadSpec& quad, double dt) {
  transport_step(f, 0.5 * dt);

  const int nx = f.xgrid.n_cells;
  const int nv = f.wgrid.n_cells;
  Density probe(f.wgrid);  // drift closes over the global mean, not the column
  std::vector<double> col(nv);

  double remaining = dt;
  while (remaining > 0.0) {
    PhaseMoments m = phase_moments(f);
    if (m.mass <= 0.0) throw std::domain_error("degenerate density: mass <= 0");
    const DriftDiffusion dd = alignment_dd(alpha, diffusion, m.momentum / m.mass);
    const FluxWeights wts = cc_weights(probe, dd, quad);
    const double bound = cfl_explicit(wts, dd, f.wgrid);
    const double sub = std::min(remaining, bound);
    const FaceCoeffs fc = face_coeffs(f.wgrid, wts, dd);
    const double nu = sub / f.wgrid.dw;
    for (int ix = 0; ix < nx; ++ix)
      column_update(f.values.data() + ix, nx, nv, fc, nu, col);
    remaining -= sub;
  }

  transport_step(f, 0.5 * dt);
}

void strang_split_step_mm(PhaseDensity& g, const Density& f_inf_w, double alpha,
                          double diffusion, const QuadSpec& quad, double dt) {
  require_same_grid(g.wgrid, f_inf_w.grid, "strang_split_step_mm");
  transport_step(g, 0.5 * dt);

  const int nx = g.xgrid.n_cells;
  const int nv = g.wgrid.n_cells;
  const double lx = g.xgrid.x_max - g.xgrid.x_min;
  Density probe(g.wgrid);
  std::vector<double> col(nv);

  // Reference relaxation flux of the equilibrium column, removed from the
  // update so g == 0 stays exactly 0.
  Moments inf_m = moments(f_inf_w);
  const DriftDiffusion dd_inf = alignment_dd(alpha, diffusion, inf_m.mean);
  const FluxWeights wts_inf = cc_weights(probe, dd_inf, quad);
  const FaceCoeffs fc_inf = face_coeffs(g.wgrid, wts_inf, dd_inf);
  // Same expression shape as the in-loop flux so the g == 0 subtraction
  // cancels bitwise.
  std::vector<double> ref_flux(g.wgrid.n_faces(), 0.0);
  for (int j = 1; j < nv; ++j)
    ref_flux[j] = fc_inf.a[j] * (f_inf_w[j - 1] / lx + 0.0) + fc_inf.b[j] * (f_inf_w[j] / lx + 0.0);

  double remaining = dt;
  while (remaining > 0.0) {
    PhaseMoments gm = phase_moments(g);
    const double mass = 1.0 + gm.mass;
    const double momentum = inf_m.mean + gm.momentum;
    if (mass <= 0.0) throw std::domain_error("degenerate density: mass <= 0");
    const DriftDiffusion dd = alignment_dd(alpha, diffusion, momentum / mass);
    const FluxWeights wts = cc_weights(probe, dd, quad);
    const double bound = cfl_explicit(wts, dd, g.wgrid);
    const double sub = std::min(remaining, bound);
    const FaceCoeffs fc = face_coeffs(g.wgrid, wts, dd);
    const double nu = sub / g.wgrid.dw;
    for (int ix = 0; ix < nx; ++ix) {
      double* p = g.values.data() + ix;
      for (int i = 0; i < nv; ++i) col[i] = p[static_cast<size_t>(i) * nx];
      for (int i = 0; i < nv; ++i) {
        const double hl = i > 0 ? f_inf_w[i - 1] / lx + col[i - 1] : 0.0;
        const double hc = f_inf_w[i] / lx + col[i];
        const double hr = i + 1 < nv ? f_inf_w[i + 1] / lx + col[i + 1] : 0.0;
        const double fl = i > 0 ? fc.a[i] * hl + fc.b[i] * hc - ref_flux[i] : 0.0;
        const double fr =
            i + 1 < nv ? fc.a[i + 1] * hc + fc.b[i + 1] * hr - ref_flux[i + 1] : 0.0;
        p[static_cast<size_t>(i) * nx] += nu * (fr - fl);
      }
    }
    remaining -= sub;
  }

  transport_step(g, 0.5 * dt);
}

}  // namespace kinetic_uq
