#include "kinetic_uq/galerkin.hpp"

#include <cmath>
#include <stdexcept>

namespace kinetic_uq {

double GpcBasis::eval(int h, double theta) const {
  const double x = 2.0 * (theta - input.a) / (input.b - input.a) - 1.0;
  double pm = 1.0, p = x;
  if (h == 0) return 1.0;
  for (int n = 1; n < h; ++n) {
    const double next = ((2.0 * n + 1.0) * x * p - n * pm) / (n + 1.0);
    pm = p;
    p = next;
  }
  return p;
}

GpcBasis make_legendre_basis(const RandomInput& input, int order) {
  if (order < 0) throw std::invalid_argument("chaos order must be nonnegative");
  GpcBasis b;
  b.input = input;
  b.order = order;
  GaussQuadrature q = quadrature_nodes(input, 2 * order + 4);
  b.quad_nodes = std::move(q.nodes);
  b.quad_weights = std::move(q.weights);
  return b;
}

GpcField project(const GpcBasis& basis, const VelocityGrid& g,
                 const std::function<Density(double)>& sampler) {
  GpcField f(g, basis.size());
  for (size_t q = 0; q < basis.quad_nodes.size(); ++q) {
    const double theta = basis.quad_nodes[q];
    const Density sample = sampler(theta);
    require_same_grid(g, sample.grid, "project");
    for (int h = 0; h < basis.size(); ++h) {
      const double scale = basis.quad_weights[q] * basis.eval(h, theta) / basis.norm_sq(h);
      for (int i = 0; i < g.n_cells; ++i) f.at(h, i) += scale * sample[i];
    }
  }
  return f;
}

Density evaluate(const GpcField& f, const GpcBasis& basis, double theta) {
  Density out(f.grid);
  out.signed_values = true;
  for (int h = 0; h < f.modes; ++h) {
    const double phi = basis.eval(h, theta);
    for (int i = 0; i < f.grid.n_cells; ++i) out[i] += phi * f.at(h, i);
  }
  return out;
}

Density mean_field(const GpcField& f) {
  Density out(f.grid);
  out.signed_values = true;
  for (int i = 0; i < f.grid.n_cells; ++i) out[i] = f.at(0, i);
  return out;
}

Density variance_field(const GpcField& f, const GpcBasis& basis) {
  Density out(f.grid);
  out.signed_values = true;
  for (int h = 1; h < f.modes; ++h) {
    const double n = basis.norm_sq(h);
    for (int i = 0; i < f.grid.n_cells; ++i) out[i] += n * f.at(h, i) * f.at(h, i);
  }
  return out;
}

std::vector<double> pair_tensor(const GpcBasis& basis,
                                const std::function<double(double)>& c) {
  const int n = basis.size();
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (size_t q = 0; q < basis.quad_nodes.size(); ++q) {
    const double theta = basis.quad_nodes[q];
    const double cw = c(theta) * basis.quad_weights[q];
    for (int h = 0; h < n; ++h) {
      const double ph = basis.eval(h, theta);
      for (int k = 0; k < n; ++k)
        d[static_cast<size_t>(h) * n + k] += cw * ph * basis.eval(k, theta);
    }
  }
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) d[static_cast<size_t>(h) * n + k] /= basis.norm_sq(h);
  return d;
}

std::vector<double> triple_tensor(const GpcBasis& basis,
                                  const std::function<double(double)>& c) {
  const int n = basis.size();
  std::vector<double> g(static_cast<size_t>(n) * n * n, 0.0);
  for (size_t q = 0; q < basis.quad_nodes.size(); ++q) {
    const double theta = basis.quad_nodes[q];
    const double cw = c(theta) * basis.quad_weights[q];
    std::vector<double> phi(n);
    for (int h = 0; h < n; ++h) phi[h] = basis.eval(h, theta);
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
          g[(static_cast<size_t>(h) * n + k) * n + m] += cw * phi[h] * phi[k] * phi[m];
  }
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        g[(static_cast<size_t>(h) * n + k) * n + m] /= basis.norm_sq(h);
  return g;
}

GpcSystem make_gpc_system(const GpcBasis& basis, const VelocityGrid& g,
                          const std::function<double(double)>& b,
                          const std::function<double(double)>& c_D) {
  GpcSystem sys;
  sys.grid = g;
  sys.modes = basis.size();
  sys.drift.resize(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) sys.drift[i] = b(g.center(i));
  sys.diffusion = pair_tensor(basis, c_D);
  return sys;
}

namespace {

// Dense LU with partial pivoting on an m x m block, then repeated solves.
struct BlockLu {
  int m = 0;
  std::vector<double> a;
  std::vector<int> piv;

  void factor(std::vector<double> block, int mm) {
    m = mm;
    a = std::move(block);
    piv.resize(m);
    for (int col = 0; col < m; ++col) {
      int p = col;
      for (int r = col + 1; r < m; ++r)
        if (std::abs(a[static_cast<size_t>(r) * m + col]) >
            std::abs(a[static_cast<size_t>(p) * m + col]))
          p = r;
      piv[col] = p;
      if (p != col)
        for (int c = 0; c < m; ++c)
          std::swap(a[static_cast<size_t>(p) * m + c], a[static_cast<size_t>(col) * m + c]);
      const double d = a[static_cast<size_t>(col) * m + col];
      if (d == 0.0) throw std::runtime_error("singular mode block");
      for (int r = col + 1; r < m; ++r) {
        const double f = a[static_cast<size_t>(r) * m + col] / d;
        a[static_cast<size_t>(r) * m + col] = f;
        for (int c = col + 1; c < m; ++c)
          a[static_cast<size_t>(r) * m + c] -= f * a[static_cast<size_t>(col) * m + c];
      }
    }
  }

  void solve(double* x) const {
    for (int col = 0; col < m; ++col) {
      if (piv[col] != col) std::swap(x[piv[col]], x[col]);
      for (int r = col + 1; r < m; ++r) x[r] -= a[static_cast<size_t>(r) * m + col] * x[col];
    }
    for (int r = m - 1; r >= 0; --r) {
      for (int c = r + 1; c < m; ++c) x[r] -= a[static_cast<size_t>(r) * m + c] * x[c];
      x[r] /= a[static_cast<size_t>(r) * m + r];
    }
  }
};

}  // namespace

void gpc_step_backward_euler(GpcField& f, const GpcSystem& sys, double dt) {
  require_same_grid(f.grid, sys.grid, "gpc_step_backward_euler");
  if (f.modes != sys.modes) throw std::invalid_argument("mode count mismatch");
  const int n = sys.grid.n_cells;
  const int m = sys.modes;
  const double dw = sys.grid.dw;
  const size_t mm = static_cast<size_t>(m) * m;

  // Interior face j carries F_j = P_j f_{j-1} + Q_j f_j with
  // P_j = b_{j-1}/2 I - d/dw, Q_j = b_j/2 I + d/dw; boundary faces vanish.
  // Row i of (I - dt L): lower = dt P_i / dw, diag = I - dt (P_{i+1} - Q_i)/dw,
  // upper = -dt Q_{i+1} / dw.
  auto face_p = [&](int j, std::vector<double>& out) {
    out.assign(mm, 0.0);
    for (int h = 0; h < m; ++h)
      for (int k = 0; k < m; ++k)
        out[static_cast<size_t>(h) * m + k] =
            -sys.diffusion[static_cast<size_t>(h) * m + k] / dw;
    for (int h = 0; h < m; ++h)
      out[static_cast<size_t>(h) * m + h] += 0.5 * sys.drift[j - 1];
  };
  auto face_q = [&](int j, std::vector<double>& out) {
    out.assign(mm, 0.0);
    for (int h = 0; h < m; ++h)
      for (int k = 0; k < m; ++k)
        out[static_cast<size_t>(h) * m + k] =
            sys.diffusion[static_cast<size_t>(h) * m + k] / dw;
    for (int h = 0; h < m; ++h)
      out[static_cast<size_t>(h) * m + h] += 0.5 * sys.drift[j];
  };

  std::vector<std::vector<double>> lower(n), upper(n);
  std::vector<std::vector<double>> diag(n);
  std::vector<double> pj, qj;
  const double r = dt / dw;
  for (int i = 0; i < n; ++i) {
    diag[i].assign(mm, 0.0);
    for (int h = 0; h < m; ++h) diag[i][static_cast<size_t>(h) * m + h] = 1.0;
    if (i > 0) {
      face_p(i, pj);
      lower[i] = pj;
      for (double& v : lower[i]) v *= r;
      face_q(i, qj);
      for (size_t t = 0; t < mm; ++t) diag[i][t] += r * qj[t];
    }
    if (i + 1 < n) {
      face_p(i + 1, pj);
      for (size_t t = 0; t < mm; ++t) diag[i][t] -= r * pj[t];
      face_q(i + 1, qj);
      upper[i] = qj;
      for (double& v : upper[i]) v *= -r;
    }
  }

  // x_i holds the mode vector of cell i: gather from the field layout.
  std::vector<double> x(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < m; ++h) x[static_cast<size_t>(i) * m + h] = f.at(h, i);

  // Block Thomas sweep.
  std::vector<BlockLu> lu(n);
  std::vector<std::vector<double>> cprime(n);
  std::vector<double> tmp(mm), vec(m);
  lu[0].factor(diag[0], m);
  if (n > 1) {
    cprime[0] = upper[0];
    for (int c = 0; c < m; ++c) {
      for (int h = 0; h < m; ++h) vec[h] = cprime[0][static_cast<size_t>(h) * m + c];
      lu[0].solve(vec.data());
      for (int h = 0; h < m; ++h) cprime[0][static_cast<size_t>(h) * m + c] = vec[h];
    }
  }
  lu[0].solve(x.data());
  for (int i = 1; i < n; ++i) {
    // diag_i - lower_i * cprime_{i-1}
    tmp = diag[i];
    for (int h = 0; h < m; ++h)
      for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int s = 0; s < m; ++s)
          acc += lower[i][static_cast<size_t>(h) * m + s] *
                 cprime[i - 1][static_cast<size_t>(s) * m + k];
        tmp[static_cast<size_t>(h) * m + k] -= acc;
      }
    lu[i].factor(tmp, m);
    // rhs_i -= lower_i * x_{i-1}
    for (int h = 0; h < m; ++h) {
      double acc = 0.0;
      for (int s = 0; s < m; ++s)
        acc += lower[i][static_cast<size_t>(h) * m + s] * x[static_cast<size_t>(i - 1) * m + s];
      x[static_cast<size_t>(i) * m + h] -= acc;
    }
    lu[i].solve(x.data() + static_cast<size_t>(i) * m);
    if (i + 1 < n) {
      cprime[i] = upper[i];
      for (int c = 0; c < m; ++c) {
        for (int h = 0; h < m; ++h) vec[h] = cprime[i][static_cast<size_t>(h) * m + c];
        lu[i].solve(vec.data());
        for (int h = 0; h < m; ++h) cprime[i][static_cast<size_t>(h) * m + c] = vec[h];
      }
    }
  }
  for (int i = n - 2; i >= 0; --i)
    for (int h = 0; h < m; ++h) {
      double acc = 0.0;
      for (int s = 0; s < m; ++s)
        acc += cprime[i][static_cast<size_t>(h) * m + s] * x[static_cast<size_t>(i + 1) * m + s];
      x[static_cast<size_t>(i) * m + h] -= acc;
    }

  for (int i = 0; i < n; ++i)
    for (int h = 0; h < m; ++h) f.at(h, i) = x[static_cast<size_t>(i) * m + h];
}

void mm_gpc_step_backward_euler(GpcField& g, const GpcSystem& sys, double dt) {
  gpc_step_backward_euler(g, sys, dt);
}

}  // namespace kinetic_uq
