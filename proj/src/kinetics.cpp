#include "vfp/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vfp/common.hpp"

namespace vfp {

namespace {

/// s(w) = w / (e^w - 1), the Scharfetter-Gummel weight, evaluated stably.
double sg_weight(double w) {
  const double aw = std::abs(w);
  if (aw < 1e-5) return 1.0 - 0.5 * w + w * w / 12.0;
  if (w > 36.0) return w * std::exp(-w);
  if (w < -36.0) return -w;
  return w / std::expm1(w);
}

/// Face coefficients for the flux F_{j+1/2} = alpha f_{j+1} - beta f_j of
/// T d_v f + (v - u) f along one velocity axis. alpha, beta > 0 and
/// alpha/beta = exp((v_{j+1/2}-u) dv / T), so the flux vanishes exactly on
/// the discrete Maxwellian.
void face_coeffs(const PhaseGrid& g, double u, double T, int face,
                 double* alpha, double* beta) {
  const double vf = -g.vmax + (face + 1) * g.dv;  // face between j and j+1
  const double B = vf - u;
  if (!(T > 1e-280)) {  // pure drift (upwind) limit; also avoids w overflow
    *alpha = B > 0.0 ? B : 0.0;
    *beta = B < 0.0 ? -B : 0.0;
    return;
  }
  const double w = B * g.dv / T;
  const double s = sg_weight(w);
  *beta = (T / g.dv) * s;
  *alpha = (T / g.dv) * (s + w);
}

/// Thomas elimination for the M-matrix (I - dt L); no pivoting needed.
void solve_tridiag(std::vector<double>& diag, std::vector<double>& lower,
                   std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t j = 1; j < n; ++j) {
    const double m = lower[j] / diag[j - 1];
    diag[j] -= m * upper[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t j = n - 1; j-- > 0;)
    rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

/// Implicit Chang-Cooper solve along one velocity axis of one x-column.
void collide_axis(const PhaseGrid& g, double u, double T, double dt, int axis,
                  double* col) {
  const int n = g.nv;
  const int stride = (g.dim == 1 || axis == 1) ? 1 : g.nv;
  const int lines = g.v_cells() / n;
  const double r = dt / g.dv;

  std::vector<double> alpha(n - 1), beta(n - 1);
  for (int f = 0; f < n - 1; ++f) face_coeffs(g, u, T, f, &alpha[f], &beta[f]);

  std::vector<double> diag(n), lower(n), upper(n), rhs(n);
  for (int line = 0; line < lines; ++line) {
    int base;
    if (g.dim == 1)
      base = 0;
    else if (axis == 0)
      base = line;
    else
      base = line * g.nv;
    for (int j = 0; j < n; ++j) {
      const double bp = j < n - 1 ? beta[j] : 0.0;   // face j+1/2
      const double am = j > 0 ? alpha[j - 1] : 0.0;  // face j-1/2
      diag[j] = 1.0 + r * (bp + am);
      upper[j] = j < n - 1 ? -r * alpha[j] : 0.0;
      lower[j] = j > 0 ? -r * beta[j - 1] : 0.0;
      rhs[j] = col[base + j * stride];
    }
    solve_tridiag(diag, lower, upper, rhs);
    for (int j = 0; j < n; ++j) col[base + j * stride] = rhs[j];
  }
}

}  // namespace

ArrayXXd apply_operator(const DistField& field, const CoefficientSet& coeffs) {
  const PhaseGrid& g = field.grid;
  if (coeffs.T.size() != g.x_cells())
    throw std::invalid_argument("apply_operator: grid mismatch");
  ArrayXXd out = ArrayXXd::Zero(g.v_cells(), g.x_cells());
  const int n = g.nv;
  parallel_for(g.x_cells(), 8, [&](std::size_t b, std::size_t e) {
    std::vector<double> flux(n - 1);
    for (std::size_t xc = b; xc < e; ++xc) {
      const double T = coeffs.T[xc];
      const double* f = field.values.col(xc).data();
      for (int a = 0; a < g.dim; ++a) {
        const double u = coeffs.u(xc, a);
        const int stride = (g.dim == 1 || a == 1) ? 1 : g.nv;
        const int lines = g.v_cells() / n;
        for (int line = 0; line < lines; ++line) {
          int base;
          if (g.dim == 1)
            base = 0;
          else if (a == 0)
            base = line;
          else
            base = line * g.nv;
          for (int j = 0; j < n - 1; ++j) {
            const double vf = -g.vmax + (j + 1) * g.dv;
            const double fj = f[base + j * stride];
            const double fj1 = f[base + (j + 1) * stride];
            if (j >= 1 && j <= n - 3) {
              // 4th-order face interpolation on interior faces
              const double fm = f[base + (j - 1) * stride];
              const double fp = f[base + (j + 2) * stride];
              const double dface =
                  (27.0 * (fj1 - fj) - (fp - fm)) / (24.0 * g.dv);
              const double vface = (9.0 * (fj + fj1) - (fm + fp)) / 16.0;
              flux[j] = T * dface + (vf - u) * vface;
            } else {
              flux[j] = T * (fj1 - fj) / g.dv + (vf - u) * 0.5 * (fj + fj1);
            }
          }
          for (int j = 0; j < n; ++j) {
            const double fp = j < n - 1 ? flux[j] : 0.0;
            const double fm = j > 0 ? flux[j - 1] : 0.0;
            out(base + j * stride, xc) += (fp - fm) / g.dv;
          }
        }
      }
    }
  });
  return out;
}

DistField collision_step(const DistField& field, const CoefficientSet& coeffs,
                         double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("collision_step: dt must be > 0");
  const PhaseGrid& g = field.grid;
  if (coeffs.T.size() != g.x_cells())
    throw std::invalid_argument("collision_step: grid mismatch");
  if ((coeffs.T < 0.0).any())
    throw std::invalid_argument("collision_step: negative temperature");
  DistField out = field;
  parallel_for(g.x_cells(), 4, [&](std::size_t b, std::size_t e) {
    for (std::size_t xc = b; xc < e; ++xc) {
      double* col = out.values.col(xc).data();
      for (int a = 0; a < g.dim; ++a)
        collide_axis(g, coeffs.u(xc, a), coeffs.T[xc], dt, a, col);
    }
  });
  return out;
}

namespace {

/// Shifts one periodic line by `s` cells (any real): out[i] = in at i - s,
/// cubic Lagrange in incremental form so constants pass through bitwise.
/// Negative values are clipped and the line rescaled to its original sum.
void shift_line(const std::vector<double>& in, double s,
                std::vector<double>& out) {
  const int n = static_cast<int>(in.size());
  const double minus = -s;
  const double fl = std::floor(minus);
  double eta = minus - fl;
  long b = static_cast<long>(fl);
  b %= n;
  if (b < 0) b += n;

  if (eta == 0.0) {
    for (int i = 0; i < n; ++i) out[i] = in[(i + b) % n];
    return;
  }
  const double cm1 = -eta * (eta - 1.0) * (eta - 2.0) / 6.0;
  const double cp1 = -(eta + 1.0) * eta * (eta - 2.0) / 2.0;
  const double cp2 = (eta + 1.0) * eta * (eta - 1.0) / 6.0;

  bool clipped = false;
  for (int i = 0; i < n; ++i) {
    const int i0 = static_cast<int>((i + b) % n);
    const double f0 = in[i0];
    const double fm1 = in[(i0 + n - 1) % n];
    const double fp1 = in[(i0 + 1) % n];
    const double fp2 = in[(i0 + 2) % n];
    double v = f0 + cm1 * (fm1 - f0) + cp1 * (fp1 - f0) + cp2 * (fp2 - f0);
    if (v < 0.0) {
      v = 0.0;
      clipped = true;
    }
    out[i] = v;
  }
  if (clipped) {
    const double target = pairwise_sum(in);
    const double got = pairwise_sum(out);
    if (got > 0.0) {
      const double scale = target / got;
      for (int i = 0; i < n; ++i) out[i] *= scale;
    }
  }
}

}  // namespace

DistField transport_step(const DistField& field, double dt) {
  const PhaseGrid& g = field.grid;
  DistField out = field;

  // One pass per spatial axis; the shift speed is constant along each line.
  for (int axis = 0; axis < g.dim; ++axis) {
    const ArrayXXd cur = out.values;
    const int lines_per_v = g.dim == 1 ? 1 : g.nx;
    parallel_for(g.v_cells(), 16, [&](std::size_t vb, std::size_t ve) {
      std::vector<double> in(g.nx), sh(g.nx);
      for (std::size_t vc = vb; vc < ve; ++vc) {
        const double s =
            g.v_node(g.v_index(static_cast<int>(vc), axis)) * dt / g.dx;
        for (int line = 0; line < lines_per_v; ++line) {
          for (int i = 0; i < g.nx; ++i) {
            const int xc = g.dim == 1
                               ? i
                               : (axis == 0 ? i * g.nx + line
                                            : line * g.nx + i);
            in[i] = cur(vc, xc);
          }
          shift_line(in, s, sh);
          for (int i = 0; i < g.nx; ++i) {
            const int xc = g.dim == 1
                               ? i
                               : (axis == 0 ? i * g.nx + line
                                            : line * g.nx + i);
            out.values(vc, xc) = sh[i];
          }
        }
      }
    });
  }
  return out;
}

}  // namespace vfp
