#include "vfp/regularize.hpp"

#include <cmath>
#include <stdexcept>

#include "vfp/common.hpp"

namespace vfp {

namespace {

/// Unnormalized bump profile at radius r/eps; compact support |r| < eps.
double bump(double r, double eps) {
  const double s2 = sq(r / eps);
  return s2 < 1.0 ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
}

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

MollifierKernel build_mollifier(const PhaseGrid& grid, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier: eps must be > 0");
  if (eps < grid.dx)
    throw std::invalid_argument("mollifier: kernel under-resolved (eps < dx)");

  const int reach = static_cast<int>(std::floor(eps / grid.dx));
  MollifierKernel k;
  k.eps = eps;

  // Accumulate periodic images onto per-axis offsets in (-nx/2, nx/2].
  const int half = grid.nx / 2;
  auto fold = [&](int m) {
    int r = wrap(m, grid.nx);
    if (r > half) r -= grid.nx;
    return r;
  };
  if (grid.dim == 1) {
    std::vector<double> acc(grid.nx, 0.0);
    for (int m = -reach; m <= reach; ++m)
      acc[wrap(fold(m), grid.nx)] += bump(m * grid.dx, eps);
    for (int i = 0; i < grid.nx; ++i)
      if (acc[i] > 0.0) {
        int off = i > half ? i - grid.nx : i;
        k.offsets.push_back({off, 0});
        k.weights.push_back(acc[i]);
      }
  } else {
    ArrayXXd acc = ArrayXXd::Zero(grid.nx, grid.nx);
    for (int m0 = -reach; m0 <= reach; ++m0)
      for (int m1 = -reach; m1 <= reach; ++m1) {
        const double r = std::hypot(m0 * grid.dx, m1 * grid.dx);
        if (r < eps)
          acc(wrap(fold(m0), grid.nx), wrap(fold(m1), grid.nx)) +=
              bump(r, eps);
      }
    for (int i0 = 0; i0 < grid.nx; ++i0)
      for (int i1 = 0; i1 < grid.nx; ++i1)
        if (acc(i0, i1) > 0.0) {
          int o0 = i0 > half ? i0 - grid.nx : i0;
          int o1 = i1 > half ? i1 - grid.nx : i1;
          k.offsets.push_back({o0, o1});
          k.weights.push_back(acc(i0, i1));
        }
  }

  const double total =
      pairwise_sum(k.weights.data(), k.weights.size()) * grid.cell_vol_x();
  for (double& w : k.weights) w /= total;
  return k;
}

SpatialField mollify(const PhaseGrid& grid, const MollifierKernel& kernel,
                     const SpatialField& field) {
  if (field.size() != grid.x_cells())
    throw std::invalid_argument("mollify: grid mismatch");
  const double dvol = grid.cell_vol_x();
  SpatialField out = SpatialField::Zero(grid.x_cells());
  const std::size_t nk = kernel.offsets.size();
  if (grid.dim == 1) {
    for (int i = 0; i < grid.nx; ++i) {
      double s = 0.0;
      for (std::size_t m = 0; m < nk; ++m)
        s += kernel.weights[m] * field[wrap(i - kernel.offsets[m][0], grid.nx)];
      out[i] = s * dvol;
    }
  } else {
    for (int i0 = 0; i0 < grid.nx; ++i0)
      for (int i1 = 0; i1 < grid.nx; ++i1) {
        double s = 0.0;
        for (std::size_t m = 0; m < nk; ++m) {
          const int j0 = wrap(i0 - kernel.offsets[m][0], grid.nx);
          const int j1 = wrap(i1 - kernel.offsets[m][1], grid.nx);
          s += kernel.weights[m] * field[j0 * grid.nx + j1];
        }
        out[i0 * grid.nx + i1] = s * dvol;
      }
  }
  return out;
}

SpatialVectorField mollify(const PhaseGrid& grid, const MollifierKernel& kernel,
                           const SpatialVectorField& field) {
  SpatialVectorField out(field.rows(), field.cols());
  for (int a = 0; a < field.cols(); ++a)
    out.col(a) = mollify(grid, kernel, SpatialField(field.col(a)));
  return out;
}

SpatialVectorField regularized_velocity(const MomentSet& m,
                                        const PhaseGrid& grid,
                                        const MollifierKernel& kernel,
                                        double eps) {
  const SpatialField rho_m = mollify(grid, kernel, m.rho);
  const SpatialVectorField mom_m = mollify(grid, kernel, m.mom);
  SpatialVectorField u(grid.x_cells(), grid.dim);
  for (int xc = 0; xc < grid.x_cells(); ++xc) {
    const double m2 = mom_m.row(xc).matrix().squaredNorm();
    const double denom = rho_m[xc] + eps * (1.0 + m2);
    for (int a = 0; a < grid.dim; ++a) u(xc, a) = mom_m(xc, a) / denom;
  }
  return u;
}

std::pair<SpatialField, SpatialField> regularized_temperature(
    const MomentSet& m, const PhaseGrid& grid, const MollifierKernel& kernel,
    double /*eps*/, double delta) {
  const SpatialField rho_m = mollify(grid, kernel, m.rho);
  const SpatialVectorField mom_m = mollify(grid, kernel, m.mom);
  const SpatialField en2_m = mollify(grid, kernel, m.en2);
  const int n = grid.x_cells();
  SpatialField phi(n), T(n);
  for (int xc = 0; xc < n; ++xc) {
    const double m2 = mom_m.row(xc).matrix().squaredNorm();
    phi[xc] = en2_m[xc] - m2 / (rho_m[xc] + delta * (1.0 + m2));
    // (phi + d^2) / (N rho_m + d (1 + phi)) written as the monotone map
    // x -> x / (a + b x) with x = phi + d^2.
    T[xc] = saturating_quotient(phi[xc] + sq(delta),
                                grid.dim * rho_m[xc] + delta * (1.0 - sq(delta)),
                                delta);
  }
  return {phi, T};
}

RegFields build_reg_fields(const MomentSet& m, const PhaseGrid& grid,
                           const MollifierKernel& kernel,
                           const RegParams& params) {
  RegFields r;
  r.rho_moll = mollify(grid, kernel, m.rho);
  r.mom_moll = mollify(grid, kernel, m.mom);
  r.en2_moll = mollify(grid, kernel, m.en2);
  r.u_eps = regularized_velocity(m, grid, kernel, params.eps);
  std::tie(r.phi, r.t_eps_delta) =
      regularized_temperature(m, grid, kernel, params.eps, params.delta);
  return r;
}

namespace {

/// Non-periodic bump weights over velocity-cell offsets, renormalized per
/// source cell at use time. Degenerates to a delta when eps < dv.
std::vector<double> velocity_bump_weights(const PhaseGrid& g, double eps,
                                          int* reach_out) {
  const int reach = static_cast<int>(std::floor(eps / g.dv));
  std::vector<double> w(2 * reach + 1);
  for (int m = -reach; m <= reach; ++m) w[m + reach] = bump(m * g.dv, eps);
  *reach_out = reach;
  return w;
}

/// Mass-preserving mollification along one velocity axis: each source cell
/// scatters its content with weights renormalized over targets inside the
/// box.
void scatter_axis(const PhaseGrid& g, int axis, const std::vector<double>& w,
                  int reach, ArrayXXd& vals) {
  const int n = g.nv;
  const int stride = (g.dim == 1 || axis == 1) ? 1 : g.nv;
  const int lines = g.v_cells() / n;
  ArrayXXd out = ArrayXXd::Zero(vals.rows(), vals.cols());
  for (int xc = 0; xc < vals.cols(); ++xc) {
    for (int line = 0; line < lines; ++line) {
      // Base index of this 1D line through the velocity lattice.
      int base;
      if (g.dim == 1)
        base = 0;
      else if (axis == 0)
        base = line;  // vary j0, fixed j1 = line
      else
        base = line * g.nv;  // vary j1, fixed j0 = line
      for (int j = 0; j < n; ++j) {
        const double src = vals(base + j * stride, xc);
        if (src == 0.0) continue;
        const int lo = std::max(-reach, -j);
        const int hi = std::min(reach, n - 1 - j);
        double tot = 0.0;
        for (int m = lo; m <= hi; ++m) tot += w[m + reach];
        const double scale = src / tot;
        for (int m = lo; m <= hi; ++m)
          out(base + (j + m) * stride, xc) += scale * w[m + reach];
      }
    }
  }
  vals.swap(out);
}

}  // namespace

DistField regularize_initial(const DistField& f0, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("regularize_initial: eps must be > 0");
  const PhaseGrid& g = f0.grid;
  DistField out = f0;

  // Spatial pass: periodic convolution row by row (each velocity cell).
  if (eps >= g.dx) {
    const MollifierKernel kx = build_mollifier(g, eps);
    ArrayXXd conv(out.values.rows(), out.values.cols());
    SpatialField tmp(g.x_cells());
    for (int vc = 0; vc < g.v_cells(); ++vc) {
      for (int xc = 0; xc < g.x_cells(); ++xc) tmp[xc] = out.values(vc, xc);
      const SpatialField res = mollify(g, kx, tmp);
      for (int xc = 0; xc < g.x_cells(); ++xc) conv(vc, xc) = res[xc];
    }
    out.values.swap(conv);
  }

  // Velocity pass, one axis at a time.
  int reach = 0;
  const std::vector<double> wv = velocity_bump_weights(g, eps, &reach);
  if (reach > 0)
    for (int a = 0; a < g.dim; ++a) scatter_axis(g, a, wv, reach, out.values);

  // Gaussian floor.
  for (int vc = 0; vc < g.v_cells(); ++vc) {
    const double floor = eps * std::exp(-g.v_norm2(vc));
    for (int xc = 0; xc < g.x_cells(); ++xc) out.values(vc, xc) += floor;
  }
  return out;
}

}  // namespace vfp
