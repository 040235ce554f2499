#include "vfp/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vfp/common.hpp"

namespace vfp {

namespace {
constexpr double kFFloor = 1e-300;
}

MomentSet compute_moments(const DistField& field) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  const double dvol = g.cell_vol_v();

  MomentSet m;
  m.rho = SpatialField::Zero(nxt);
  m.mom = SpatialVectorField::Zero(nxt, g.dim);
  m.en2 = SpatialField::Zero(nxt);
  m.u = SpatialVectorField::Zero(nxt, g.dim);
  m.T = SpatialField::Zero(nxt);

  std::vector<double> b0(nvt), b1(nvt), b2(nvt), b3(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    const double* f = field.values.col(xc).data();
    for (int vc = 0; vc < nvt; ++vc) {
      b0[vc] = f[vc];
      b2[vc] = g.v_norm2(vc) * f[vc];
    }
    m.rho[xc] = pairwise_sum(b0) * dvol;
    m.en2[xc] = pairwise_sum(b2) * dvol;
    for (int a = 0; a < g.dim; ++a) {
      for (int vc = 0; vc < nvt; ++vc)
        b1[vc] = g.v_node(g.v_index(vc, a)) * f[vc];
      m.mom(xc, a) = pairwise_sum(b1) * dvol;
    }
  }

  const double mass = pairwise_sum(m.rho.data(), nxt) * g.cell_vol_x();
  m.rho_floor = 1e-12 * mass / g.spatial_volume();

  for (int xc = 0; xc < nxt; ++xc) {
    if (m.rho[xc] > m.rho_floor) {
      double u2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        m.u(xc, a) = m.mom(xc, a) / m.rho[xc];
        u2 += sq(m.u(xc, a));
      }
      const double t = (m.en2[xc] - m.rho[xc] * u2) / (g.dim * m.rho[xc]);
      m.T[xc] = t > 0.0 ? t : 0.0;
    }
  }
  return m;
}

DistField local_maxwellian(const MomentSet& m, const PhaseGrid& grid) {
  DistField out = zero_field(grid);
  const int nvt = grid.v_cells();
  for (int xc = 0; xc < grid.x_cells(); ++xc) {
    if (m.rho[xc] <= m.rho_floor) continue;
    const double T = m.T[xc];
    if (T <= 0.0) throw std::runtime_error("degenerate temperature");
    const double norm =
        m.rho[xc] / std::pow(2.0 * M_PI * T, 0.5 * grid.dim);
    for (int vc = 0; vc < nvt; ++vc) {
      double d2 = 0.0;
      for (int a = 0; a < grid.dim; ++a)
        d2 += sq(grid.v_node(grid.v_index(vc, a)) - m.u(xc, a));
      out.values(vc, xc) = norm * std::exp(-d2 / (2.0 * T));
    }
  }
  return out;
}

double entropy(const DistField& field) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> per_x(nxt);
  std::vector<double> buf(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    const double* f = field.values.col(xc).data();
    for (int vc = 0; vc < nvt; ++vc)
      buf[vc] = f[vc] > kFFloor ? f[vc] * std::log(f[vc]) : 0.0;
    per_x[xc] = pairwise_sum(buf);
  }
  return pairwise_sum(per_x) * g.cell_vol();
}

namespace {

/// d/dv_a f at velocity cell vc of one spatial column: 2nd-order centered,
/// one-sided at the box edges.
double dv_derivative(const PhaseGrid& g, const double* f, int vc, int axis) {
  const int n = g.nv;
  const int j = g.v_index(vc, axis);
  const int stride = (g.dim == 1 || axis == 1) ? 1 : g.nv;
  const double* p = f + (vc - j * stride);
  const double h = g.dv;
  if (j == 0)
    return (-3.0 * p[0] + 4.0 * p[stride] - p[2 * stride]) / (2.0 * h);
  if (j == n - 1)
    return (3.0 * p[j * stride] - 4.0 * p[(j - 1) * stride] +
            p[(j - 2) * stride]) /
           (2.0 * h);
  return (p[(j + 1) * stride] - p[(j - 1) * stride]) / (2.0 * h);
}

}  // namespace

double entropy_dissipation(const DistField& field, const MomentSet& m) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> per_x(nxt);
  std::vector<double> buf(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    const double T = m.T[xc];
    if (T <= 0.0) {
      per_x[xc] = 0.0;
      continue;
    }
    const double* f = field.values.col(xc).data();
    for (int vc = 0; vc < nvt; ++vc) {
      if (f[vc] < kFFloor) {
        buf[vc] = 0.0;
        continue;
      }
      double flux2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double vA = g.v_node(g.v_index(vc, a));
        const double grad = dv_derivative(g, f, vc, a);
        flux2 += sq(T * grad - (m.u(xc, a) - vA) * f[vc]);
      }
      buf[vc] = flux2 / (T * f[vc]);
    }
    per_x[xc] = pairwise_sum(buf);
  }
  return pairwise_sum(per_x) * g.cell_vol();
}

double weighted_norm_diff(const PhaseGrid& g, const ArrayXXd& values, double p,
                          double q) {
  if (q < 0.0) throw std::invalid_argument("weighted_norm: q must be >= 0");
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_norm: p must be >= 1");
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> wq(nvt);
  for (int vc = 0; vc < nvt; ++vc)
    wq[vc] = 1.0 + std::pow(std::sqrt(g.v_norm2(vc)), q);
  if (std::isinf(p)) {
    double mx = 0.0;
    for (int xc = 0; xc < nxt; ++xc)
      for (int vc = 0; vc < nvt; ++vc)
        mx = std::max(mx, wq[vc] * std::abs(values(vc, xc)));
    return mx;
  }
  std::vector<double> per_x(nxt);
  std::vector<double> buf(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    for (int vc = 0; vc < nvt; ++vc)
      buf[vc] = wq[vc] * std::pow(std::abs(values(vc, xc)), p);
    per_x[xc] = pairwise_sum(buf);
  }
  return std::pow(pairwise_sum(per_x) * g.cell_vol(), 1.0 / p);
}

double weighted_norm(const DistField& field, double p, double q) {
  return weighted_norm_diff(field.grid, field.values, p, q);
}

double third_moment(const DistField& field) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> per_x(nxt);
  std::vector<double> buf(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    const double* f = field.values.col(xc).data();
    for (int vc = 0; vc < nvt; ++vc)
      buf[vc] = std::pow(g.v_norm2(vc), 1.5) * f[vc];
    per_x[xc] = pairwise_sum(buf);
  }
  return pairwise_sum(per_x) * g.cell_vol();
}

}  // namespace vfp
