#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

namespace vfp {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;

/// Scalar field over spatial cells.
using SpatialField = Eigen::ArrayXd;
/// Vector field over spatial cells, one column per axis.
using SpatialVectorField = Eigen::ArrayXXd;

/// Coordinate of a point on one of the two lattices; only the first `dim`
/// components are meaningful.
using Coord = std::array<double, 2>;

/// Discrete phase space: periodic torus in x, truncated box [-vmax, vmax]^N
/// in v. Both lattices are cell-centered. nv must be even so that v = 0 is a
/// cell face and odd-in-v integrands cancel exactly on the symmetric grid.
struct PhaseGrid {
  int dim = 1;  // N, 1 or 2
  int nx = 0;   // cells per spatial axis
  int nv = 0;   // cells per velocity axis
  double vmax = 0.0;
  double period = 1.0;
  double dx = 0.0;  // period / nx
  double dv = 0.0;  // 2 vmax / nv

  int x_cells() const { return dim == 1 ? nx : nx * nx; }
  int v_cells() const { return dim == 1 ? nv : nv * nv; }

  double x_node(int i) const { return (i + 0.5) * dx; }
  double v_node(int j) const { return -vmax + (j + 0.5) * dv; }

  /// Multi-index decomposition: cell = i0 * n + i1 (axis 0 outer).
  int x_index(int cell, int axis) const {
    return dim == 1 ? cell : (axis == 0 ? cell / nx : cell % nx);
  }
  int v_index(int cell, int axis) const {
    return dim == 1 ? cell : (axis == 0 ? cell / nv : cell % nv);
  }

  Coord x_coord(int cell) const {
    Coord c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) c[a] = x_node(x_index(cell, a));
    return c;
  }
  Coord v_coord(int cell) const {
    Coord c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) c[a] = v_node(v_index(cell, a));
    return c;
  }
  double v_norm2(int cell) const {
    const Coord c = v_coord(cell);
    return c[0] * c[0] + c[1] * c[1];
  }

  double cell_vol_x() const { return dim == 1 ? dx : dx * dx; }
  double cell_vol_v() const { return dim == 1 ? dv : dv * dv; }
  double cell_vol() const { return cell_vol_x() * cell_vol_v(); }
  double spatial_volume() const { return dim == 1 ? period : period * period; }

  bool same_as(const PhaseGrid& o) const {
    return dim == o.dim && nx == o.nx && nv == o.nv && vmax == o.vmax &&
           period == o.period;
  }
};

PhaseGrid build_grid(int dim, int nx, int nv, double vmax, double period = 1.0);

/// Nonnegative distribution f(x,v) on a PhaseGrid. Column j holds the
/// velocity profile of spatial cell j (velocity index is contiguous).
struct DistField {
  PhaseGrid grid;
  ArrayXXd values;  // v_cells() x x_cells()
};

DistField zero_field(const PhaseGrid& grid);

/// Samples fn at cell centers. Negative round-off (|val| < 1e-300) is
/// clamped to zero; anything more negative is rejected.
DistField sample_function(const PhaseGrid& grid,
                          const std::function<double(Coord, Coord)>& fn);

/// Midpoint-rule integral of f * weight over phase space. Summation is
/// v-inner with a pairwise reduction on both levels.
double integrate_phase(const DistField& field,
                       const std::function<double(Coord, Coord)>& weight);
double integrate_phase(const DistField& field);

/// Throws if the field carries NaN/Inf or negative values.
void validate(const DistField& field);

}  // namespace vfp
