#include "vfp/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfp/common.hpp"

namespace vfp {

PhaseGrid build_grid(int dim, int nx, int nv, double vmax, double period) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("dim must be 1 or 2, got " +
                                std::to_string(dim));
  if (nx < 4) throw std::invalid_argument("nx must be >= 4");
  if (nv < 8) throw std::invalid_argument("nv must be >= 8");
  if (nv % 2 != 0) throw std::invalid_argument("nv must be even");
  if (!(vmax > 0.0)) throw std::invalid_argument("vmax must be positive");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  PhaseGrid g;
  g.dim = dim;
  g.nx = nx;
  g.nv = nv;
  g.vmax = vmax;
  g.period = period;
  g.dx = period / nx;
  g.dv = 2.0 * vmax / nv;
  return g;
}

DistField zero_field(const PhaseGrid& grid) {
  return DistField{grid, ArrayXXd::Zero(grid.v_cells(), grid.x_cells())};
}

DistField sample_function(const PhaseGrid& grid,
                          const std::function<double(Coord, Coord)>& fn) {
  DistField f = zero_field(grid);
  const int nxt = grid.x_cells();
  const int nvt = grid.v_cells();
  for (int xc = 0; xc < nxt; ++xc) {
    const Coord x = grid.x_coord(xc);
    for (int vc = 0; vc < nvt; ++vc) {
      double val = fn(x, grid.v_coord(vc));
      if (!std::isfinite(val))
        throw std::invalid_argument("sample_function: non-finite value");
      if (val < 0.0) {
        if (val > -1e-300)
          val = 0.0;
        else
          throw std::invalid_argument("sample_function: negative value");
      }
      f.values(vc, xc) = val;
    }
  }
  return f;
}

double integrate_phase(const DistField& field,
                       const std::function<double(Coord, Coord)>& weight) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> per_x(nxt);
  std::vector<double> buf(nvt);
  for (int xc = 0; xc < nxt; ++xc) {
    const Coord x = g.x_coord(xc);
    for (int vc = 0; vc < nvt; ++vc)
      buf[vc] = field.values(vc, xc) * weight(x, g.v_coord(vc));
    per_x[xc] = pairwise_sum(buf);
  }
  return pairwise_sum(per_x) * g.cell_vol();
}

double integrate_phase(const DistField& field) {
  const PhaseGrid& g = field.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();
  std::vector<double> per_x(nxt);
  for (int xc = 0; xc < nxt; ++xc)
    per_x[xc] = pairwise_sum(field.values.col(xc).data(), nvt);
  return pairwise_sum(per_x) * g.cell_vol();
}

void validate(const DistField& field) {
  if (!field.values.allFinite())
    throw std::runtime_error("DistField: non-finite value");
  if ((field.values < 0.0).any())
    throw std::runtime_error("DistField: negative value");
}

}  // namespace vfp
