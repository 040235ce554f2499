#include "vfp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vfp {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const DistField& field,
                    double time) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  const PhaseGrid& g = field.grid;
  os << "vfp-snapshot v1 " << g.dim << " " << g.nx << " " << g.nv << " "
     << format_g17(g.vmax) << " " << format_g17(g.period) << " "
     << format_g17(time) << "\n";
  for (int xc = 0; xc < g.x_cells(); ++xc)
    for (int vc = 0; vc < g.v_cells(); ++vc)
      os << format_g17(field.values(vc, xc)) << "\n";
}

std::pair<DistField, double> read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::string magic, version;
  int dim, nx, nv;
  double vmax, period, time;
  is >> magic >> version >> dim >> nx >> nv >> vmax >> period >> time;
  if (!is || magic != "vfp-snapshot" || version != "v1")
    throw std::runtime_error(path + ": not a vfp-snapshot v1 file");
  DistField f = zero_field(build_grid(dim, nx, nv, vmax, period));
  for (int xc = 0; xc < f.grid.x_cells(); ++xc)
    for (int vc = 0; vc < f.grid.v_cells(); ++vc) {
      double val;
      if (!(is >> val))
        throw std::runtime_error(path + ": truncated snapshot");
      f.values(vc, xc) = val;
    }
  return {std::move(f), time};
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "time,mass";
  for (int a = 0; a < traj.dim; ++a) os << ",mom_" << a + 1;
  os << ",energy,entropy,dissipation,third_moment\n";
  for (const auto& r : traj.rows) {
    os << format_g17(r.time) << "," << format_g17(r.mass);
    for (int a = 0; a < traj.dim; ++a) os << "," << format_g17(r.mom[a]);
    os << "," << format_g17(r.energy) << "," << format_g17(r.entropy) << ","
       << format_g17(r.dissipation) << "," << format_g17(r.third_moment)
       << "\n";
  }
}

void write_residuals_csv(const std::string& path,
                         const std::vector<double>& residuals) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "n,residual\n";
  for (std::size_t i = 0; i < residuals.size(); ++i)
    os << i + 1 << "," << format_g17(residuals[i]) << "\n";
}

void write_continuation_csv(const std::string& path,
                            const std::vector<ContinuationRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "eps,delta,dist_rho,dist_mom,dist_energy\n";
  for (const auto& r : rows)
    os << format_g17(r.eps) << "," << format_g17(r.delta) << ","
       << format_g17(r.dist_rho) << "," << format_g17(r.dist_mom) << ","
       << format_g17(r.dist_energy) << "\n";
}

void write_ensemble(const std::string& path, const Ensemble& ens,
                    double time) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "vfp-ensemble v1 " << ens.dim << " " << ens.size() << " "
     << format_g17(ens.period) << " " << format_g17(ens.weight) << " "
     << format_g17(time) << "\n";
  for (int p = 0; p < ens.size(); ++p) {
    for (int a = 0; a < ens.dim; ++a) os << format_g17(ens.x(p, a)) << " ";
    for (int a = 0; a < ens.dim; ++a)
      os << format_g17(ens.v(p, a)) << (a + 1 == ens.dim ? "" : " ");
    os << "\n";
  }
}

}  // namespace vfp
