#include "vfp/particles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vfp/common.hpp"

namespace vfp {

namespace rng {

namespace {
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t word(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                   std::uint64_t c) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ mix(a + 0x853c49e6748fea9bULL));
  h = mix(h ^ mix(b + 0xda3e39cb94b95bdbULL));
  h = mix(h ^ (c + 0x5851f42d4c957f2dULL));
  return h;
}

double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
               std::uint64_t c) {
  // (0, 1): never returns 0 so log() below is safe.
  return (static_cast<double>(word(seed, a, b, c) >> 11) + 0.5) * 0x1.0p-53;
}

void normal_pair(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c, double* z0, double* z1) {
  const double u1 = uniform(seed, a, b, c);
  const double u2 = uniform(seed, a, b, c + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  *z0 = r * std::cos(2.0 * M_PI * u2);
  *z1 = r * std::sin(2.0 * M_PI * u2);
}

}  // namespace rng

namespace {
constexpr std::uint64_t kInitStep = 0xffffffffffffffffULL;

double wrap_pos(double x, double period) {
  x = std::fmod(x, period);
  return x < 0.0 ? x + period : x;
}
}  // namespace

Ensemble init_ensemble(const DistField& f0eps, int n_p, std::uint64_t seed) {
  if (n_p <= 0) throw std::invalid_argument("init_ensemble: n_p must be > 0");
  const PhaseGrid& g = f0eps.grid;
  const int nxt = g.x_cells();
  const int nvt = g.v_cells();

  // CDF over phase cells, x-outer to match the storage layout.
  std::vector<double> cdf(static_cast<std::size_t>(nxt) * nvt);
  double acc = 0.0;
  for (int xc = 0; xc < nxt; ++xc)
    for (int vc = 0; vc < nvt; ++vc) {
      acc += f0eps.values(vc, xc);
      cdf[static_cast<std::size_t>(xc) * nvt + vc] = acc;
    }
  if (!(acc > 0.0)) throw std::invalid_argument("init_ensemble: zero mass");
  const double mass = acc * g.cell_vol();

  Ensemble ens;
  ens.dim = g.dim;
  ens.period = g.period;
  ens.x = ArrayXXd::Zero(n_p, g.dim);
  ens.v = ArrayXXd::Zero(n_p, g.dim);
  ens.weight = mass / n_p;
  ens.seed = seed;

  parallel_for(n_p, 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const double u = rng::uniform(seed, p, kInitStep, 0) * acc;
      const std::size_t cell =
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      const int xc = static_cast<int>(cell / nvt);
      const int vc = static_cast<int>(cell % nvt);
      for (int a = 0; a < g.dim; ++a) {
        const double jx = rng::uniform(seed, p, kInitStep, 1 + a);
        const double jv = rng::uniform(seed, p, kInitStep, 3 + a);
        ens.x(p, a) = (g.x_index(xc, a) + jx) * g.dx;
        ens.v(p, a) = -g.vmax + (g.v_index(vc, a) + jv) * g.dv;
      }
    }
  });
  return ens;
}

namespace {

/// Periodic linear interpolation of a spatial field at point x.
double interp_field(const PhaseGrid& g, const double* field, const double* x) {
  if (g.dim == 1) {
    const double p = x[0] / g.dx - 0.5;
    const double fl = std::floor(p);
    const double t = p - fl;
    int i0 = static_cast<int>(fl) % g.nx;
    if (i0 < 0) i0 += g.nx;
    const int i1 = (i0 + 1) % g.nx;
    return (1.0 - t) * field[i0] + t * field[i1];
  }
  double tt[2];
  int ii[2];
  for (int a = 0; a < 2; ++a) {
    const double p = x[a] / g.dx - 0.5;
    const double fl = std::floor(p);
    tt[a] = p - fl;
    int i = static_cast<int>(fl) % g.nx;
    if (i < 0) i += g.nx;
    ii[a] = i;
  }
  const int j0 = ii[0], j1 = (ii[0] + 1) % g.nx;
  const int k0 = ii[1], k1 = (ii[1] + 1) % g.nx;
  const double f00 = field[j0 * g.nx + k0];
  const double f01 = field[j0 * g.nx + k1];
  const double f10 = field[j1 * g.nx + k0];
  const double f11 = field[j1 * g.nx + k1];
  const double a0 = (1.0 - tt[0]), a1 = tt[0];
  const double b0 = (1.0 - tt[1]), b1 = tt[1];
  return a0 * (b0 * f00 + b1 * f01) + a1 * (b0 * f10 + b1 * f11);
}

}  // namespace

void em_step(Ensemble& ens, const PhaseGrid& grid, const RegFields& coeffs,
             double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be > 0");
  const int n = ens.size();
  std::vector<const double*> ucols(grid.dim);
  std::vector<SpatialField> ustore(grid.dim);
  for (int a = 0; a < grid.dim; ++a) {
    ustore[a] = coeffs.u_eps.col(a);
    ucols[a] = ustore[a].data();
  }
  const double* tfield = coeffs.t_eps_delta.data();
  const std::uint64_t step = ens.step;
  const std::uint64_t seed = ens.seed;

  parallel_for(n, 1024, [&](std::size_t b, std::size_t e) {
    double xp[2], z[2];
    for (std::size_t p = b; p < e; ++p) {
      for (int a = 0; a < grid.dim; ++a)
        xp[a] = wrap_pos(ens.x(p, a) + ens.v(p, a) * dt, grid.period);
      double z1;
      rng::normal_pair(seed, p, step, 0, &z[0], &z1);
      z[1] = z1;
      const double T = std::max(0.0, interp_field(grid, tfield, xp));
      const double sig = std::sqrt(2.0 * T * dt);
      for (int a = 0; a < grid.dim; ++a) {
        const double u = interp_field(grid, ucols[a], xp);
        ens.v(p, a) += (u - ens.v(p, a)) * dt + sig * z[a];
        ens.x(p, a) = xp[a];
      }
    }
  });
  ++ens.step;
}

MomentSet estimate_moments(const Ensemble& ens, const PhaseGrid& grid,
                           const MollifierKernel* kernel) {
  const int nxt = grid.x_cells();
  MomentSet m;
  m.rho = SpatialField::Zero(nxt);
  m.mom = SpatialVectorField::Zero(nxt, grid.dim);
  m.en2 = SpatialField::Zero(nxt);
  m.u = SpatialVectorField::Zero(nxt, grid.dim);
  m.T = SpatialField::Zero(nxt);

  // Fixed-size chunk partials combined in chunk order: deterministic for
  // any worker count.
  const int n = ens.size();
  const int grain = 4096;
  const int chunks = (n + grain - 1) / grain;
  std::vector<ArrayXXd> part(chunks);
  parallel_for(chunks, 1, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      ArrayXXd acc = ArrayXXd::Zero(nxt, 2 + grid.dim);
      const int lo = static_cast<int>(c) * grain;
      const int hi = std::min(n, lo + grain);
      for (int p = lo; p < hi; ++p) {
        int xc = 0;
        for (int a = 0; a < grid.dim; ++a) {
          int i = static_cast<int>(std::floor(ens.x(p, a) / grid.dx));
          i = std::clamp(i, 0, grid.nx - 1);
          xc = a == 0 ? i : xc * grid.nx + i;
        }
        double v2 = 0.0;
        acc(xc, 0) += 1.0;
        for (int a = 0; a < grid.dim; ++a) {
          acc(xc, 2 + a) += ens.v(p, a);
          v2 += sq(ens.v(p, a));
        }
        acc(xc, 1) += v2;
      }
      part[c] = std::move(acc);
    }
  });
  ArrayXXd total = ArrayXXd::Zero(nxt, 2 + grid.dim);
  for (const auto& acc : part) total += acc;

  const double scale = ens.weight / grid.cell_vol_x();
  for (int xc = 0; xc < nxt; ++xc) {
    m.rho[xc] = total(xc, 0) * scale;
    m.en2[xc] = total(xc, 1) * scale;
    for (int a = 0; a < grid.dim; ++a) m.mom(xc, a) = total(xc, 2 + a) * scale;
  }
  if (kernel) {
    m.rho = mollify(grid, *kernel, m.rho);
    m.mom = mollify(grid, *kernel, m.mom);
    m.en2 = mollify(grid, *kernel, m.en2);
  }

  const double mass = ens.weight * n;
  m.rho_floor = 1e-12 * mass / grid.spatial_volume();
  for (int xc = 0; xc < nxt; ++xc) {
    if (m.rho[xc] > m.rho_floor) {
      double u2 = 0.0;
      for (int a = 0; a < grid.dim; ++a) {
        m.u(xc, a) = m.mom(xc, a) / m.rho[xc];
        u2 += sq(m.u(xc, a));
      }
      const double t = (m.en2[xc] - m.rho[xc] * u2) / (grid.dim * m.rho[xc]);
      m.T[xc] = t > 0.0 ? t : 0.0;
    }
  }
  return m;
}

DistField phase_histogram(const Ensemble& ens, const PhaseGrid& grid) {
  DistField f = zero_field(grid);
  const double w = ens.weight / grid.cell_vol();
  for (int p = 0; p < ens.size(); ++p) {
    int xc = 0, vc = 0;
    bool inside = true;
    for (int a = 0; a < grid.dim; ++a) {
      int i = static_cast<int>(std::floor(ens.x(p, a) / grid.dx));
      i = std::clamp(i, 0, grid.nx - 1);
      xc = a == 0 ? i : xc * grid.nx + i;
      const int j =
          static_cast<int>(std::floor((ens.v(p, a) + grid.vmax) / grid.dv));
      if (j < 0 || j >= grid.nv) {
        inside = false;
        break;
      }
      vc = a == 0 ? j : vc * grid.nv + j;
    }
    if (inside) f.values(vc, xc) += w;
  }
  return f;
}

Trajectory run_particles(const SolverConfig& cfg, const DistField& f0, int n_p,
                         std::uint64_t seed, Ensemble* final_out) {
  if (!cfg.reg)
    throw std::invalid_argument("run_particles: requires reg params");
  const PhaseGrid& g = cfg.grid;
  const MollifierKernel kernel = build_mollifier(g, cfg.reg->eps);

  const DistField f0eps = regularize_initial(f0, cfg.reg->eps);
  Ensemble ens = init_ensemble(f0eps, n_p, seed);

  const double dt0 = cfg.effective_dt();
  const int nsteps =
      cfg.t_end > 0.0
          ? std::max(1, static_cast<int>(std::ceil(cfg.t_end / dt0 - 1e-9)))
          : 0;
  const double dt = nsteps > 0 ? cfg.t_end / nsteps : 0.0;

  Trajectory traj;
  traj.dim = g.dim;

  auto record = [&](double t) {
    const MomentSet m = estimate_moments(ens, g);
    const DistField hist = phase_histogram(ens, g);
    TrajectoryRow row;
    row.time = t;
    row.mass = ens.weight * ens.size();
    const double dvx = g.cell_vol_x();
    for (int a = 0; a < g.dim; ++a) {
      SpatialField ma = m.mom.col(a);
      row.mom[a] = pairwise_sum(ma.data(), ma.size()) * dvx;
    }
    row.energy = pairwise_sum(m.en2.data(), m.en2.size()) * dvx;
    row.entropy = entropy(hist);
    row.dissipation = entropy_dissipation(hist, compute_moments(hist));
    row.third_moment = third_moment(hist);
    row.max_f = hist.values.maxCoeff();
    row.min_f = hist.values.minCoeff();
    row.int_f2 = hist.values.square().sum() * g.cell_vol();
    row.int_f4 = hist.values.square().square().sum() * g.cell_vol();
    traj.rows.push_back(row);
  };

  record(0.0);
  traj.snapshots.emplace_back(0.0, phase_histogram(ens, g));
  for (int k = 1; k <= nsteps; ++k) {
    const MomentSet m = estimate_moments(ens, g);
    const RegFields r = build_reg_fields(m, g, kernel, *cfg.reg);
    em_step(ens, g, r, dt);
    if (k % std::max(1, cfg.record_every) == 0 || k == nsteps)
      record(k * dt);
  }
  if (nsteps > 0)
    traj.snapshots.emplace_back(cfg.t_end, phase_histogram(ens, g));
  if (final_out) *final_out = ens;
  return traj;
}

}  // namespace vfp
