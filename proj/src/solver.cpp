#include "vfp/solver.hpp"

#include <cmath>
#include <vector>

#include "vfp/common.hpp"

namespace vfp {

namespace {

int step_count(double t_end, double dt) {
  if (t_end <= 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
}

CoefficientSet make_coefficients(const MomentSet& m, const PhaseGrid& grid,
                                 const std::optional<RegParams>& reg,
                                 const MollifierKernel* kernel,
                                 RegFields* reg_out) {
  if (reg) {
    RegFields r = build_reg_fields(m, grid, *kernel, *reg);
    CoefficientSet c{r.u_eps, r.t_eps_delta, CoeffSource::regularized};
    if (reg_out) *reg_out = std::move(r);
    return c;
  }
  return CoefficientSet{m.u, m.T, CoeffSource::raw};
}

DistField strang_step(const DistField& state, const SolverConfig& cfg,
                      double dt, const MollifierKernel* kernel) {
  DistField f = transport_step(state, 0.5 * dt);
  const MomentSet m = compute_moments(f);
  const CoefficientSet c =
      make_coefficients(m, cfg.grid, cfg.reg, kernel, nullptr);
  f = collision_step(f, c, dt);
  return transport_step(f, 0.5 * dt);
}

bool bounds_ok(const RegFields& r, const RegParams& p, const DistField& f) {
  const double tol = 1e-12;
  if ((r.u_eps.abs() * p.eps > 1.0 + tol).any()) return false;
  if ((r.t_eps_delta < -tol).any()) return false;
  if ((r.t_eps_delta * p.delta > 1.0 + tol).any()) return false;
  if ((r.phi < -tol).any()) return false;
  if ((f.values <= 0.0).any()) return false;
  return true;
}

TrajectoryRow make_row(double t, const DistField& f, const SolverConfig& cfg,
                       const MollifierKernel* kernel) {
  const PhaseGrid& g = f.grid;
  const MomentSet m = compute_moments(f);
  TrajectoryRow row;
  row.time = t;
  const double dvx = g.cell_vol_x();
  row.mass = pairwise_sum(m.rho.data(), m.rho.size()) * dvx;
  for (int a = 0; a < g.dim; ++a) {
    SpatialField ma = m.mom.col(a);
    row.mom[a] = pairwise_sum(ma.data(), ma.size()) * dvx;
  }
  row.energy = pairwise_sum(m.en2.data(), m.en2.size()) * dvx;
  row.entropy = entropy(f);
  row.dissipation = entropy_dissipation(f, m);
  row.third_moment = third_moment(f);
  row.max_f = f.values.maxCoeff();
  row.min_f = f.values.minCoeff();
  row.int_f2 = (f.values.square()).sum() * g.cell_vol();
  row.int_f4 = (f.values.square().square()).sum() * g.cell_vol();
  if (cfg.reg) {
    const RegFields r = build_reg_fields(m, g, *kernel, *cfg.reg);
    row.bounds_ok = bounds_ok(r, *cfg.reg, f);
  }
  return row;
}

void check_state(const DistField& f, double t) {
  if (!f.values.allFinite())
    throw SolverAbort("solver: non-finite state", t, f);
  if ((f.values < 0.0).any())
    throw SolverAbort("solver: negative state", t, f);
}

}  // namespace

DistField step_nonlinear(const DistField& state, const SolverConfig& cfg) {
  MollifierKernel kernel;
  if (cfg.reg) kernel = build_mollifier(cfg.grid, cfg.reg->eps);
  return strang_step(state, cfg, cfg.effective_dt(), cfg.reg ? &kernel : nullptr);
}

Trajectory run(const SolverConfig& cfg, const DistField& f0) {
  if (!f0.grid.same_as(cfg.grid))
    throw std::invalid_argument("run: initial data grid mismatch");
  MollifierKernel kernel;
  if (cfg.reg) kernel = build_mollifier(cfg.grid, cfg.reg->eps);
  const MollifierKernel* kp = cfg.reg ? &kernel : nullptr;

  DistField f = cfg.reg ? regularize_initial(f0, cfg.reg->eps) : f0;
  check_state(f, 0.0);

  const int nsteps = step_count(cfg.t_end, cfg.effective_dt());
  const double dt = nsteps > 0 ? cfg.t_end / nsteps : 0.0;

  Trajectory traj;
  traj.dim = cfg.grid.dim;
  traj.rows.push_back(make_row(0.0, f, cfg, kp));
  traj.snapshots.emplace_back(0.0, f);

  int rows_since_snapshot = 0;
  for (int k = 1; k <= nsteps; ++k) {
    f = strang_step(f, cfg, dt, kp);
    const double t = k * dt;
    const bool last = k == nsteps;
    if (k % std::max(1, cfg.record_every) == 0 || last) {
      check_state(f, t);
      traj.rows.push_back(make_row(t, f, cfg, kp));
      ++rows_since_snapshot;
      const bool want_snapshot =
          last || (cfg.snapshot_every > 0 &&
                   rows_since_snapshot >= cfg.snapshot_every);
      if (want_snapshot) {
        traj.snapshots.emplace_back(t, f);
        rows_since_snapshot = 0;
      }
    }
  }
  return traj;
}

PicardResult picard_solve(const DistField& f0eps, const SolverConfig& cfg) {
  if (!cfg.reg) throw std::invalid_argument("picard_solve: requires reg params");
  if (!f0eps.grid.same_as(cfg.grid))
    throw std::invalid_argument("picard_solve: grid mismatch");
  if ((f0eps.values <= 0.0).any())
    throw std::invalid_argument("picard_solve: initial data must be strictly positive");

  const PhaseGrid& g = cfg.grid;
  const MollifierKernel kernel = build_mollifier(g, cfg.reg->eps);
  const int nsteps = step_count(cfg.t_end, cfg.effective_dt());

  PicardResult res;
  res.state = f0eps;
  if (nsteps == 0) {
    res.history.emplace_back(0.0, f0eps);
    return res;
  }
  const double dt = cfg.t_end / nsteps;

  // Coefficient fields per step, built from the previous iterate's
  // post-half-transport states so the direct nonlinear scheme is the exact
  // fixed point. Iterate 0 is f0eps frozen in time.
  struct StepCoeffs {
    SpatialVectorField u;
    SpatialField T;
  };
  std::vector<StepCoeffs> prev_coeffs(nsteps);
  {
    const MomentSet m0 = compute_moments(f0eps);
    const RegFields r0 = build_reg_fields(m0, g, kernel, *cfg.reg);
    for (int k = 0; k < nsteps; ++k)
      prev_coeffs[k] = StepCoeffs{r0.u_eps, r0.t_eps_delta};
  }
  std::vector<ArrayXXd> prev_hist(nsteps + 1, f0eps.values);

  int worse_streak = 0;
  for (int it = 0; it < cfg.picard.n_max; ++it) {
    std::vector<StepCoeffs> new_coeffs(nsteps);
    std::vector<ArrayXXd> new_hist(nsteps + 1);
    new_hist[0] = f0eps.values;

    DistField f = f0eps;
    double resid = 0.0;
    for (int k = 0; k < nsteps; ++k) {
      DistField half = transport_step(f, 0.5 * dt);
      const MomentSet m = compute_moments(half);
      const RegFields r = build_reg_fields(m, g, kernel, *cfg.reg);
      new_coeffs[k] = StepCoeffs{r.u_eps, r.t_eps_delta};

      CoefficientSet c{prev_coeffs[k].u, prev_coeffs[k].T,
                       CoeffSource::regularized};
      half = collision_step(half, c, dt);
      f = transport_step(half, 0.5 * dt);
      new_hist[k + 1] = f.values;
      resid = std::max(
          resid, weighted_norm_diff(g, new_hist[k + 1] - prev_hist[k + 1], 2.0,
                                    cfg.picard.q));
    }
    res.residuals.push_back(resid);
    res.state = f;

    if (it > 0 && resid >= res.residuals[it - 1])
      ++worse_streak;
    else
      worse_streak = 0;
    if (worse_streak >= 3) {
      std::string msg = "Picard divergence; residuals:";
      for (double r : res.residuals) msg += " " + std::to_string(r);
      throw std::runtime_error(msg);
    }

    prev_coeffs = std::move(new_coeffs);
    prev_hist = std::move(new_hist);
    if (resid < cfg.picard.tol) break;
  }

  res.history.reserve(nsteps + 1);
  for (int k = 0; k <= nsteps; ++k)
    res.history.emplace_back(k * dt, DistField{g, prev_hist[k]});
  return res;
}

namespace {

MomentSet final_moments(const SolverConfig& cfg, const DistField& f0) {
  Trajectory t = run(cfg, f0);
  return compute_moments(t.snapshots.back().second);
}

void l1_distances(const PhaseGrid& g, const MomentSet& a, const MomentSet& b,
                  ContinuationRow* row) {
  const double dvx = g.cell_vol_x();
  row->dist_rho = (a.rho - b.rho).abs().sum() * dvx;
  row->dist_mom = (a.mom - b.mom).abs().sum() * dvx;
  row->dist_energy = (a.en2 - b.en2).abs().sum() * dvx;
}

}  // namespace

std::vector<ContinuationRow> continuation_study(
    const SolverConfig& cfg, const std::vector<double>& eps_list,
    const std::vector<double>& delta_list, const DistField& f0) {
  if (eps_list.empty() || delta_list.empty())
    throw std::invalid_argument("continuation_study: empty parameter list");
  std::vector<ContinuationRow> table;

  // eps sweep at fixed delta: successive distances.
  const double delta0 = delta_list.front();
  MomentSet prev;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    SolverConfig c = cfg;
    c.reg = RegParams{eps_list[i], delta0};
    MomentSet m = final_moments(c, f0);
    if (i > 0) {
      ContinuationRow row;
      row.kind = ContinuationRow::Kind::eps_step;
      row.eps = eps_list[i];
      row.delta = delta0;
      l1_distances(cfg.grid, m, prev, &row);
      table.push_back(row);
    }
    prev = std::move(m);
  }

  // delta sweep at fixed eps: successive distances plus the distance to
  // the raw-coefficient reference run.
  const double eps0 = eps_list.back();
  SolverConfig raw_cfg = cfg;
  raw_cfg.reg.reset();
  const MomentSet ref = final_moments(raw_cfg, regularize_initial(f0, eps0));
  std::vector<MomentSet> delta_runs;
  for (double d : delta_list) {
    SolverConfig c = cfg;
    c.reg = RegParams{eps0, d};
    delta_runs.push_back(final_moments(c, f0));
  }
  for (std::size_t i = 1; i < delta_list.size(); ++i) {
    ContinuationRow row;
    row.kind = ContinuationRow::Kind::delta_step;
    row.eps = eps0;
    row.delta = delta_list[i];
    l1_distances(cfg.grid, delta_runs[i], delta_runs[i - 1], &row);
    table.push_back(row);
  }
  for (std::size_t i = 0; i < delta_list.size(); ++i) {
    ContinuationRow row;
    row.kind = ContinuationRow::Kind::delta_vs_raw;
    row.eps = eps0;
    row.delta = delta_list[i];
    l1_distances(cfg.grid, delta_runs[i], ref, &row);
    table.push_back(row);
  }
  return table;
}

}  // namespace vfp
