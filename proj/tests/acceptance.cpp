// Acceptance suite: exercises the solver end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
// argv[1] must point at the vfp CLI binary (used by the determinism
// criterion).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vfp/common.hpp"
#include "vfp/diagnostics.hpp"
#include "vfp/grid.hpp"
#include "vfp/io.hpp"
#include "vfp/moments.hpp"
#include "vfp/particles.hpp"
#include "vfp/solver.hpp"

using namespace vfp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok,
            const std::string& detail) {
  std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double maxw(double rho, double u, double T, double v) {
  return rho / std::sqrt(2.0 * M_PI * T) * std::exp(-sq(v - u) / (2.0 * T));
}

DistField maxwellian_field(const PhaseGrid& g, double rho, double u,
                           double T) {
  return sample_function(
      g, [=](Coord, Coord v) { return maxw(rho, u, T, v[0]); });
}

DistField bimodal_field(const PhaseGrid& g) {
  return sample_function(g, [](Coord, Coord v) {
    return 0.5 * maxw(1, 0, 0.5, v[0]) + 0.5 * maxw(1, 0, 2.0, v[0]);
  });
}

DistField sin_perturbed_field(const PhaseGrid& g, double amp, double u,
                              double T, int mode = 1) {
  return sample_function(g, [=](Coord x, Coord v) {
    return (1.0 + amp * std::sin(2.0 * M_PI * mode * x[0] / g.period)) *
           maxw(1, u, T, v[0]);
  });
}

double l1_diff(const DistField& a, const DistField& b) {
  return (a.values - b.values).abs().sum() * a.grid.cell_vol();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// ------------------------------------------------------------------
// criterion 4 oracle: slowest surviving Hermite mode of the linearized
// drift-diffusion operator; mode k decays at rate k (unit collision
// frequency).
int slowest_hermite_mode(const DistField& f0, const PhaseGrid& g) {
  const MomentSet m = compute_moments(f0);
  const DistField M = local_maxwellian(m, g);
  const double u = m.u(0, 0), T = m.T[0], rho = m.rho[0];
  const int kmax = 8;
  double scale = 0.0;
  std::vector<double> coef(kmax + 1, 0.0);
  for (int vc = 0; vc < g.v_cells(); ++vc) {
    const double xi = (g.v_node(vc) - u) / std::sqrt(T);
    const double diff = (f0.values(vc, 0) - M.values(vc, 0)) * g.dv;
    scale += std::abs(diff);
    double hkm1 = 0.0, hk = 1.0;  // He_0 = 1
    for (int k = 0; k <= kmax; ++k) {
      coef[k] += diff * hk;
      const double hkp1 = xi * hk - k * hkm1;
      hkm1 = hk;
      hk = hkp1;
    }
  }
  double fact = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    fact *= k;
    if (std::abs(coef[k]) / (rho * std::sqrt(fact)) > 1e-4 * scale)
      return k;
  }
  return kmax;
}

// least-squares slope of log(d) against t on [t_lo, t_hi]
double fit_log_slope(const std::vector<std::pair<double, double>>& series,
                     double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [t, d] : series) {
    if (t < t_lo || t > t_hi || !(d > 0.0)) continue;
    const double y = std::log(d);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ------------------------------------------------------------------

void criterion_1() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
  const DistField M = maxwellian_field(cfg.grid, 1.0, 0.0, 1.0);
  DistField f = M;
  for (int k = 0; k < 1000; ++k) f = step_nonlinear(f, cfg);
  const double d = l1_diff(f, M);
  report(1, "equilibrium fixed point: 1000 raw steps, L1 change < 1e-10",
         d < 1e-10, fmt(d));
}

struct Drifts {
  double mass = 0, mom = 0, energy = 0;
};

Drifts run_drifts(int nv, double dt, Trajectory* out = nullptr) {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, nv, 8.0, 1.0);
  cfg.t_end = 1.0;
  cfg.dt = dt;
  cfg.record_every = 1;
  Trajectory traj = run(cfg, sin_perturbed_field(cfg.grid, 0.1, 0.5, 1.0));
  const TrajectoryRow& r0 = traj.rows.front();
  Drifts d;
  for (const auto& r : traj.rows) {
    d.mass = std::max(d.mass, std::abs(r.mass - r0.mass) / r0.mass);
    d.mom = std::max(d.mom, std::abs(r.mom[0] - r0.mom[0]) / std::abs(r0.mom[0]));
    d.energy = std::max(d.energy, std::abs(r.energy - r0.energy) / r0.energy);
  }
  if (out) *out = std::move(traj);
  return d;
}

Trajectory g_crit2_traj;  // reused by criterion 3's corpus

void criterion_2() {
  Drifts coarse = run_drifts(128, 1e-3, &g_crit2_traj);
  Drifts fine = run_drifts(256, 5e-4);
  const bool ok_levels =
      coarse.mass < 1e-12 && coarse.mom < 1e-3 && coarse.energy < 1e-3;
  // refinement: >= 3.5x shrink, or already at the rounding floor
  auto refines = [](double c, double f) {
    return f * 3.5 <= c || f <= 1e-12;
  };
  const bool ok_ref =
      refines(coarse.mom, fine.mom) && refines(coarse.energy, fine.energy);
  report(2, "conservation: drifts in bounds and refine >= 3.5x",
         ok_levels && ok_ref,
         "mass " + fmt(coarse.mass) + ", mom " + fmt(coarse.mom) + "->" +
             fmt(fine.mom) + ", energy " + fmt(coarse.energy) + "->" +
             fmt(fine.energy));
}

Trajectory g_rate_traj;  // homogeneous bimodal, reused below

void criterion_3() {
  // five-run raw corpus; entropy monotone at every recorded step
  std::vector<Trajectory> corpus;
  {
    SolverConfig cfg;  // equilibrium
    cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
    cfg.t_end = 0.5;
    cfg.dt = 1e-3;
    cfg.record_every = 1;
    corpus.push_back(run(cfg, maxwellian_field(cfg.grid, 1, 0, 1)));
  }
  {
    SolverConfig cfg;  // homogeneous bimodal, fine velocity grid
    cfg.grid = build_grid(1, 4, 512, 8.0, 1.0);
    cfg.t_end = 1.05;
    cfg.dt = 1e-3;
    cfg.record_every = 10;
    cfg.snapshot_every = 0;
    g_rate_traj = run(cfg, bimodal_field(cfg.grid));
    corpus.push_back(g_rate_traj);
  }
  corpus.push_back(g_crit2_traj);  // sin-perturbed, u = 0.5
  {
    SolverConfig cfg;  // homogeneous bimodal at desk resolution
    cfg.grid = build_grid(1, 4, 128, 8.0, 1.0);
    cfg.t_end = 2.0;
    cfg.dt = 1e-3;
    cfg.record_every = 1;
    corpus.push_back(run(cfg, bimodal_field(cfg.grid)));
  }
  {
    SolverConfig cfg;  // stronger, colder perturbation with drift
    cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
    cfg.t_end = 1.0;
    cfg.dt = 1e-3;
    cfg.record_every = 1;
    corpus.push_back(run(cfg, sin_perturbed_field(cfg.grid, 0.3, -0.3, 0.8, 2)));
  }
  double worst_rise = -1e300;
  for (const auto& traj : corpus)
    for (std::size_t k = 1; k < traj.rows.size(); ++k)
      worst_rise =
          std::max(worst_rise, traj.rows[k].entropy - traj.rows[k - 1].entropy);

  const AuditReport rate = h_theorem_check(g_rate_traj);
  double rate_err = 0.0;
  for (const auto& c : rate.checks)
    if (c.name == "dissipation_rate_match") rate_err = c.value;
  const bool ok =
      worst_rise <= 1e-8 && rate.overall() == CheckStatus::pass;
  report(3, "H-theorem: monotone entropy on 5-run corpus, rate match 10%",
         ok,
         "worst step rise " + fmt(worst_rise) + ", rate err " + fmt(rate_err));
}

void criterion_4() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 4, 128, 8.0, 1.0);
  cfg.t_end = 5.0;
  cfg.dt = 1e-3;
  cfg.record_every = 50;
  cfg.snapshot_every = 1;
  const DistField f0 = bimodal_field(cfg.grid);
  const MomentSet m0 = compute_moments(f0);
  const DistField M0 = local_maxwellian(m0, cfg.grid);
  const Trajectory traj = run(cfg, f0);

  const TrajectoryRow& r0 = traj.rows.front();
  double drift = 0.0;
  for (const auto& r : traj.rows) {
    drift = std::max(drift, std::abs(r.mass - r0.mass));
    drift = std::max(drift, std::abs(r.mom[0] - r0.mom[0]));
    drift = std::max(drift, std::abs(r.energy - r0.energy) / r0.energy);
  }

  std::vector<std::pair<double, double>> decay;
  bool monotone = true;
  double prev = 1e300;
  for (const auto& [t, f] : traj.snapshots) {
    const double d = l1_diff(f, M0);
    decay.emplace_back(t, d);
    if (t > 0.05 && d > prev * (1.0 + 1e-9)) monotone = false;
    prev = d;
  }
  const double final_dist = decay.back().second;

  const int mode = slowest_hermite_mode(f0, cfg.grid);
  const double oracle_rate = mode;  // unit collision frequency
  const double fitted = -fit_log_slope(decay, 0.5, 2.5);
  const bool rate_ok = std::abs(fitted - oracle_rate) <= 0.2 * oracle_rate;

  const bool ok = drift < 1e-6 && monotone && final_dist < 1e-4 && rate_ok;
  report(4, "relaxation: conserved moments, monotone decay, rate oracle", ok,
         "drift " + fmt(drift) + ", final " + fmt(final_dist) + ", rate " +
             fmt(fitted) + " vs mode " + std::to_string(mode));
}

Trajectory g_reg_traj;  // regularized sin-perturbed run, reused

void criterion_5() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
  cfg.reg = RegParams{0.1, 0.1};
  cfg.t_end = 5.0;
  cfg.dt = 2e-3;
  cfg.record_every = 10;
  cfg.snapshot_every = 25;
  g_reg_traj = run(cfg, sin_perturbed_field(cfg.grid, 0.2, 0.25, 1.0));

  bool rows_ok = true;
  for (const auto& r : g_reg_traj.rows) rows_ok = rows_ok && r.bounds_ok;

  // explicit audit on the final state
  const DistField& last = g_reg_traj.snapshots.back().second;
  const MollifierKernel kernel = build_mollifier(cfg.grid, cfg.reg->eps);
  const RegFields rf =
      build_reg_fields(compute_moments(last), cfg.grid, kernel, *cfg.reg);
  const AuditReport rep = bounds_check(last, rf, *cfg.reg);
  // also across a second (eps, delta) pair
  SolverConfig cfg2 = cfg;
  cfg2.reg = RegParams{0.05, 0.2};
  cfg2.t_end = 1.0;
  const Trajectory t2 = run(cfg2, bimodal_field(cfg.grid));
  bool rows2_ok = true;
  for (const auto& r : t2.rows) rows2_ok = rows2_ok && r.bounds_ok;

  const bool ok =
      rows_ok && rows2_ok && rep.overall() == CheckStatus::pass;
  report(5, "regularization bounds: u_eps, T_eps_delta, phi algebraic passes",
         ok, rep.overall() == CheckStatus::pass ? "audit pass" : "audit fail");
}

void criterion_6() {
  const AuditReport p2 = lp_growth_check(g_reg_traj, 2.0);
  const AuditReport pinf =
      lp_growth_check(g_reg_traj, std::numeric_limits<double>::infinity());
  const AuditReport third = third_moment_envelope_check(g_reg_traj);
  const bool ok = p2.overall() == CheckStatus::pass &&
                  pinf.overall() == CheckStatus::pass &&
                  third.overall() == CheckStatus::pass;
  report(6, "Lp growth (p=2, max) within 1%, third moment under envelope", ok,
         "p2 ratio " + fmt(p2.checks[0].value) + ", max ratio " +
             fmt(pinf.checks[0].value));
}

void criterion_7() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
  cfg.reg = RegParams{0.1, 0.1};
  cfg.t_end = 0.25;
  cfg.picard.n_max = 12;
  cfg.picard.tol = 1e-8;
  cfg.picard.q = 6.0;
  const DistField f0 = sin_perturbed_field(cfg.grid, 0.2, 0.0, 1.0);
  const DistField f0eps = regularize_initial(f0, cfg.reg->eps);
  const PicardResult res = picard_solve(f0eps, cfg);

  bool decreasing = !res.residuals.empty();
  for (std::size_t n = 1; n < res.residuals.size(); ++n)
    decreasing = decreasing && res.residuals[n] < res.residuals[n - 1];
  bool superlinear = true;
  for (std::size_t n = 2; n < res.residuals.size(); ++n) {
    const double r1 = res.residuals[n - 1] / res.residuals[n - 2];
    const double r2 = res.residuals[n] / res.residuals[n - 1];
    superlinear = superlinear && r2 < r1;
  }
  const bool converged = res.residuals.size() <= 12 &&
                         res.residuals.back() < 1e-8;

  // cross-validate against the direct nonlinear run on the same time grid
  const int nsteps = static_cast<int>(res.history.size()) - 1;
  SolverConfig dcfg = cfg;
  dcfg.dt = cfg.t_end / nsteps;
  DistField f = f0eps;
  double sup_dist = 0.0;
  for (int k = 0; k < nsteps; ++k) {
    f = step_nonlinear(f, dcfg);
    sup_dist = std::max(sup_dist, l1_diff(f, res.history[k + 1].second));
  }
  const bool ok = decreasing && superlinear && converged &&
                  sup_dist < 5.0 * cfg.picard.tol;
  report(7, "Picard: superlinear residual decay, fixed point matches run", ok,
         std::to_string(res.residuals.size()) + " iters, r_last " +
             fmt(res.residuals.empty() ? 1.0 : res.residuals.back()) +
             ", sup dist " + fmt(sup_dist));
}

void criterion_8() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
  cfg.reg = RegParams{0.1, 0.1};
  const DistField f0 = sin_perturbed_field(cfg.grid, 0.2, 0.0, 1.0);

  SolverConfig coarse = cfg;
  coarse.grid = build_grid(1, 32, 64, 8.0, 1.0);
  const DistField f0c = sin_perturbed_field(coarse.grid, 0.2, 0.0, 1.0);

  int bad = 0, total = 0;
  double worst_pull = 0.0;
  for (double t_end : {0.5, 1.0}) {
    cfg.t_end = t_end;
    coarse.t_end = t_end;
    const MomentSet gm =
        compute_moments(run(cfg, f0).snapshots.back().second);
    const MomentSet cm =
        compute_moments(run(coarse, f0c).snapshots.back().second);
    Ensemble ens;
    run_particles(cfg, f0, 100000, 12345, &ens);
    const MomentSet pm = estimate_moments(ens, cfg.grid);
    const double cv = cfg.grid.cell_vol_x();
    const double w = ens.weight;
    for (int xc = 0; xc < cfg.grid.x_cells(); ++xc) {
      auto pull = [&](double gv, double pv, double se, double trunc) {
        const double bar = std::sqrt(se * se + trunc * trunc) + 1e-12;
        ++total;
        const double p = std::abs(gv - pv) / bar;
        worst_pull = std::max(worst_pull, p);
        if (p > 3.0) ++bad;
      };
      const double se_rho = std::sqrt(std::max(0.0, w * pm.rho[xc] / cv));
      const double se_mom = std::sqrt(std::max(0.0, w * pm.en2[xc] / cv));
      const double se_en2 = std::sqrt(std::max(
          0.0,
          3.0 * w * sq(pm.en2[xc]) / (std::max(pm.rho[xc], 1e-12) * cv)));
      pull(gm.rho[xc], pm.rho[xc], se_rho, std::abs(gm.rho[xc] - cm.rho[xc]));
      pull(gm.mom(xc, 0), pm.mom(xc, 0), se_mom,
           std::abs(gm.mom(xc, 0) - cm.mom(xc, 0)));
      pull(gm.en2[xc], pm.en2[xc], se_en2,
           std::abs(gm.en2[xc] - cm.en2[xc]));
    }
  }

  // OU sub-test with frozen coefficients
  const PhaseGrid g = cfg.grid;
  const int n = 100000;
  Ensemble e;
  e.dim = 1;
  e.period = 1.0;
  e.x = ArrayXXd::Constant(n, 1, 0.5);
  e.v = ArrayXXd::Constant(n, 1, 2.0);
  e.weight = 1.0 / n;
  e.seed = 2024;
  RegFields frozen;
  frozen.u_eps = SpatialVectorField::Zero(g.x_cells(), 1);
  frozen.t_eps_delta = SpatialField::Constant(g.x_cells(), 1.0);
  frozen.phi = frozen.t_eps_delta;
  frozen.rho_moll = SpatialField::Constant(g.x_cells(), 1.0);
  frozen.mom_moll = frozen.u_eps;
  frozen.en2_moll = frozen.t_eps_delta;
  const double dt = 0.002, t_end = 2.0;
  for (int k = 0; k < static_cast<int>(t_end / dt + 0.5); ++k)
    em_step(e, g, frozen, dt);
  const double mean = e.v.col(0).mean();
  const double var = (e.v.col(0) - mean).square().mean();
  const double se_mean = 1.0 / std::sqrt(double(n));
  const double se_var = std::sqrt(2.0 / double(n));
  const bool ou_ok =
      std::abs(mean - 2.0 * std::exp(-t_end)) < 3.0 * se_mean &&
      std::abs(var - (1.0 - std::exp(-2 * t_end))) < 3.0 * se_var;

  const bool ok = bad == 0 && ou_ok;
  report(8, "particle oracle: moments within 3 bars, OU closed form", ok,
         std::to_string(bad) + "/" + std::to_string(total) +
             " cells out, worst pull " + fmt(worst_pull) +
             (ou_ok ? ", OU ok" : ", OU mismatch"));
}

void criterion_9() {
  SolverConfig cfg;
  cfg.grid = build_grid(1, 32, 128, 8.0, 1.0);
  cfg.t_end = 1.0;
  const DistField f0 = sin_perturbed_field(cfg.grid, 0.2, 0.25, 1.0);
  const auto table =
      continuation_study(cfg, {0.2, 0.1, 0.05}, {0.2, 0.1, 0.05}, f0);

  std::vector<const ContinuationRow*> eps_rows, dstep_rows, draw_rows;
  for (const auto& r : table) {
    if (r.kind == ContinuationRow::Kind::eps_step) eps_rows.push_back(&r);
    if (r.kind == ContinuationRow::Kind::delta_step) dstep_rows.push_back(&r);
    if (r.kind == ContinuationRow::Kind::delta_vs_raw) draw_rows.push_back(&r);
  }
  bool ok = true;
  std::string why;
  // eps halvings: successive distances strictly shrink in every field
  for (std::size_t i = 1; i < eps_rows.size(); ++i) {
    if (!(eps_rows[i]->dist_rho < eps_rows[i - 1]->dist_rho &&
          eps_rows[i]->dist_mom < eps_rows[i - 1]->dist_mom &&
          eps_rows[i]->dist_energy < eps_rows[i - 1]->dist_energy)) {
      ok = false;
      why += "eps sweep not monotone; ";
    }
  }
  // delta halvings: shrink, or rest at the discretization floor for
  // delta-insensitive observables (rho and momentum barely feel delta)
  auto shrinks_or_floor = [](double prev, double cur, double floor) {
    return cur < prev || std::max(cur, prev) < floor;
  };
  for (std::size_t i = 1; i < dstep_rows.size(); ++i) {
    if (!(shrinks_or_floor(dstep_rows[i - 1]->dist_rho,
                           dstep_rows[i]->dist_rho, 1e-3) &&
          shrinks_or_floor(dstep_rows[i - 1]->dist_mom,
                           dstep_rows[i]->dist_mom, 1e-3) &&
          dstep_rows[i]->dist_energy < dstep_rows[i - 1]->dist_energy)) {
      ok = false;
      why += "delta sweep not monotone; ";
    }
  }
  // distance to the raw-coefficient reference decreases across the delta
  // list for rho and energy; momentum sits at its O(eps) bias plateau
  for (std::size_t i = 1; i < draw_rows.size(); ++i) {
    if (!(draw_rows[i]->dist_rho < draw_rows[i - 1]->dist_rho &&
          draw_rows[i]->dist_energy < draw_rows[i - 1]->dist_energy &&
          draw_rows[i]->dist_mom <
              draw_rows[i - 1]->dist_mom * 1.01)) {
      ok = false;
      why += "raw-reference distances not shrinking; ";
    }
  }
  report(9, "continuation: eps then delta halvings converge", ok,
         why.empty() ? "eps rho " + fmt(eps_rows[0]->dist_rho) + "->" +
                           fmt(eps_rows.back()->dist_rho) + ", ref energy " +
                           fmt(draw_rows[0]->dist_energy) + "->" +
                           fmt(draw_rows.back()->dist_energy)
                     : why);
}

// ------------------------------------------------------------------
// criterion 10: CLI determinism across VFP_THREADS and echo round trips

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& bin, const std::string& args, int threads,
            const fs::path& log) {
  std::ostringstream cmd;
  cmd << "VFP_THREADS=" << threads << " " << bin << " " << args << " > "
      << log << " 2>&1";
  const int rc = std::system(cmd.str().c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool same_outputs(const fs::path& a, const fs::path& b,
                  const std::vector<std::string>& names, std::string* why) {
  for (const auto& n : names) {
    if (!fs::exists(a / n) || !fs::exists(b / n)) {
      *why = "missing " + n;
      return false;
    }
    if (slurp(a / n) != slurp(b / n)) {
      *why = n + " differs";
      return false;
    }
  }
  return true;
}

void criterion_10(const std::string& bin) {
  const fs::path root =
      fs::temp_directory_path() / ("vfp_acceptance_" +
                                   std::to_string(std::random_device{}()));
  fs::create_directories(root);

  const std::string base_grid =
      R"("grid":{"dim":1,"nx":16,"nv":32,"vmax":6},)";
  const std::string reg = R"("reg":{"eps":0.2,"delta":0.1},)";
  auto write_cfg = [&](const std::string& name, const std::string& body) {
    std::ofstream os(root / name);
    os << "{" << body << "}";
    return (root / name).string();
  };

  struct Cmd {
    std::string name;
    std::string config;
    std::vector<std::string> outputs;
  };
  std::vector<Cmd> cmds = {
      {"run",
       write_cfg("run.json",
                 base_grid + reg +
                     R"("t_end":0.05,"record_every":2,"snapshot_every":2,
                        "initial":{"preset":"bimodal"},"seed":4242)"),
       {"trajectory.csv", "audit.csv", "config.json", "snapshot_000.txt"}},
      {"picard",
       write_cfg("picard.json",
                 base_grid + reg +
                     R"("t_end":0.05,"initial":{"preset":"bimodal"})"),
       {"residuals.csv", "picard_final.txt", "config.json"}},
      {"particles",
       write_cfg("particles.json",
                 base_grid + reg +
                     R"("t_end":0.05,"particles":{"n_p":4000},
                        "initial":{"preset":"maxwellian"},"seed":7)"),
       {"trajectory.csv", "ensemble.txt", "config.json"}},
      {"sweep",
       write_cfg("sweep.json",
                 base_grid +
                     R"("t_end":0.05,
                        "sweep":{"eps_list":[0.2,0.1],"delta_list":[0.2,0.1]},
                        "initial":{"preset":"sin-perturbed-maxwellian"})"),
       {"continuation.csv", "config.json"}},
      {"compare",
       write_cfg("compare.json",
                 base_grid + reg +
                     R"("t_end":0.05,"particles":{"n_p":4000},
                        "initial":{"preset":"maxwellian"},"seed":9)"),
       {"compare.csv", "config.json"}},
      {"check",
       write_cfg("check.json",
                 base_grid + reg +
                     R"("t_end":0.05,"initial":{"preset":"bimodal"})"),
       {"audit.csv"}},
  };

  bool ok = true;
  std::string why;
  for (const auto& c : cmds) {
    const fs::path outA = root / (c.name + "_A");
    const fs::path outB = root / (c.name + "_B");
    const int rcA = run_cli(bin,
                            c.name + " --config " + c.config + " --out " +
                                outA.string(),
                            1, root / (c.name + "_A.log"));
    if (rcA != 0 && rcA != 2) {
      ok = false;
      why += c.name + " exit " + std::to_string(rcA) + "; ";
      continue;
    }
    // rerun from the echoed config with a different worker count
    const std::string cfgB = fs::exists(outA / "config.json")
                                 ? (outA / "config.json").string()
                                 : c.config;
    const int rcB = run_cli(bin,
                            c.name + " --config " + cfgB + " --out " +
                                outB.string(),
                            3, root / (c.name + "_B.log"));
    if (rcB != rcA) {
      ok = false;
      why += c.name + " exit mismatch; ";
      continue;
    }
    std::string diff;
    if (!same_outputs(outA, outB, c.outputs, &diff)) {
      ok = false;
      why += c.name + ": " + diff + "; ";
    }
  }

  // plot is deterministic given the same CSV inputs
  {
    const fs::path outA = root / "run_A";
    const int rc1 = run_cli(bin, "plot --out " + outA.string(), 1,
                            root / "plot1.log");
    const std::string first = slurp(outA / "entropy.svg");
    const int rc2 = run_cli(bin, "plot --out " + outA.string(), 3,
                            root / "plot2.log");
    if (rc1 != 0 || rc2 != 0 || first.empty() ||
        first != slurp(outA / "entropy.svg")) {
      ok = false;
      why += "plot differs; ";
    }
  }

  // exit-code contract: raw equilibrium run passes clean
  {
    const std::string cfg = write_cfg(
        "equilibrium.json",
        base_grid +
            R"("t_end":0.05,"record_every":2,"initial":{"preset":"maxwellian"})");
    const int rc = run_cli(bin,
                           "run --config " + cfg + " --out " +
                               (root / "eq_out").string(),
                           1, root / "eq.log");
    if (rc != 0 || !fs::exists(root / "eq_out" / "trajectory.csv")) {
      ok = false;
      why += "equilibrium run exit " + std::to_string(rc) + "; ";
    }
  }

  // exit-code contract: corrupted snapshot must be rejected
  {
    DistField bad = zero_field(build_grid(1, 16, 32, 6.0, 1.0));
    bad.values(3, 2) = -1.0;
    write_snapshot((root / "bad.txt").string(), bad, 0.0);
    const std::string cfg = write_cfg(
        "badcheck.json",
        base_grid + reg +
            R"("t_end":0.05,"initial":{"preset":"file","path":")" +
            (root / "bad.txt").string() + R"("})");
    const int rc = run_cli(bin,
                           "check --config " + cfg + " --out " +
                               (root / "bad_out").string(),
                           1, root / "bad.log");
    if (rc == 0) {
      ok = false;
      why += "corrupted snapshot accepted; ";
    }
  }

  report(10, "determinism: every command bitwise stable across VFP_THREADS",
         ok, why.empty() ? "6 commands + plot + negative control" : why);
  if (ok) fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-vfp-binary>\n");
    return 2;
  }
  const std::string bin = argv[1];

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(bin);

  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
