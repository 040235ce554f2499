#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vfp/config.hpp"
#include "vfp/diagnostics.hpp"
#include "vfp/io.hpp"
#include "vfp/particles.hpp"
#include "vfp/plot.hpp"
#include "vfp/solver.hpp"

namespace fs = std::filesystem;
using namespace vfp;

namespace {

int status_to_exit(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return 0;
    case CheckStatus::flag:
      return 2;
    default:
      return 1;
  }
}

CheckStatus combine(CheckStatus a, CheckStatus b) {
  if (a == CheckStatus::fail || b == CheckStatus::fail)
    return CheckStatus::fail;
  if (a == CheckStatus::flag || b == CheckStatus::flag)
    return CheckStatus::flag;
  return CheckStatus::pass;
}

RunConfig load_config(const std::string& path, std::uint64_t* seed_override) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig c = parse_config(ss.str());
  if (seed_override) c.seed = *seed_override;
  return c;
}

void echo_config(const RunConfig& c, const fs::path& out) {
  std::ofstream os(out / "config.json");
  os << config_echo(c);
}

void write_snapshots(const Trajectory& traj, const fs::path& out) {
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.txt", i);
    write_snapshot((out / name).string(), traj.snapshots[i].second,
                   traj.snapshots[i].first);
  }
}

CheckStatus run_audits(const RunConfig& cfg, const Trajectory& traj,
                       const fs::path& out) {
  std::vector<AuditReport> reports;
  if (cfg.audits.conservation && traj.rows.size() >= 2)
    reports.push_back(conservation_report(traj));
  if (cfg.audits.h_theorem && !cfg.reg && traj.rows.size() >= 2) {
    HTheoremParams hp;
    // the rate identity needs a collision-dominated (homogeneous) run
    hp.check_rate = cfg.initial.kind == InitialSpec::Kind::maxwellian ||
                    cfg.initial.kind == InitialSpec::Kind::bimodal;
    reports.push_back(h_theorem_check(traj, hp));
  }
  if (cfg.audits.lp_growth && traj.snapshots.size() >= 2) {
    reports.push_back(lp_growth_check(traj, 2.0));
    reports.push_back(lp_growth_check(traj, 4.0));
    reports.push_back(
        lp_growth_check(traj, std::numeric_limits<double>::infinity()));
    reports.push_back(third_moment_envelope_check(traj));
  }
  if (cfg.audits.bounds && cfg.reg && !traj.snapshots.empty()) {
    const DistField& last = traj.snapshots.back().second;
    const MollifierKernel kernel =
        build_mollifier(last.grid, cfg.reg->eps);
    const RegFields r =
        build_reg_fields(compute_moments(last), last.grid, kernel, *cfg.reg);
    reports.push_back(bounds_check(last, r, *cfg.reg));
  }
  CheckStatus status = CheckStatus::pass;
  for (const auto& rep : reports) {
    std::cout << rep.table();
    status = combine(status, rep.overall());
  }
  if (!reports.empty()) write_audit_csv((out / "audit.csv").string(), reports);
  return status;
}

int cmd_run(const RunConfig& cfg, const fs::path& out) {
  const DistField f0 = make_initial(cfg);
  const Trajectory traj = run(to_solver_config(cfg), f0);
  write_trajectory_csv((out / "trajectory.csv").string(), traj);
  write_snapshots(traj, out);
  echo_config(cfg, out);
  const CheckStatus s = run_audits(cfg, traj, out);
  std::cout << "run: " << traj.rows.size() << " records, status "
            << to_string(s) << "\n";
  return status_to_exit(s);
}

int cmd_picard(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.reg)
    throw std::runtime_error("picard requires \"reg\" in the config");
  const DistField f0 = make_initial(cfg);
  const DistField f0eps = regularize_initial(f0, cfg.reg->eps);
  const PicardResult res = picard_solve(f0eps, to_solver_config(cfg));
  write_residuals_csv((out / "residuals.csv").string(), res.residuals);
  write_snapshot((out / "picard_final.txt").string(), res.state, cfg.t_end);
  echo_config(cfg, out);
  std::cout << "picard: " << res.residuals.size() << " iterations\n";
  for (std::size_t i = 0; i < res.residuals.size(); ++i)
    std::cout << "  r[" << i + 1 << "] = " << format_g17(res.residuals[i])
              << "\n";
  const bool converged =
      !res.residuals.empty() && res.residuals.back() < cfg.picard.tol;
  std::cout << (converged ? "converged\n" : "tolerance not reached\n");
  return converged ? 0 : 2;
}

int cmd_particles(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.reg)
    throw std::runtime_error("particles requires \"reg\" in the config");
  const DistField f0 = make_initial(cfg);
  Ensemble final_ens;
  const Trajectory traj = run_particles(to_solver_config(cfg), f0, cfg.n_p,
                                        cfg.seed, &final_ens);
  write_trajectory_csv((out / "trajectory.csv").string(), traj);
  write_ensemble((out / "ensemble.txt").string(), final_ens, cfg.t_end);
  echo_config(cfg, out);
  std::cout << "particles: " << traj.rows.size() << " records, n_p "
            << cfg.n_p << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out) {
  if (cfg.eps_list.empty() || cfg.delta_list.empty())
    throw std::runtime_error("sweep requires sweep.eps_list and sweep.delta_list");
  const DistField f0 = make_initial(cfg);
  const auto table =
      continuation_study(to_solver_config(cfg), cfg.eps_list, cfg.delta_list, f0);
  write_continuation_csv((out / "continuation.csv").string(), table);
  echo_config(cfg, out);
  std::cout << "eps        delta      dist_rho     dist_mom     dist_energy\n";
  for (const auto& r : table) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10g %-10g %-12.5e %-12.5e %-12.5e\n",
                  r.eps, r.delta, r.dist_rho, r.dist_mom, r.dist_energy);
    std::cout << line;
  }
  return 0;
}

int cmd_compare(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.reg)
    throw std::runtime_error("compare requires \"reg\" in the config");
  const DistField f0 = make_initial(cfg);
  const SolverConfig scfg = to_solver_config(cfg);

  const Trajectory gtraj = run(scfg, f0);
  const MomentSet gm = compute_moments(gtraj.snapshots.back().second);

  // Half-velocity-resolution run estimates the grid truncation error.
  RunConfig coarse_rc = cfg;
  coarse_rc.nv = std::max(8, cfg.nv / 2);
  const MomentSet cm = compute_moments(
      run(to_solver_config(coarse_rc), make_initial(coarse_rc))
          .snapshots.back()
          .second);

  Ensemble ens;
  run_particles(scfg, f0, cfg.n_p, cfg.seed, &ens);
  const MomentSet pm = estimate_moments(ens, scfg.grid);

  const PhaseGrid& g = scfg.grid;
  const double cv = g.cell_vol_x();
  std::ofstream os(out / "compare.csv");
  os << "field,cell,grid,particle,error_bar,ok\n";
  int bad = 0, total = 0;
  auto emit = [&](const char* field, int xc, double gv, double pv, double se,
                  double trunc) {
    const double bar = std::sqrt(se * se + trunc * trunc) + 1e-12;
    const bool ok = std::abs(gv - pv) <= 3.0 * bar;
    ++total;
    if (!ok) ++bad;
    os << field << "," << xc << "," << format_g17(gv) << "," << format_g17(pv)
       << "," << format_g17(bar) << "," << (ok ? 1 : 0) << "\n";
  };
  for (int xc = 0; xc < g.x_cells(); ++xc) {
    const double w = ens.weight;
    const double se_rho = std::sqrt(std::max(0.0, w * pm.rho[xc] / cv));
    const double se_mom = std::sqrt(std::max(0.0, w * pm.en2[xc] / cv));
    const double se_en2 = std::sqrt(
        std::max(0.0, 3.0 * w * pm.en2[xc] * pm.en2[xc] /
                          (std::max(pm.rho[xc], 1e-12) * cv)));
    emit("rho", xc, gm.rho[xc], pm.rho[xc], se_rho,
         std::abs(gm.rho[xc] - cm.rho[xc]));
    for (int a = 0; a < g.dim; ++a)
      emit("mom", xc, gm.mom(xc, a), pm.mom(xc, a), se_mom,
           std::abs(gm.mom(xc, a) - cm.mom(xc, a)));
    emit("en2", xc, gm.en2[xc], pm.en2[xc], se_en2,
         std::abs(gm.en2[xc] - cm.en2[xc]));
  }
  echo_config(cfg, out);
  std::cout << "compare: " << bad << "/" << total
            << " cells outside 3 combined error bars\n";
  return bad == 0 ? 0 : 2;
}

int cmd_check(const RunConfig& cfg, const fs::path& out) {
  const DistField f = make_initial(cfg);
  std::vector<AuditReport> reports;
  CheckStatus status = CheckStatus::pass;
  try {
    validate(f);
  } catch (const std::exception& e) {
    std::cout << "state validation failed: " << e.what() << "\n";
    status = CheckStatus::fail;
  }
  if (cfg.reg) {
    const MollifierKernel kernel = build_mollifier(f.grid, cfg.reg->eps);
    const MomentSet m = compute_moments(f);
    const RegFields r = build_reg_fields(m, f.grid, kernel, *cfg.reg);
    AuditReport rep = bounds_check(f, r, *cfg.reg);
    if (m.rho.maxCoeff() > 0.0) {
      Check c;
      c.name = "mollifier_mass_sup";
      c.value = mollifier_mass_check(f.grid, m.rho, kernel);
      c.bound = 10.0;
      c.status = c.value <= 10.0 ? CheckStatus::pass : CheckStatus::flag;
      c.anchor = "sup_y integral theta(x-y) rho/(theta*rho) dx <= C";
      rep.checks.push_back(c);
    }
    std::cout << rep.table();
    status = combine(status, rep.overall());
    reports.push_back(std::move(rep));
  }
  AuditReport integ = moment_integrability_check(f);
  std::cout << integ.table();
  status = combine(status, integ.overall());
  reports.push_back(std::move(integ));
  write_audit_csv((out / "audit.csv").string(), reports);
  std::cout << "check: status " << to_string(status) << "\n";
  return status_to_exit(status);
}

std::vector<std::vector<double>> read_csv_columns(const fs::path& path,
                                                  std::vector<std::string>* hdr) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(is, line);
  std::stringstream hs(line);
  std::string col;
  while (std::getline(hs, col, ',')) hdr->push_back(col);
  std::vector<std::vector<double>> cols(hdr->size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::getline(ls, col, ',');
      cols[i].push_back(std::strtod(col.c_str(), nullptr));
    }
  }
  return cols;
}

int cmd_plot(const fs::path& out) {
  int made = 0;
  const fs::path traj_csv = out / "trajectory.csv";
  if (fs::exists(traj_csv)) {
    std::vector<std::string> hdr;
    auto cols = read_csv_columns(traj_csv, &hdr);
    auto col = [&](const std::string& name) -> std::vector<double> {
      for (std::size_t i = 0; i < hdr.size(); ++i)
        if (hdr[i] == name) return cols[i];
      return {};
    };
    const auto t = col("time");
    write_svg_chart((out / "entropy.svg").string(), "entropy vs time", "t",
                    "H", {Series{"H(t)", t, col("entropy")}});
    ++made;
    std::vector<Series> drift;
    for (const char* name : {"mass", "energy"}) {
      auto y = col(name);
      if (y.empty()) continue;
      const double y0 = y.front();
      for (double& v : y) v = std::abs(v - y0);
      drift.push_back(Series{std::string(name) + " drift", t, y});
    }
    write_svg_chart((out / "drift.svg").string(), "moment drift vs time", "t",
                    "|Q(t)-Q(0)|", drift);
    ++made;
  }
  const fs::path res_csv = out / "residuals.csv";
  if (fs::exists(res_csv)) {
    std::vector<std::string> hdr;
    auto cols = read_csv_columns(res_csv, &hdr);
    write_svg_chart((out / "residuals.svg").string(), "Picard residuals", "n",
                    "r_n", {Series{"r_n", cols[0], cols[1]}}, true);
    ++made;
  }
  const fs::path cont_csv = out / "continuation.csv";
  if (fs::exists(cont_csv)) {
    std::vector<std::string> hdr;
    auto cols = read_csv_columns(cont_csv, &hdr);
    std::vector<double> idx(cols[0].size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = double(i);
    write_svg_chart((out / "continuation.svg").string(),
                    "continuation distances", "row", "L1 distance",
                    {Series{"rho", idx, cols[2]}, Series{"mom", idx, cols[3]},
                     Series{"energy", idx, cols[4]}},
                    true);
    ++made;
  }
  std::cout << "plot: wrote " << made << " chart(s)\n";
  return made > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space solver and verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    if (need_config)
      sub->add_option("--config", config_path, "JSON config path")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "seed override")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* c_run = app.add_subcommand("run", "integrate the kinetic equation");
  CLI::App* c_picard = app.add_subcommand("picard", "frozen-coefficient iteration");
  CLI::App* c_part = app.add_subcommand("particles", "stochastic particle oracle");
  CLI::App* c_sweep = app.add_subcommand("sweep", "eps/delta continuation study");
  CLI::App* c_cmp = app.add_subcommand("compare", "grid vs particle comparison");
  CLI::App* c_check = app.add_subcommand("check", "state and bound audits");
  CLI::App* c_plot = app.add_subcommand("plot", "render SVG charts from CSV outputs");
  for (CLI::App* sub : {c_run, c_picard, c_part, c_sweep, c_cmp, c_check})
    add_common(sub, true);
  add_common(c_plot, false);

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    if (app.got_subcommand(c_plot)) return cmd_plot(out);

    RunConfig cfg = load_config(config_path, seed_set ? &seed : nullptr);
    if (app.got_subcommand(c_run)) return cmd_run(cfg, out);
    if (app.got_subcommand(c_picard)) return cmd_picard(cfg, out);
    if (app.got_subcommand(c_part)) return cmd_particles(cfg, out);
    if (app.got_subcommand(c_sweep)) return cmd_sweep(cfg, out);
    if (app.got_subcommand(c_cmp)) return cmd_compare(cfg, out);
    if (app.got_subcommand(c_check)) return cmd_check(cfg, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
