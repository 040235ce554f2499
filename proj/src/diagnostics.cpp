#include "vfp/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vfp/common.hpp"

namespace vfp {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::flag:
      return "flag";
    default:
      return "fail";
  }
}

CheckStatus AuditReport::overall() const {
  CheckStatus r = CheckStatus::pass;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return CheckStatus::fail;
    if (c.status == CheckStatus::flag) r = CheckStatus::flag;
  }
  return r;
}

std::string AuditReport::table() const {
  std::ostringstream os;
  os << title << "\n";
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "  %-28s %13.6e  bound %13.6e  [%s]  %s\n",
                  c.name.c_str(), c.value, c.bound, to_string(c.status),
                  c.anchor.c_str());
    os << buf;
    if (!c.detail.empty()) os << "      " << c.detail << "\n";
  }
  return os.str();
}

namespace {

Check make_check(std::string name, double value, double bound, bool ok,
                 bool hard, double tol, std::string anchor,
                 std::string detail = "") {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.status = ok ? CheckStatus::pass
                : (hard ? CheckStatus::fail : CheckStatus::flag);
  c.tolerance = tol;
  c.anchor = std::move(anchor);
  c.detail = std::move(detail);
  return c;
}

}  // namespace

AuditReport conservation_report(const Trajectory& traj,
                                const ConservationTols& tols) {
  if (traj.rows.size() < 2)
    throw std::invalid_argument("conservation_report: insufficient samples");
  AuditReport rep;
  rep.title = "conservation";
  const TrajectoryRow& r0 = traj.rows.front();

  double mass_drift = 0.0, energy_drift = 0.0;
  std::array<double, 2> mom_drift{0.0, 0.0};
  for (const auto& r : traj.rows) {
    mass_drift = std::max(mass_drift, std::abs(r.mass - r0.mass));
    energy_drift = std::max(energy_drift, std::abs(r.energy - r0.energy));
    for (int a = 0; a < traj.dim; ++a)
      mom_drift[a] = std::max(mom_drift[a], std::abs(r.mom[a] - r0.mom[a]));
  }
  const double mass_rel = r0.mass > 0.0 ? mass_drift / r0.mass : mass_drift;
  rep.checks.push_back(make_check(
      "mass_drift", mass_rel, tols.mass_rel, mass_rel <= tols.mass_rel, true,
      tols.mass_rel, "d/dt integral f = 0"));
  for (int a = 0; a < traj.dim; ++a) {
    const double scale = std::abs(r0.mom[a]);
    const bool relative = scale > 1e-10 * std::max(1.0, r0.mass);
    const double drift = relative ? mom_drift[a] / scale : mom_drift[a];
    rep.checks.push_back(make_check(
        "momentum_drift_" + std::to_string(a + 1), drift, tols.momentum_rel,
        drift <= tols.momentum_rel, false, tols.momentum_rel,
        "d/dt integral v f = 0", relative ? "relative" : "absolute"));
  }
  const double en_rel =
      r0.energy > 0.0 ? energy_drift / r0.energy : energy_drift;
  rep.checks.push_back(make_check(
      "energy_drift", en_rel, tols.energy_rel, en_rel <= tols.energy_rel,
      false, tols.energy_rel, "d/dt integral |v|^2 f = 0"));
  return rep;
}

AuditReport h_theorem_check(const Trajectory& traj,
                            const HTheoremParams& params) {
  if (traj.rows.empty() ||
      !std::isfinite(traj.rows.front().entropy))
    throw std::invalid_argument("h_theorem_check: entropy column missing");
  AuditReport rep;
  rep.title = "h-theorem";

  double worst_rise = 0.0;
  double worst_rate_err = 0.0;
  bool any_rate = false;
  for (std::size_t k = 1; k < traj.rows.size(); ++k) {
    const auto& a = traj.rows[k - 1];
    const auto& b = traj.rows[k];
    worst_rise = std::max(worst_rise, b.entropy - a.entropy);
    const double tm = 0.5 * (a.time + b.time);
    if (params.check_rate && tm >= params.t_lo && tm <= params.t_hi) {
      const double rate = (b.entropy - a.entropy) / (b.time - a.time);
      const double dmean = 0.5 * (a.dissipation + b.dissipation);
      if (dmean > params.d_floor) {
        any_rate = true;
        worst_rate_err =
            std::max(worst_rate_err, std::abs(rate + dmean) / dmean);
      }
    }
  }
  rep.checks.push_back(make_check(
      "entropy_monotone", worst_rise, params.tol_step,
      worst_rise <= params.tol_step, false, params.tol_step,
      "H(t_{k+1}) <= H(t_k)"));
  if (any_rate)
    rep.checks.push_back(make_check(
        "dissipation_rate_match", worst_rate_err, params.rate_rtol,
        worst_rate_err <= params.rate_rtol, false, params.rate_rtol,
        "dH/dt = -integral D dx"));
  return rep;
}

AuditReport bounds_check(const DistField& state, const RegFields& reg,
                         const RegParams& params) {
  AuditReport rep;
  rep.title = "regularization bounds";
  const PhaseGrid& g = state.grid;
  const double tol = 1e-12;

  const double umax = reg.u_eps.abs().maxCoeff();
  rep.checks.push_back(make_check("u_eps_sup", umax * params.eps, 1.0,
                                  umax * params.eps <= 1.0 + tol, true, tol,
                                  "|u_eps| <= 1/eps"));

  const double tmin = reg.t_eps_delta.minCoeff();
  const double tmax = reg.t_eps_delta.maxCoeff();
  rep.checks.push_back(make_check("t_eps_delta_nonneg", tmin, 0.0,
                                  tmin >= -tol, true, tol, "T_eps_delta >= 0"));
  rep.checks.push_back(make_check(
      "t_eps_delta_sup", tmax * params.delta, 1.0,
      tmax * params.delta <= 1.0 + tol, true, tol, "T_eps_delta <= 1/delta"));

  // phi >= N (rho T * theta) >= 0 with rho T taken from the exact moment
  // formula (no vacuum floor) so the discrete Cauchy-Schwarz chain applies.
  const MomentSet m = compute_moments(state);
  SpatialField nrhoT = SpatialField::Zero(g.x_cells());
  for (int xc = 0; xc < g.x_cells(); ++xc) {
    if (m.rho[xc] > 0.0) {
      const double v =
          m.en2[xc] - m.mom.row(xc).matrix().squaredNorm() / m.rho[xc];
      nrhoT[xc] = v > 0.0 ? v : 0.0;
    }
  }
  const MollifierKernel kernel = build_mollifier(g, params.eps);
  const SpatialField lower = mollify(g, kernel, nrhoT);
  const double scale = std::max(1.0, lower.abs().maxCoeff());
  const double gap = (reg.phi - lower).minCoeff();
  rep.checks.push_back(make_check("phi_lower_bound", gap, 0.0,
                                  gap >= -tol * scale, true, tol,
                                  "phi >= N (rho T * theta) >= 0"));
  const double phimin = reg.phi.minCoeff();
  rep.checks.push_back(make_check("phi_nonneg", phimin, 0.0,
                                  phimin >= -tol * scale, true, tol,
                                  "phi >= 0"));

  const double fmin = state.values.minCoeff();
  std::string where;
  if (fmin <= 0.0) {
    int vc = 0, xc = 0;
    state.values.minCoeff(&vc, &xc);
    where = "at x-cell " + std::to_string(xc) + ", v-cell " +
            std::to_string(vc);
  }
  rep.checks.push_back(make_check("positivity", fmin, 0.0, fmin > 0.0, true,
                                  0.0, "f > 0 for positive initial data",
                                  where));

  Check c;
  c.name = "min_t_eps_delta";
  c.value = tmin;
  c.bound = 0.0;
  c.status = CheckStatus::pass;
  c.anchor = "empirical c_eps_delta (no explicit bound)";
  rep.checks.push_back(c);
  return rep;
}

AuditReport lp_growth_check(const Trajectory& traj, double p, double slack) {
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument("lp_growth_check: need >= 2 snapshots");
  AuditReport rep;
  char pbuf[32];
  std::snprintf(pbuf, sizeof pbuf, "%g", p);
  rep.title = std::string("Lp growth (p=") + pbuf + ")";
  const PhaseGrid& g = traj.snapshots.front().second.grid;
  const int N = g.dim;

  auto lp = [&](const DistField& f) -> double {
    if (std::isinf(p)) return f.values.maxCoeff();
    return (f.values.pow(p)).sum() * g.cell_vol();
  };
  const double base = lp(traj.snapshots.front().second);
  double worst = 0.0;
  for (const auto& [t, f] : traj.snapshots) {
    const double growth = std::isinf(p) ? std::exp(N * t)
                                        : std::exp(N * (p - 1.0) * t);
    const double lhs = lp(f);
    const double rhs = growth * base;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? HUGE_VAL : 0.0);
    worst = std::max(worst, ratio);
  }
  const bool equality = std::abs(p - 1.0) < 1e-14;
  const double allowed = equality ? 1.0 + 1e-12 : 1.0 + slack;
  rep.checks.push_back(make_check(
      "lp_ratio_max", worst, allowed, worst <= allowed, false,
      equality ? 1e-12 : slack,
      std::isinf(p) ? "max f(t) <= e^{Nt} max f0"
                    : "integral f^p <= e^{N(p-1)t} integral f0^p"));
  return rep;
}

AuditReport moment_integrability_check(const DistField& state) {
  AuditReport rep;
  rep.title = "moment integrability";
  const PhaseGrid& g = state.grid;
  const int N = g.dim;
  const MomentSet m = compute_moments(state);

  auto lp_norm = [&](const SpatialField& f, double p) {
    return std::pow((f.abs().pow(p)).sum() * g.cell_vol_x(), 1.0 / p);
  };
  const double p_rho = 0.9 * (N + 3.0) / N;
  const double p_mom = 0.9 * (N + 3.0) / (N + 1.0);
  const double p_en = 0.9 * (N + 3.0) / (N + 2.0);

  const double M =
      std::max(state.values.maxCoeff(), third_moment(state));
  SpatialField mom_norm(g.x_cells());
  for (int xc = 0; xc < g.x_cells(); ++xc)
    mom_norm[xc] = m.mom.row(xc).matrix().norm();

  const double n_rho = lp_norm(m.rho, p_rho);
  const double n_mom = lp_norm(mom_norm, p_mom);
  const double n_en = lp_norm(m.en2, p_en);

  auto rec = [&](const char* name, double v, double p) {
    Check c;
    c.name = name;
    c.value = v;
    c.bound = 1.0 + M;
    c.status = CheckStatus::pass;
    c.detail = "p = " + std::to_string(p) + ", ratio = " +
               std::to_string(v / (1.0 + M));
    c.anchor = "||moment||_Lp <= C(M), M = max(||f||_inf, third moment)";
    return c;
  };
  rep.checks.push_back(rec("rho_lp", n_rho, p_rho));
  rep.checks.push_back(rec("mom_lp", n_mom, p_mom));
  rep.checks.push_back(rec("energy_lp", n_en, p_en));
  return rep;
}

double mollifier_mass_check(const PhaseGrid& grid, const SpatialField& rho,
                            const MollifierKernel& kernel) {
  if ((rho < 0.0).any())
    throw std::invalid_argument("mollifier_mass_check: rho must be >= 0");
  if (!(rho.maxCoeff() > 0.0))
    throw std::invalid_argument("mollifier_mass_check: rho is zero");
  const SpatialField conv = mollify(grid, kernel, rho);

  // ratio(x) = rho(x) / (theta*rho)(x); zero where rho vanishes.
  SpatialField ratio = SpatialField::Zero(grid.x_cells());
  for (int xc = 0; xc < grid.x_cells(); ++xc)
    if (rho[xc] > 0.0) ratio[xc] = rho[xc] / conv[xc];

  // sup over y of the convolution of theta against ratio; the kernel is
  // even so gather with +offset equals the integral at shifted y.
  double sup = 0.0;
  const std::size_t nk = kernel.offsets.size();
  if (grid.dim == 1) {
    for (int y = 0; y < grid.nx; ++y) {
      double s = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        int i = (y + kernel.offsets[k][0]) % grid.nx;
        if (i < 0) i += grid.nx;
        s += kernel.weights[k] * ratio[i];
      }
      sup = std::max(sup, s * grid.cell_vol_x());
    }
  } else {
    for (int y0 = 0; y0 < grid.nx; ++y0)
      for (int y1 = 0; y1 < grid.nx; ++y1) {
        double s = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
          int i0 = (y0 + kernel.offsets[k][0]) % grid.nx;
          int i1 = (y1 + kernel.offsets[k][1]) % grid.nx;
          if (i0 < 0) i0 += grid.nx;
          if (i1 < 0) i1 += grid.nx;
          s += kernel.weights[k] * ratio[i0 * grid.nx + i1];
        }
        sup = std::max(sup, s * grid.cell_vol_x());
      }
  }
  return sup;
}

AuditReport third_moment_envelope_check(const Trajectory& traj) {
  if (traj.rows.size() < 2)
    throw std::invalid_argument("third_moment_envelope_check: need >= 2 rows");
  AuditReport rep;
  rep.title = "third moment envelope";
  const double third0 = traj.rows.front().third_moment;
  const double t_end = traj.rows.back().time;

  double c_emp = 0.0, worst = third0;
  for (std::size_t k = 1; k < traj.rows.size(); ++k) {
    const auto& a = traj.rows[k - 1];
    const auto& b = traj.rows[k];
    const double rate = (b.third_moment - a.third_moment) / (b.time - a.time);
    c_emp = std::max(c_emp, rate);
    worst = std::max(worst, b.third_moment);
  }
  const double envelope = 2.0 * (third0 + c_emp * t_end);
  rep.checks.push_back(make_check(
      "third_moment_max", worst, envelope, worst <= envelope, false, 0.0,
      "sup_t integral |v|^3 f <= 2 (value(0) + C t_end)",
      "empirical Gronwall C = " + std::to_string(c_emp)));
  return rep;
}

void write_audit_csv(const std::string& path,
                     const std::vector<AuditReport>& reports) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "check,value,bound,status,anchor\n";
  char buf[64];
  for (const auto& rep : reports)
    for (const auto& c : rep.checks) {
      std::snprintf(buf, sizeof buf, "%.17g", c.value);
      os << c.name << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.17g", c.bound);
      os << buf << "," << to_string(c.status) << ",\"" << c.anchor << "\"\n";
    }
}

}  // namespace vfp
