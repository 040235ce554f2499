#pragma once

#include <string>
#include <vector>

#include "vfp/grid.hpp"
#include "vfp/moments.hpp"
#include "vfp/regularize.hpp"
#include "vfp/solver.hpp"

namespace vfp {

/// fail marks a violated algebraic guarantee; flag marks a discretization-
/// dependent tolerance being exceeded.
enum class CheckStatus { pass, flag, fail };

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  CheckStatus status = CheckStatus::pass;
  double tolerance = 0.0;
  std::string anchor;  // the inequality or identity being audited
  std::string detail;
};

struct AuditReport {
  std::string title;
  std::vector<Check> checks;

  CheckStatus overall() const;
  std::string table() const;
};

const char* to_string(CheckStatus s);

struct ConservationTols {
  double mass_rel = 1e-12;     // exact guarantee of the flux form
  double momentum_rel = 1e-3;  // discretization-dependent
  double energy_rel = 1e-3;
};

/// Max drift of mass, momentum components, and energy over a trajectory.
/// Momentum uses absolute drift when the initial momentum is ~0.
AuditReport conservation_report(const Trajectory& traj,
                                const ConservationTols& tols = {});

struct HTheoremParams {
  double tol_step = 1e-8;   // allowed per-step entropy increase
  double rate_rtol = 0.10;  // |dH/dt + D| / D window
  // The rate identity dH/dt = -integral D only applies to
  // collision-dominated (homogeneous) runs; callers disable it otherwise.
  bool check_rate = true;
  double t_lo = 0.1;  // rate-match window
  double t_hi = 1.0;
  // Rate matching is skipped where the recorded dissipation sits at the
  // discretization floor of the dissipation quadrature (the default covers
  // nv >= 128 on a vmax = 8 box).
  double d_floor = 1e-4;
};

/// Entropy monotonicity at every recorded step plus, on the given window,
/// agreement of -dH/dt with the recorded dissipation.
AuditReport h_theorem_check(const Trajectory& traj,
                            const HTheoremParams& params = {});

/// Algebraic bounds of the regularized quantities on one state:
/// |u_eps| <= 1/eps, 0 <= T <= 1/delta, phi >= N (rho T * theta) >= 0,
/// strict positivity of f, and the empirical min of T_eps_delta.
AuditReport bounds_check(const DistField& state, const RegFields& reg,
                         const RegParams& params);

/// integral f(t)^p <= (1+slack) e^{N(p-1)t} integral f0^p on the stored
/// snapshots; p may be inf (max value against e^{Nt} max f0).
AuditReport lp_growth_check(const Trajectory& traj, double p,
                            double slack = 0.01);

/// L^p norms of rho, rho u, and en2 at 0.9x the critical exponents,
/// recorded against M = max(||f||_inf, third moment).
AuditReport moment_integrability_check(const DistField& state);

/// sup over grid points y of integral theta_eps(x-y) rho(x) / (theta*rho)(x) dx.
double mollifier_mass_check(const PhaseGrid& grid, const SpatialField& rho,
                            const MollifierKernel& kernel);

/// Empirical Gronwall constant of the third moment and the envelope test
/// max_t third <= 2 (third(0) + C t_end).
AuditReport third_moment_envelope_check(const Trajectory& traj);

void write_audit_csv(const std::string& path,
                     const std::vector<AuditReport>& reports);

}  // namespace vfp
