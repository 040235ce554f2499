#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfp/grid.hpp"
#include "vfp/kinetics.hpp"
#include "vfp/moments.hpp"
#include "vfp/regularize.hpp"

namespace vfp {

struct PicardParams {
  int n_max = 12;
  double tol = 1e-8;
  double q = 6.0;  // weight exponent of the residual norm, > dim + 4
};

struct SolverConfig {
  PhaseGrid grid;
  std::optional<RegParams> reg;  // absent -> raw coefficients
  double dt = 0.0;               // 0 -> default 0.5 dx / vmax
  double t_end = 0.0;
  int record_every = 1;    // steps between trajectory rows
  int snapshot_every = 0;  // rows between stored snapshots; 0 -> first+last
  PicardParams picard;

  double effective_dt() const {
    return dt > 0.0 ? dt : 0.5 * grid.dx / grid.vmax;
  }
};

struct TrajectoryRow {
  double time = 0.0;
  double mass = 0.0;
  std::array<double, 2> mom{0.0, 0.0};
  double energy = 0.0;  // integral |v|^2 f
  double entropy = 0.0;
  double dissipation = 0.0;
  double third_moment = 0.0;
  double max_f = 0.0;
  double min_f = 0.0;
  double int_f2 = 0.0;  // integral f^2
  double int_f4 = 0.0;
  bool bounds_ok = true;  // regularized runs only
};

struct Trajectory {
  int dim = 1;
  std::vector<TrajectoryRow> rows;
  std::vector<std::pair<double, DistField>> snapshots;
};

/// Thrown when the integrator detects NaN or negativity; carries the
/// offending state for post-mortem dumps.
struct SolverAbort : std::runtime_error {
  SolverAbort(const std::string& msg, double t, DistField state)
      : std::runtime_error(msg), time(t), state(std::move(state)) {}
  double time;
  DistField state;
};

/// One Strang step: transport(dt/2), coefficients from the current state
/// (raw or regularized per cfg), collision(dt), transport(dt/2).
DistField step_nonlinear(const DistField& state, const SolverConfig& cfg);

/// Integrates f0 to t_end recording diagnostics. Applies
/// regularize_initial(f0, eps) first when cfg.reg is set.
Trajectory run(const SolverConfig& cfg, const DistField& f0);

struct PicardResult {
  DistField state;                // iterate at t_end
  std::vector<double> residuals;  // sup_t L^2_q distance per iteration
  std::vector<std::pair<double, DistField>> history;  // final iterate, all nodes
};

/// Frozen-coefficient iteration: iterate n+1 solves the linear equation
/// with (u_eps, T_eps_delta) built from iterate n's stored time history;
/// iterate 0 is f0eps held constant in time. Stops when the residual drops
/// below picard.tol or after picard.n_max iterations; three consecutive
/// non-decreasing residuals abort with "Picard divergence".
PicardResult picard_solve(const DistField& f0eps, const SolverConfig& cfg);

struct ContinuationRow {
  enum class Kind { eps_step, delta_step, delta_vs_raw };
  Kind kind = Kind::eps_step;
  double eps = 0.0;    // parameters of the finer run of the pair
  double delta = 0.0;
  double dist_rho = 0.0;
  double dist_mom = 0.0;
  double dist_energy = 0.0;
};

/// Runs the solver across descending eps (fixed delta = delta_list front)
/// reporting successive L1 distances of the final (rho, rho u, en2) fields,
/// then across descending delta (fixed eps = eps_list back) reporting both
/// successive distances and the distance to a raw-coefficient reference.
/// The reference starts from the same regularized initial data f_{0,eps}
/// so it isolates the coefficient regularization.
std::vector<ContinuationRow> continuation_study(
    const SolverConfig& cfg, const std::vector<double>& eps_list,
    const std::vector<double>& delta_list, const DistField& f0);

}  // namespace vfp
