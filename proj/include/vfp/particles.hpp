#pragma once

#include <cstdint>

#include "vfp/grid.hpp"
#include "vfp/moments.hpp"
#include "vfp/regularize.hpp"
#include "vfp/solver.hpp"

namespace vfp {

/// Weighted particle ensemble on the torus. Randomness is counter-based:
/// every draw is a pure function of (seed, particle index, step, counter),
/// so results are identical for any worker count.
struct Ensemble {
  int dim = 1;
  double period = 1.0;
  ArrayXXd x;  // n_p x dim, wrapped into [0, period)
  ArrayXXd v;  // n_p x dim
  double weight = 0.0;  // total mass / n_p
  std::uint64_t seed = 0;
  std::uint64_t step = 0;  // advances once per em_step

  int size() const { return static_cast<int>(x.rows()); }
};

/// Samples n_p particles from f0eps / mass by inverse-CDF on the cell
/// histogram plus uniform jitter within each cell.
Ensemble init_ensemble(const DistField& f0eps, int n_p, std::uint64_t seed);

/// Euler-Maruyama step: X += V dt (wrapped), then
/// V += (u_eps(X) - V) dt + sqrt(2 T_eps_delta(X) dt) xi with coefficients
/// linearly interpolated at the updated position.
void em_step(Ensemble& ens, const PhaseGrid& grid, const RegFields& coeffs,
             double dt);

/// Histogram moments on the spatial grid, optionally mollified by the same
/// kernel the solver uses. Vacuum convention matches compute_moments.
MomentSet estimate_moments(const Ensemble& ens, const PhaseGrid& grid,
                           const MollifierKernel* kernel = nullptr);

/// Full phase-space histogram of the ensemble (particles outside the
/// velocity box are dropped); used for entropy-style diagnostics.
DistField phase_histogram(const Ensemble& ens, const PhaseGrid& grid);

/// Self-consistent McKean-Vlasov loop: estimate moments, build regularized
/// coefficients, em_step; records the same trajectory schema as run().
/// Requires cfg.reg; f0 is regularized with regularize_initial first. The
/// final ensemble is copied out when final_out is given.
Trajectory run_particles(const SolverConfig& cfg, const DistField& f0, int n_p,
                         std::uint64_t seed, Ensemble* final_out = nullptr);

namespace rng {
/// Counter-based generator primitives (splitmix64 finalizer chain).
std::uint64_t word(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                   std::uint64_t c);
double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
               std::uint64_t c);
/// Standard normal pair via Box-Muller from draws (c, c+1).
void normal_pair(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c, double* z0, double* z1);
}  // namespace rng

}  // namespace vfp
