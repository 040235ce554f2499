#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vfp/grid.hpp"
#include "vfp/particles.hpp"
#include "vfp/solver.hpp"

namespace vfp {

/// Text snapshot: header "vfp-snapshot v1 dim nx nv vmax period time", then
/// row-major (x-outer) values, one per line, 17 significant digits so the
/// round trip is bitwise.
void write_snapshot(const std::string& path, const DistField& field,
                    double time);
std::pair<DistField, double> read_snapshot(const std::string& path);

/// Trajectory CSV: time, mass, mom_1..mom_N, energy, entropy, dissipation,
/// third_moment.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

void write_residuals_csv(const std::string& path,
                         const std::vector<double>& residuals);

void write_continuation_csv(const std::string& path,
                            const std::vector<ContinuationRow>& rows);

/// Ensemble snapshot: header "vfp-ensemble v1 dim n_p period weight time",
/// then one "x v" row per particle (all components, space-separated).
void write_ensemble(const std::string& path, const Ensemble& ens, double time);

std::string format_g17(double v);

}  // namespace vfp
