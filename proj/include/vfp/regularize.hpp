#pragma once

#include <utility>
#include <vector>

#include "vfp/grid.hpp"
#include "vfp/moments.hpp"

namespace vfp {

struct RegParams {
  double eps = 0.1;    // in (0,1)
  double delta = 0.1;  // in (0,1)
};

/// x / (a + b x), increasing in x for a, b > 0. The temperature
/// regularization is exactly this map applied to phi + delta^2.
inline double saturating_quotient(double x, double a, double b) {
  return x / (a + b * x);
}

/// Periodic mollifier on the spatial torus: the compactly supported bump
/// c exp(-1/(1-|x|^2)) scaled to width eps, sampled at cell offsets and
/// renormalized so that sum(w) * dx^N == 1 exactly.
struct MollifierKernel {
  double eps = 0.0;
  std::vector<std::array<int, 2>> offsets;  // per-axis cell offsets
  std::vector<double> weights;              // matching, all > 0
};

MollifierKernel build_mollifier(const PhaseGrid& grid, double eps);

SpatialField mollify(const PhaseGrid& grid, const MollifierKernel& kernel,
                     const SpatialField& field);
SpatialVectorField mollify(const PhaseGrid& grid, const MollifierKernel& kernel,
                           const SpatialVectorField& field);

/// u_eps = (rho u * theta) / (rho * theta + eps (1 + |(rho u) * theta|^2)).
SpatialVectorField regularized_velocity(const MomentSet& m,
                                        const PhaseGrid& grid,
                                        const MollifierKernel& kernel,
                                        double eps);

/// Returns (phi, T_eps_delta):
///   phi = en2 * theta - |(rho u)*theta|^2 / (rho*theta + delta(1 + |(rho u)*theta|^2))
///   T   = (phi + delta^2) / (N rho*theta + delta (1 + phi))
std::pair<SpatialField, SpatialField> regularized_temperature(
    const MomentSet& m, const PhaseGrid& grid, const MollifierKernel& kernel,
    double eps, double delta);

/// All regularized quantities for one state, plus the mollified moments
/// they are built from.
struct RegFields {
  SpatialVectorField u_eps;
  SpatialField phi;
  SpatialField t_eps_delta;
  SpatialField rho_moll;
  SpatialVectorField mom_moll;
  SpatialField en2_moll;
};

RegFields build_reg_fields(const MomentSet& m, const PhaseGrid& grid,
                           const MollifierKernel& kernel,
                           const RegParams& params);

/// f_{0,eps} = (eta_eps * f0)(x,v) + eps exp(-|v|^2), with eta_eps the
/// product bump mollifier in x (periodic) and v (truncated at the box edge,
/// renormalized per source cell so mass is preserved exactly). The output
/// is strictly positive.
DistField regularize_initial(const DistField& f0, double eps);

}  // namespace vfp
