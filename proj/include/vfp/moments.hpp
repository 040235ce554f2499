#pragma once

#include "vfp/grid.hpp"

namespace vfp {

/// Velocity moments of a DistField as spatial fields. u and T carry the
/// vacuum convention: both are zero wherever rho falls below rho_floor.
struct MomentSet {
  SpatialField rho;        // mass density, >= 0
  SpatialVectorField mom;  // rho * u
  SpatialField en2;        // second raw moment, integral |v|^2 f dv
  SpatialVectorField u;
  SpatialField T;
  double rho_floor = 0.0;
};

MomentSet compute_moments(const DistField& field);

/// M(x,v) = rho / (2 pi T)^(N/2) * exp(-|v-u|^2 / (2T)); zero on vacuum
/// cells. Throws "degenerate temperature" where rho > 0 but T = 0.
DistField local_maxwellian(const MomentSet& m, const PhaseGrid& grid);

/// Integral of f log f with the convention 0 log 0 = 0.
double entropy(const DistField& field);

/// D = integral (1/(T f)) |T grad_v f - (u - v) f|^2, centered differences
/// in v with one-sided stencils at the box edges. Cells with f below the
/// floor or T = 0 are skipped; the result is nonnegative by construction.
double entropy_dissipation(const DistField& field, const MomentSet& m);

/// Weighted L^p_q norm: (integral (1+|v|^q)|f|^p)^(1/p); for p = inf the
/// max over cells of (1+|v|^q)|f|.
double weighted_norm(const DistField& field, double p, double q);

/// Same norm on a bare (possibly signed) grid array, e.g. a difference of
/// two fields.
double weighted_norm_diff(const PhaseGrid& grid, const ArrayXXd& values,
                          double p, double q);

/// Integral of |v|^3 f over phase space.
double third_moment(const DistField& field);

}  // namespace vfp
