#pragma once

#include "vfp/grid.hpp"
#include "vfp/moments.hpp"

namespace vfp {

enum class CoeffSource { raw, regularized };

/// Drift center u(x) and diffusion coefficient T(x) >= 0 feeding the
/// collision operator, tagged with where they came from.
struct CoefficientSet {
  SpatialVectorField u;
  SpatialField T;
  CoeffSource source = CoeffSource::raw;
};

/// Centered-difference evaluation of div_v (T grad_v f + (v - u) f) with
/// zero-flux closure at the velocity box edges. The per-x-cell velocity
/// integral of the result telescopes to zero exactly.
ArrayXXd apply_operator(const DistField& field, const CoefficientSet& coeffs);

/// One backward-Euler step of d_t f = div_v (T grad_v f + (v - u) f),
/// independent per x-cell, with Chang-Cooper (Scharfetter-Gummel) face
/// weights. Preserves nonnegativity and the per-cell velocity integral;
/// the exact stationary state is the discrete Maxwellian of (u, T) defined
/// by the flux-balance ratio. For dim = 2 the two velocity axes are solved
/// in sequence, which keeps both properties and the same fixed point.
DistField collision_step(const DistField& field, const CoefficientSet& coeffs,
                         double dt);

/// Semi-Lagrangian shift f(x,v) <- f(x - v dt, v) with periodic wrap and
/// cubic interpolation per velocity row, clipped to stay nonnegative and
/// renormalized so each row keeps its mass.
DistField transport_step(const DistField& field, double dt);

}  // namespace vfp
