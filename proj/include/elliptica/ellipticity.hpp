#pragma once

#include <optional>
#include <string>

#include "elliptica/algebra.hpp"
#include "elliptica/rng.hpp"
#include "elliptica/structure.hpp"
#include "elliptica/tolerances.hpp"

namespace elliptica {

/// Torus normal form of an elliptic element: g = q * exp(torus(angles)) * q^{-1}
/// with q in G and angles reduced to [0, period) and sorted ascending within
/// each Weyl-permutable block.
struct TorusForm {
  GroupElement q;
  RVec angles;
};

TorusForm torus_representative(const GroupElement& g, const Tolerances& tol);

/// Outcome of the pointwise classification of a group element.
struct EllipticityReport {
  bool ad_semisimple = false;
  bool spectrum_unit = false;
  bool elliptic = false;
  int fixed_dim = -1;  ///< dim Fix(Ad g); -1 when not elliptic
  bool fixed_compactly_embedded = false;
  bool stably_elliptic = false;

  /// Diagnostics: how far Spec(Ad g) sits from the unit circle, and (when a
  /// torus certificate exists) the minimal distance of the noncompact root
  /// values to the alcove walls 2*pi*Z.
  double max_modulus_deviation = 0.0;
  double min_wall_distance = -1.0;
  std::optional<TorusForm> torus;  ///< present iff elliptic and reduction succeeded
};

/// g is elliptic iff Ad(g) is semisimple with unit-modulus spectrum.
bool is_elliptic(const GroupElement& g, const Tolerances& tol);

/// g is stably elliptic iff it is elliptic and Fix(Ad g) is a compactly
/// embedded subalgebra (interior-of-elliptic-set characterization).
bool is_stably_elliptic(const GroupElement& g, const Tolerances& tol);

EllipticityReport classify_element(const GroupElement& g, const Tolerances& tol);

/// Basis (coordinate columns) of Fix(Ad g) = ker(Ad g - id).  Verifies
/// bracket closure of the result and throws InvariantViolation when the
/// closure residual signals tolerance breakdown.
RMat fixed_point_algebra(const GroupElement& g, const Tolerances& tol);

/// Oracle route for exp-images: Fix(Ad exp(x)) as the sum over n >= 0 of
/// ker((ad x)^2 + (2 pi n)^2 id).  Returns coordinate columns.
RMat fixed_algebra_from_ad(const AlgebraElement& x, const Tolerances& tol);

/// Decides whether the span of the given coordinate columns is a compactly
/// embedded subalgebra: searches the space of quadratic forms invariant
/// under every ad(b) for a positive definite representative and certifies
/// the result with a Cholesky factorization.
bool is_compactly_embedded(const DescPtr& alg, const RMat& subalg_coords,
                           const Tolerances& tol, Rng& rng);

/// Torus angle coordinates of a *compact algebra element* x, i.e. the unique
/// sorted angle vector a with x conjugate to torus(a).  Exact analogue of
/// torus_representative one level down; no 2*pi reduction is involved, so
/// the result is also the correct principal datum for quasimorphism slopes.
RVec compact_torus_angles(const AlgebraElement& x, const Tolerances& tol);

/// Cartan-aligned splitting of an elliptic element: g = exp(y) k exp(-y)
/// with y in p and k in the maximal compact subgroup K.
struct PolarSplit {
  AlgebraElement y;
  GroupElement k;
  RVec angles;  ///< torus angles of k (same as torus_representative(g))
};

PolarSplit polar_split(const GroupElement& g, const Tolerances& tol);

}  // namespace elliptica
