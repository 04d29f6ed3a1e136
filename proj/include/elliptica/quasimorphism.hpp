#pragma once

#include "elliptica/causal.hpp"
#include "elliptica/ellipticity.hpp"
#include "elliptica/rng.hpp"

#include <string>
#include <vector>

namespace elliptica {

/// Closed-form value of the homogeneous quasimorphism on an algebra element:
/// the mean noncompact-root value of the torus form of the elliptic Jordan
/// part (the hyperbolic and nilpotent parts contribute zero).  Normalized so
/// that the central direction z has value 1 per unit time:
/// f(exp(t z)) = t.
double f_gw_closed_form(const AlgebraElement& x,
                        const Tolerances& tol = default_tolerances());

/// Homogenized estimate along the piecewise-exponential path spelled by
/// `word`: continuous lift of the rotation phase (argument of the complex
/// determinant of the unitary polar factor) along the path repeated m times,
/// divided by m.  Estimate at m = 512 with the m = 256 value as a Richardson
/// step; the error bound is the difference of the two.
/// Symplectic families only (sl2, sp2n).
struct GwValue {
  double value = 0.0;
  double error_bound = 0.0;
  int power = 0;  ///< m used for the returned estimate
};

GwValue f_gw_homogenized(const std::vector<AlgebraElement>& word,
                         const Tolerances& tol = default_tolerances());

/// Value on an elliptic group element through its torus representative with
/// angles reduced to [0, 2 pi).  On the basic component this is the correct
/// branch of the quasimorphism, continuous and monotone along causal curves.
double f_gw_basic(const GroupElement& g,
                  const Tolerances& tol = default_tolerances());

/// Empirical defect sup |f(gh) - f(g) - f(h)| over random exponential pairs
/// with coordinate norm <= norm_cap; f(gh) is evaluated in closed form on
/// the principal logarithm of the product (pairs whose product leaves the
/// principal branch are resampled).
double quasimorphism_defect(const DescPtr& alg, int pairs, double norm_cap,
                            Rng& rng,
                            const Tolerances& tol = default_tolerances());

/// Non-decrease (within monotone_slack) of the closed-form quasimorphism
/// branch along the samples of a causal curve.  Tube-type symplectic
/// families only.
bool f_gw_monotone_check(const CausalCurve& curve,
                         const Tolerances& tol = default_tolerances());

/// Möbius action of sl2 on the real projective line (IEEE infinities are
/// used for the point at infinity).
double mobius_act(const GroupElement& g, double point);

/// Rotation-phase section from the Iwasawa circle function:
/// chi(g) = 2 * atan(g.0), valued in (-pi, pi].  Near the identity this is
/// the continuous lift of the rotation phase.
double chi_iwa(const GroupElement& g);

}  // namespace elliptica
