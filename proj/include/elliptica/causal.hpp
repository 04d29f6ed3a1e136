#pragma once

#include "elliptica/components.hpp"
#include "elliptica/ellipticity.hpp"
#include "elliptica/rng.hpp"

#include <string>
#include <vector>

namespace elliptica {

/// Membership query against the maximal invariant cone W^max.
struct ConeQuery {
  bool member = false;    ///< eigen/root margin >= -psd_tol
  bool interior = false;  ///< margin >= interior_margin
  double margin = 0.0;    ///< min eigenvalue of J*x (matrix route) or min
                          ///< noncompact root value (torus route)
  std::string route;      ///< "matrix" or "torus"
};

/// Symplectic families: J*x must be symmetric PSD (matrix certificate).
/// su(p,q): supported for compact elements via torus reduction; noncompact
/// su input throws invalid_argument (no matrix certificate implemented).
ConeQuery in_max_cone(const AlgebraElement& x,
                      const Tolerances& tol = default_tolerances());

/// Krein data of one eigenvalue cluster of a symplectic matrix with
/// unit-modulus spectrum.  kappa(v) = i v* J v restricted to the eigenspace;
/// `positive_angles` lists arg(lambda) in [0, 2 pi) once per kappa-positive
/// basis vector.  Clusters within 1e-8 of +/-1 are conjugate-collided and
/// reported indefinite.
struct KreinEntry {
  Cplx eigenvalue;
  int multiplicity = 0;
  int positive = 0;
  int negative = 0;
  bool indefinite = false;
  std::vector<double> positive_angles;
};

struct KreinReport {
  std::vector<KreinEntry> entries;
  bool collision = false;  ///< some cluster sits within 1e-8 of +/-1
  int total_positive = 0;
};

/// Krein signature decomposition of an elliptic symplectic element.
/// Only for sl2/sp2n (the invariant form is J); su input throws.
KreinReport krein_signatures(const GroupElement& g,
                             const Tolerances& tol = default_tolerances());

/// Membership in the identity component of the stably elliptic set of the
/// matrix group (basic class under the matrix kernel lattice).  Returns
/// false for non-stably-elliptic input.  For symplectic families the alcove
/// classification is cross-checked against the Krein-spectral criterion and
/// disagreement throws InvariantViolation.
bool in_basic_component(const GroupElement& g,
                        const Tolerances& tol = default_tolerances());

/// Time function on the basic alcove: sum over positive noncompact roots of
/// ln(alpha(x)) - ln(2 pi - alpha(x)).  Input must lie in the basic alcove.
double tau_on_torus(const RootDatum& datum, const RVec& angles,
                    const Tolerances& tol = default_tolerances());

/// Conjugation-invariant extension to the basic component of the group.
/// Throws invalid_argument when g is outside the basic component.
double tau(const GroupElement& g,
           const Tolerances& tol = default_tolerances());

/// Boundary crossing of t -> exp(t x) g out of the basic component in the
/// given direction (+1 forward, -1 backward).  Bisection refines the
/// bracketing interval below 1e-8; the returned value is its midpoint.
/// Preconditions: x in W^max, nonzero; g in the basic component.
/// Throws std::runtime_error when no crossing occurs within |t| <= 1e6.
double exit_time(const AlgebraElement& x, const GroupElement& g,
                 int direction, const Tolerances& tol = default_tolerances());

/// Both crossings, with the sign pattern backward < 0 < forward verified.
struct ExitTimes {
  double backward = 0.0;
  double forward = 0.0;
};
ExitTimes exit_times(const AlgebraElement& x, const GroupElement& g,
                     const Tolerances& tol = default_tolerances());

/// Piecewise-exponential causal curve: sample i+1 equals
/// sample_i * exp((t_{i+1} - t_i) * velocity_i).
struct CurveSample {
  double t = 0.0;
  GroupElement g;
  AlgebraElement velocity;  ///< right-logarithmic velocity on [t_i, t_{i+1}]
};

struct CausalCurve {
  std::vector<CurveSample> samples;
};

/// Random causal curve from `start`: velocities are interior cone elements
/// (torus samples with strictly positive root values, conjugated by random
/// group elements), steps of size dt.
CausalCurve generate_causal_curve(const GroupElement& start, int steps,
                                  double dt, Rng& rng,
                                  const Tolerances& tol = default_tolerances());

/// Per-sample causality verdicts and step-reconstruction residuals.
struct CausalCheckItem {
  double t = 0.0;
  bool member = false;
  bool interior = false;
  double margin = 0.0;
  double step_residual = 0.0;
};

struct CausalCheckReport {
  std::vector<CausalCheckItem> items;
  bool all_causal = false;
  double max_step_residual = 0.0;
};

CausalCheckReport causal_check(const CausalCurve& curve,
                               const Tolerances& tol = default_tolerances());

/// Compact-level shadow of the curve: the K-parts of the polar splittings,
/// checked to form a causal curve for the compact cone (discrete
/// logarithmic velocities between consecutive K-parts).
CausalCheckReport causal_check_k_level(const CausalCurve& curve,
                                       const Tolerances& tol = default_tolerances());

}  // namespace elliptica
