#pragma once

#include <stdexcept>
#include <string>

namespace elliptica {

/// Central numeric tolerance profile.  One instance is threaded through every
/// module so that a single override (CLI flag or test fixture) retunes the
/// whole pipeline consistently.
struct Tolerances {
  double basis_residual = 1e-10;    ///< structure-constant / Jacobi residuals
  double coord_residual = 1e-10;    ///< coordinate fit of matrices in the basis
  double group_residual = 1e-9;     ///< defining relations of the group
  double cert_residual = 1e-8;      ///< conjugation / factorization certificates
  double cluster_radius = 1e-8;     ///< eigenvalue clustering radius
  double rank_tol = 1e-8;           ///< rank decisions for null spaces
  double semisimple_tol = 1e-8;     ///< operator semisimplicity test
  double spec_imag_tol = 1e-8;      ///< |Re lambda| bound for compact elements
  double unit_circle_tol = 1e-8;    ///< ||lambda|-1| bound for elliptic elements
  double jordan_tol = 1e-9;         ///< Jordan part invariants (brackets, recombination)
  double psd_tol = 1e-9;            ///< cone membership slack (eigenvalues >= -psd_tol)
  double interior_margin = 1e-7;    ///< strict cone interior margin
  double boundary_margin = 1e-7;    ///< minimum distance from alcove walls
  double pd_margin = 1e-6;          ///< PD-feasibility acceptance margin
  double step_consistency = 1e-6;   ///< causal-curve step reconstruction
  double cond_limit = 1e12;         ///< eigenbasis conditioning limit
  double monotone_slack = 1e-9;     ///< slack for monotonicity checks
  double homog_tol = 0.05;          ///< homogenized quasimorphism agreement
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace elliptica
