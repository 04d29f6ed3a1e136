#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elliptica/matutil.hpp"
#include "elliptica/tolerances.hpp"

namespace elliptica {

enum class Family { Sl2, Sp, Su, Heisenberg3 };

struct LieAlgebraDescriptor;
using DescPtr = std::shared_ptr<const LieAlgebraDescriptor>;

/// Immutable description of one supported Lie algebra in a fixed matrix
/// realization with a fixed ordered basis.  All elements carry a pointer to
/// their descriptor; operations require matching descriptors.
struct LieAlgebraDescriptor {
  Family family = Family::Sl2;
  std::string name;      ///< e.g. "sl2", "sp4", "su(2,1)"
  int n = 0;             ///< sp2n block count (0 otherwise)
  int p = 0, q = 0;      ///< su(p,q) signature (0 otherwise)
  int ambient = 0;       ///< defining matrix size
  int dim = 0;           ///< real dimension

  std::vector<CMat> basis;      ///< ordered basis matrices
  std::vector<RMat> ad_basis;   ///< ad of each basis element on coordinates
  RMat killing;                 ///< Killing form Gram matrix
  RMat theta;                   ///< Cartan involution on coordinates
  RMat proj_k, proj_p;          ///< +1 / -1 eigenprojectors of theta

  RMat basis_mat;  ///< realified basis, (2*ambient^2) x dim
  Eigen::ColPivHouseholderQR<RMat> coord_qr;

  bool is_real_family() const { return family != Family::Su; }
  bool is_group_family() const { return family != Family::Heisenberg3; }

  /// Least-squares coordinates of a matrix in the basis; optionally reports
  /// the fit residual (Frobenius).
  RVec coordinates_of(const CMat& m, double* residual = nullptr) const;

  CMat matrix_of(const RVec& coords) const;

  /// Indefinite form defining the group: J for sl2/sp2n, I_{p,q} for su(p,q).
  CMat form() const;

  /// Cartan involution applied to a matrix.
  CMat theta_matrix(const CMat& m) const;
};

/// Factory with cache.  Accepted names: "sl2", "sp2", "sp4", "sp6",
/// "su(p,q)" with p,q >= 1 and p+q <= 4, and the diagnostic fixture
/// "heisenberg3".
DescPtr make_algebra(const std::string& name);

/// Names of all group-capable families, for test sweeps.
std::vector<std::string> group_family_names();

// ---------------------------------------------------------------------------

struct AlgebraElement {
  DescPtr alg;
  RVec coords;
  CMat matrix;

  double norm() const { return coords.norm(); }
};

AlgebraElement element_from_coords(const DescPtr& alg, const RVec& coords);
AlgebraElement element_from_matrix(const DescPtr& alg, const CMat& m,
                                   const Tolerances& tol = default_tolerances());
AlgebraElement element_zero(const DescPtr& alg);
AlgebraElement element_add(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement element_scale(double s, const AlgebraElement& x);

struct GroupElement {
  DescPtr alg;
  CMat matrix;
};

/// Validates the defining relations (residual relative to max(1, |g|^2)).
GroupElement group_from_matrix(const DescPtr& alg, const CMat& m,
                               const Tolerances& tol = default_tolerances());
GroupElement group_identity(const DescPtr& alg);
GroupElement group_exp(const AlgebraElement& x,
                       const Tolerances& tol = default_tolerances());
GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_inv(const GroupElement& g);
GroupElement group_conj(const GroupElement& h, const GroupElement& g);

// --------------------------------------------------------------------------
// Bracket-level operations

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// ad(x) as a real operator on coordinates.
RMat ad_matrix(const AlgebraElement& x);

double killing_form(const AlgebraElement& x, const AlgebraElement& y);

/// Ad(g) on coordinates.  Throws std::invalid_argument when conjugation by g
/// does not preserve the algebra span (residual > group tolerance).
RMat adjoint_matrix(const GroupElement& g,
                    const Tolerances& tol = default_tolerances());

/// Semisimplicity of an operator: geometric multiplicity equals clustered
/// algebraic multiplicity for every eigenvalue cluster.
bool operator_is_semisimple(const CMat& A, const Tolerances& tol);

/// x compact: ad(x) semisimple with purely imaginary spectrum.
bool is_compact_element(const AlgebraElement& x,
                        const Tolerances& tol = default_tolerances());

/// Commuting refinement x = x_e + x_h + x_n (elliptic / hyperbolic /
/// nilpotent), computed from the clustered eigenstructure of the defining
/// matrix.  Only for group families (matrix realization is faithful there).
struct JordanParts {
  AlgebraElement elliptic;
  AlgebraElement hyperbolic;
  AlgebraElement nilpotent;
  double eigenbasis_cond = 0.0;
};
JordanParts jordan_decompose(const AlgebraElement& x,
                             const Tolerances& tol = default_tolerances());

/// Diagnostic pair: (Spec(ad x) purely imaginary, nilpotent ad-part maps
/// into the center).  Together they are *necessary* conditions for bounded
/// one-parameter flow but not sufficient for compactness; compare with
/// is_compact_element.
struct FlowOrbitDiagnostic {
  bool spectrum_imaginary = false;
  bool nilpotent_into_center = false;
};
FlowOrbitDiagnostic flow_orbit_diagnostic(
    const AlgebraElement& x, const Tolerances& tol = default_tolerances());

}  // namespace elliptica
