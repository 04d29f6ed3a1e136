#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "elliptica/tolerances.hpp"

namespace elliptica {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Cplx = std::complex<double>;

/// Stack real and imaginary parts of a matrix into one real vector.
RVec realify(const CMat& m);

/// Greedy clustering of eigenvalues: two values land in the same cluster when
/// they are within `radius` of the cluster seed.  Returns per-value cluster
/// ids; `means` receives the cluster averages.
std::vector<int> cluster_values(const CVec& vals, double radius,
                                std::vector<Cplx>* means);

/// Block diagonalization of A by clustered generalized eigenspaces:
/// A = V * blockdiag(B_c) * V^-1 where Spec(B_c) is one eigenvalue cluster.
struct SpectralSplit {
  CMat V;                       ///< columns: generalized eigenvectors
  CMat V_inv;
  std::vector<int> sizes;       ///< block sizes (algebraic multiplicities)
  std::vector<Cplx> means;      ///< cluster mean eigenvalues
  double cond = 0.0;            ///< condition number of V
};
SpectralSplit spectral_split(const CMat& A, const Tolerances& tol);

/// Rank cut for the eigenspace at means[c]: half the distance to the nearest
/// other cluster mean (so a close-by cluster is not absorbed), clamped to
/// [1e-12 * scale, rank_tol * scale].
double cluster_rank_cut(const std::vector<Cplx>& means, size_t c, double scale,
                        const Tolerances& tol);

/// True when the conjugate of means[c] landed in a different cluster, i.e.
/// some other cluster sits closer to conj(means[c]) than means[c] itself
/// does.  Distinguishes a genuinely real (self-conjugate) eigenvalue cluster
/// from a conjugate pair that has approached the real axis but is still
/// resolved.
bool conjugate_cluster_separate(const std::vector<Cplx>& means, size_t c);

/// Unitary polar factor of an invertible matrix via SVD (no squaring, so it
/// stays finite for very ill-conditioned inputs).
CMat unitary_polar_factor(const CMat& m);

/// Positive-definite polar factor  m = H * U  with H hermitian PD.
CMat hermitian_polar_factor(const CMat& m);

/// Orthonormal basis of the null space of A at the given absolute/relative
/// threshold (columns of the result).
RMat null_space(const RMat& A, double rank_tol);
CMat null_space(const CMat& A, double rank_tol);

/// Orthonormal basis of the column space of A at the given threshold.
RMat column_space(const RMat& A, double rank_tol);

}  // namespace elliptica
