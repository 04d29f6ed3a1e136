#pragma once

#include <Eigen/Dense>
#include <vector>

namespace elliptica {

using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Column-style Hermite normal form of an integer matrix.
///
/// Result H spans the same column lattice as A and satisfies, for each pivot
/// (row r_j, column j): H(r_j, j) > 0, entries left of the pivot in row r_j
/// lie in [0, H(r_j, j)), entries above the pivot in column j are zero, and
/// pivot rows strictly increase with the column index.  `pivots` receives the
/// pivot row of each nonzero column.
IntMat hermite_normal_form(IntMat A, std::vector<int>* pivots = nullptr);

/// Membership of v in the column lattice of H (H must be in HNF).
bool lattice_contains(const IntMat& H, const std::vector<int>& pivots,
                      IntVec v);

/// Canonical representative of the coset v + L(H): each pivot coordinate is
/// reduced into [0, pivot).  Constant on cosets; used to compare component
/// classes.
IntVec coset_reduce(const IntMat& H, const std::vector<int>& pivots, IntVec v);

}  // namespace elliptica
