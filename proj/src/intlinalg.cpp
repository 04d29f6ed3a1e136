#include "elliptica/intlinalg.hpp"

#include <stdexcept>

namespace elliptica {

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

IntMat hermite_normal_form(IntMat A, std::vector<int>* pivots_out) {
  const int rows = static_cast<int>(A.rows());
  int cols = static_cast<int>(A.cols());
  std::vector<int> pivots;
  int lead = 0;  // next column to place a pivot in
  for (int r = 0; r < rows && lead < cols; ++r) {
    // Clear row r across columns >= lead by gcd elimination.
    for (int c = lead + 1; c < cols; ++c) {
      while (A(r, c) != 0) {
        if (A(r, lead) == 0) {
          A.col(lead).swap(A.col(c));
          continue;
        }
        const long long q = floor_div(A(r, c), A(r, lead));
        A.col(c) -= q * A.col(lead);
        if (A(r, c) != 0) A.col(lead).swap(A.col(c));
      }
    }
    if (A(r, lead) == 0) continue;  // no pivot in this row
    if (A(r, lead) < 0) A.col(lead) = -A.col(lead);
    // Reduce the pivot row entries of earlier columns into [0, pivot).
    for (int c = 0; c < lead; ++c) {
      const long long q = floor_div(A(r, c), A(r, lead));
      if (q != 0) A.col(c) -= q * A.col(lead);
    }
    pivots.push_back(r);
    ++lead;
  }
  // Drop zero columns beyond the pivot count.
  IntMat H = A.leftCols(lead);
  if (pivots_out) *pivots_out = pivots;
  return H;
}

bool lattice_contains(const IntMat& H, const std::vector<int>& pivots,
                      IntVec v) {
  for (int j = 0; j < H.cols(); ++j) {
    const int r = pivots[j];
    if (v(r) % H(r, j) != 0) return false;
    v -= (v(r) / H(r, j)) * H.col(j);
  }
  return v.isZero();
}

IntVec coset_reduce(const IntMat& H, const std::vector<int>& pivots,
                    IntVec v) {
  for (int j = 0; j < H.cols(); ++j) {
    const int r = pivots[j];
    const long long q = floor_div(v(r), H(r, j));
    if (q != 0) v -= q * H.col(j);
  }
  return v;
}

}  // namespace elliptica
