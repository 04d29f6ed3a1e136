#include "elliptica/rational.hpp"

namespace elliptica {

bool rat_solve(RatMat A, RatVec b, RatVec& x) {
  const int n = static_cast<int>(A.size());
  if (n == 0) {
    x.clear();
    return true;
  }
  const int m = static_cast<int>(A[0].size());
  if (n < m) return false;

  std::vector<int> perm(m, -1);
  int row = 0;
  for (int col = 0; col < m && row < n; ++col) {
    int pivot = -1;
    for (int r = row; r < n; ++r) {
      if (A[r][col].sign() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return false;  // rank-deficient in this column
    std::swap(A[row], A[pivot]);
    std::swap(b[row], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == row || A[r][col].sign() == 0) continue;
      const Rat f = A[r][col] / A[row][col];
      for (int c = col; c < m; ++c) A[r][c] -= f * A[row][c];
      b[r] -= f * b[row];
    }
    perm[col] = row;
    ++row;
  }
  // Consistency of the remaining rows.
  for (int r = row; r < n; ++r) {
    if (b[r].sign() != 0) return false;
  }
  x.assign(m, Rat(0));
  for (int col = 0; col < m; ++col) {
    x[col] = b[perm[col]] / A[perm[col]][col];
  }
  return true;
}

}  // namespace elliptica
