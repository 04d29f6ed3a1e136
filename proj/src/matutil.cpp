#include "elliptica/matutil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "elliptica/errors.hpp"

namespace elliptica {

RVec realify(const CMat& m) {
  RVec v(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      v(k++) = m(r, c).real();
      v(k++) = m(r, c).imag();
    }
  }
  return v;
}

std::vector<int> cluster_values(const CVec& vals, double radius,
                                std::vector<Cplx>* means) {
  const int n = static_cast<int>(vals.size());
  std::vector<int> label(n, -1);
  std::vector<Cplx> seeds;
  std::vector<Cplx> sums;
  std::vector<int> counts;
  for (int i = 0; i < n; ++i) {
    for (size_t c = 0; c < seeds.size(); ++c) {
      if (std::abs(vals(i) - seeds[c]) <= radius) {
        label[i] = static_cast<int>(c);
        break;
      }
    }
    if (label[i] < 0) {
      label[i] = static_cast<int>(seeds.size());
      seeds.push_back(vals(i));
      sums.push_back(Cplx(0, 0));
      counts.push_back(0);
    }
    sums[label[i]] += vals(i);
    counts[label[i]] += 1;
  }
  if (means) {
    means->resize(seeds.size());
    for (size_t c = 0; c < seeds.size(); ++c) {
      (*means)[c] = sums[c] / static_cast<double>(counts[c]);
    }
  }
  return label;
}

namespace {

// A defective eigenvalue perturbs into a cloud of computed eigenvalues whose
// spread (~eps^{1/k} for a k-fold Jordan block) can exceed any fixed cluster
// radius.  Sub-splitting such a cloud yields clusters whose generalized
// eigenspaces nearly coincide; overlaps above this bound trigger a merge.
constexpr double kSubspaceMergeOverlap = 1.0 - 1e-6;

// Floor of the rank cut used for cluster eigenspaces, relative to |A|.  It
// must sit well above the eigensolver noise (~eps times the eigenvalue
// condition number) and well below any resolvable spectral gap.
constexpr double kPowerNoise = 1e-11;

}  // namespace

SpectralSplit spectral_split(const CMat& A, const Tolerances& tol) {
  const int n = static_cast<int>(A.rows());
  Eigen::ComplexEigenSolver<CMat> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw InvariantViolation("spectral_split: eigen solver failed");
  }
  const CVec eigs = es.eigenvalues();
  std::vector<int> label = cluster_values(eigs, tol.cluster_radius, nullptr);

  for (;;) {
    // Compact labels and recompute cluster means and multiplicities.
    std::vector<int> remap(n, -1);
    int nc = 0;
    for (int i = 0; i < n; ++i) {
      if (remap[label[i]] < 0) remap[label[i]] = nc++;
    }
    for (int i = 0; i < n; ++i) label[i] = remap[label[i]];
    std::vector<Cplx> means(nc, Cplx(0, 0));
    std::vector<int> mult(nc, 0);
    for (int i = 0; i < n; ++i) {
      means[label[i]] += eigs(i);
      mult[label[i]] += 1;
    }
    for (int c = 0; c < nc; ++c) means[c] /= static_cast<double>(mult[c]);

    const auto merge = [&](int keep, int drop) {
      for (int i = 0; i < n; ++i) {
        if (label[i] == drop) label[i] = keep;
      }
    };

    // Generalized eigenspace per cluster: null((A - mu)^p).  Power up
    // gradually: a semisimple cluster resolves at p = 1, where the rank gap
    // is widest, and only genuinely defective clusters need higher powers.
    // The first-power cut stays below half the distance to the nearest other
    // cluster (or it would absorb that cluster's directions when two
    // eigenvalue groups sit close together); higher-power cuts track the
    // rounding noise of the powered matrix, ~eps * |A| * |A - mu|^{p-1},
    // because the powered norm itself shrinks like the p-th power of the
    // cluster separation.  A dimension mismatch at the final power means the
    // clustering is too fine, so coalesce with the nearest cluster and retry.
    const double abs_scale = std::max(1.0, A.norm());
    std::vector<CMat> bases(nc);
    int bad = -1;
    for (int c = 0; c < nc && bad < 0; ++c) {
      double gap = std::numeric_limits<double>::infinity();
      for (int d = 0; d < nc; ++d) {
        if (d != c) gap = std::min(gap, std::abs(means[d] - means[c]));
      }
      const CMat shifted = A - means[c] * CMat::Identity(n, n);
      const double step = shifted.norm();
      CMat P = shifted;
      double cut = std::max(kPowerNoise * abs_scale,
                            std::min(0.5 * gap, tol.rank_tol * std::max(1.0, step)));
      bool ok = false;
      for (int p = 1; p <= mult[c]; ++p) {
        bases[c] = null_space(P, cut);
        const int dim = static_cast<int>(bases[c].cols());
        if (dim == mult[c]) {
          ok = true;
          break;
        }
        if (dim > mult[c]) break;  // cut already too coarse; powering widens it
        P = P * shifted;
        cut = kPowerNoise * abs_scale * std::pow(step, p);
      }
      if (!ok) bad = c;
    }
    if (bad >= 0) {
      if (nc == 1) {
        throw BoundaryUnstableError(
            "spectral_split: generalized eigenspace dimension does not match "
            "clustered multiplicity (ambiguous clustering)");
      }
      int nearest = -1;
      double dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < nc; ++c) {
        if (c == bad) continue;
        const double d = std::abs(means[c] - means[bad]);
        if (d < dist) {
          dist = d;
          nearest = c;
        }
      }
      merge(nearest, bad);
      continue;
    }

    int oa = -1;
    int ob = -1;
    double worst = 0.0;
    for (int c = 0; c < nc; ++c) {
      for (int d = c + 1; d < nc; ++d) {
        const CMat gram = bases[c].adjoint() * bases[d];
        const Eigen::JacobiSVD<CMat> osvd(gram);
        const double overlap = osvd.singularValues()(0);
        if (overlap > worst) {
          worst = overlap;
          oa = c;
          ob = d;
        }
      }
    }
    if (worst > kSubspaceMergeOverlap) {
      merge(oa, ob);
      continue;
    }

    SpectralSplit out;
    out.V.resize(n, n);
    out.means = means;
    out.sizes = mult;
    int col = 0;
    for (int c = 0; c < nc; ++c) {
      out.V.block(0, col, n, mult[c]) = bases[c];
      col += mult[c];
    }
    Eigen::JacobiSVD<CMat> svd(out.V);
    const double smin = svd.singularValues()(n - 1);
    out.cond = smin > 0 ? svd.singularValues()(0) / smin
                        : std::numeric_limits<double>::infinity();
    if (out.cond > tol.cond_limit) {
      throw BoundaryUnstableError(
          "spectral_split: eigenbasis conditioning exceeds limit");
    }
    out.V_inv = out.V.partialPivLu().solve(CMat::Identity(n, n));
    return out;
  }
}

double cluster_rank_cut(const std::vector<Cplx>& means, size_t c, double scale,
                        const Tolerances& tol) {
  double gap = std::numeric_limits<double>::infinity();
  for (size_t d = 0; d < means.size(); ++d) {
    if (d != c) gap = std::min(gap, std::abs(means[d] - means[c]));
  }
  return std::max(1e-12 * scale, std::min(0.5 * gap, tol.rank_tol * scale));
}

bool conjugate_cluster_separate(const std::vector<Cplx>& means, size_t c) {
  const Cplx mu = means[c];
  const double self = std::abs(mu - std::conj(mu));
  for (size_t d = 0; d < means.size(); ++d) {
    if (d != c && std::abs(means[d] - std::conj(mu)) < self) return true;
  }
  return false;
}

CMat unitary_polar_factor(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMat hermitian_polar_factor(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.singularValues().asDiagonal() *
         svd.matrixU().adjoint();
}

namespace {

template <typename Mat>
Mat null_space_impl(const Mat& A, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol) ++rank;
  }
  return svd.matrixV().rightCols(A.cols() - rank);
}

}  // namespace

RMat null_space(const RMat& A, double rank_tol) {
  return null_space_impl(A, rank_tol);
}

CMat null_space(const CMat& A, double rank_tol) {
  return null_space_impl(A, rank_tol);
}

RMat column_space(const RMat& A, double rank_tol) {
  Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace elliptica
