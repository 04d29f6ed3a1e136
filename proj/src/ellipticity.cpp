#include "elliptica/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "elliptica/errors.hpp"
#include "elliptica/matutil.hpp"

namespace elliptica {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double reduce_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

struct SpectrumVerdict {
  bool semisimple = false;
  bool unit = false;
  double deviation = 0.0;
};

/// Decides semisimplicity and unit-modulus spectrum of Ad(g) from the
/// defining matrix of g.  Conjugation by h distorts eigenvalue computations
/// on Ad(g) by cond(Ad h)^2 ~ cond(h)^4, while the defining matrix only pays
/// cond(h)^2, so this route stays reliable for much stronger conjugators.
/// The reduction is exact: Ad(g) is semisimple iff g is (the center has no
/// unipotents), and the Ad spectrum consists of eigenvalue products (real
/// symplectic families, Ad in Sym^2 V) or ratios (special unitary families,
/// Ad in V (x) V*), so its moduli are products or ratios of defining moduli.
SpectrumVerdict defining_spectrum_verdict(const GroupElement& g,
                                          const Tolerances& tol) {
  SpectrumVerdict out;
  const SpectralSplit sp = spectral_split(g.matrix, tol);
  const int n = static_cast<int>(g.matrix.rows());
  const double scale = std::max(1.0, g.matrix.norm());
  out.semisimple = true;
  for (size_t c = 0; c < sp.means.size(); ++c) {
    const CMat shifted = g.matrix - sp.means[c] * CMat::Identity(n, n);
    const CMat ns = null_space(shifted, cluster_rank_cut(sp.means, c, scale, tol));
    if (static_cast<int>(ns.cols()) != sp.sizes[c]) {
      out.semisimple = false;
      break;
    }
  }
  const size_t nc = sp.means.size();
  double dev = 0.0;
  for (size_t i = 0; i < nc; ++i) {
    const double mi = std::abs(sp.means[i]);
    for (size_t j = i; j < nc; ++j) {
      const double mj = std::abs(sp.means[j]);
      if (g.alg->family == Family::Su) {
        const double lo = std::max(std::min(mi, mj), 1e-300);
        dev = std::max(dev, std::max(mi, mj) / lo - 1.0);
      } else {
        dev = std::max(dev, std::abs(mi * mj - 1.0));
      }
    }
  }
  out.deviation = dev;
  out.unit = dev <= tol.unit_circle_tol * scale;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pointwise classification
// ---------------------------------------------------------------------------

EllipticityReport classify_element(const GroupElement& g, const Tolerances& tol) {
  EllipticityReport rep;
  if (g.alg->is_group_family()) {
    const SpectrumVerdict v = defining_spectrum_verdict(g, tol);
    rep.ad_semisimple = v.semisimple;
    rep.max_modulus_deviation = v.deviation;
    rep.spectrum_unit = v.unit;
  } else {
    RMat ad = adjoint_matrix(g, tol);
    const double scale = std::max(1.0, ad.norm());
    CMat adc = ad.cast<Cplx>();
    rep.ad_semisimple = operator_is_semisimple(adc, tol);
    Eigen::ComplexEigenSolver<CMat> es(adc, false);
    double worst = 0.0;
    for (int i = 0; i < adc.rows(); ++i) {
      worst = std::max(worst, std::abs(std::abs(es.eigenvalues()(i)) - 1.0));
    }
    rep.max_modulus_deviation = worst;
    rep.spectrum_unit = worst <= tol.unit_circle_tol * scale;
  }
  rep.elliptic = rep.ad_semisimple && rep.spectrum_unit;
  if (rep.elliptic) {
    RMat fix = fixed_point_algebra(g, tol);
    rep.fixed_dim = static_cast<int>(fix.cols());
    Rng rng(0x5eed1234ULL);
    rep.fixed_compactly_embedded = is_compactly_embedded(g.alg, fix, tol, rng);
    rep.stably_elliptic = rep.fixed_compactly_embedded;
    try {
      rep.torus = torus_representative(g, tol);
      DatumPtr datum = build_root_datum(g.alg);
      double wall = 1e300;
      for (int i : datum->delta_p_plus) {
        const double turns = datum->root(i).value(rep.torus->angles) / kTwoPi;
        wall = std::min(wall, std::abs(turns - std::round(turns)) * kTwoPi);
      }
      rep.min_wall_distance = wall;
    } catch (const BoundaryUnstableError&) {
      rep.torus.reset();
    }
  }
  return rep;
}

bool is_elliptic(const GroupElement& g, const Tolerances& tol) {
  if (g.alg->is_group_family()) {
    const SpectrumVerdict v = defining_spectrum_verdict(g, tol);
    return v.semisimple && v.unit;
  }
  RMat ad = adjoint_matrix(g, tol);
  const double scale = std::max(1.0, ad.norm());
  Eigen::ComplexEigenSolver<CMat> es(ad.cast<Cplx>(), false);
  for (int i = 0; i < ad.rows(); ++i) {
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) > tol.unit_circle_tol * scale) {
      return false;
    }
  }
  return operator_is_semisimple(ad.cast<Cplx>(), tol);
}

bool is_stably_elliptic(const GroupElement& g, const Tolerances& tol) {
  return classify_element(g, tol).stably_elliptic;
}

RMat fixed_point_algebra(const GroupElement& g, const Tolerances& tol) {
  RMat ad = adjoint_matrix(g, tol);
  const double scale = std::max(1.0, ad.norm());
  // Rank cut for ker(Ad g - 1).  Near a wall the nearest other eigenvalue
  // cluster of Ad(g) approaches 1, and the cut must stay below half that
  // spectral gap or the almost-fixed directions leak into the result.
  double cut = tol.rank_tol * scale;
  try {
    const SpectralSplit sp = spectral_split(ad.cast<Cplx>(), tol);
    double gap = std::numeric_limits<double>::infinity();
    for (const Cplx& mu : sp.means) {
      const double d = std::abs(mu - Cplx(1.0, 0.0));
      if (d > 1e-12 * scale) gap = std::min(gap, d);
    }
    cut = std::max(1e-12 * scale, std::min(0.5 * gap, cut));
  } catch (const BoundaryUnstableError&) {
    // Ambiguous clustering: fall back to the profile-level cut.
  }
  RMat shifted = ad - RMat::Identity(ad.rows(), ad.cols());
  RMat fix = null_space(shifted, cut);
  // Bracket closure of the fixed subalgebra; failure means the rank decision
  // above broke down, which must surface rather than silently misclassify.
  const int k = static_cast<int>(fix.cols());
  for (int i = 0; i < k; ++i) {
    const AlgebraElement xi = element_from_coords(g.alg, fix.col(i));
    for (int j = i + 1; j < k; ++j) {
      const AlgebraElement xj = element_from_coords(g.alg, fix.col(j));
      const RVec br = bracket(xi, xj).coords;
      const RVec res = br - fix * (fix.transpose() * br);
      if (res.norm() > tol.cert_residual * std::max(1.0, br.norm())) {
        throw InvariantViolation(
            "fixed_point_algebra: basis is not bracket-closed "
            "(tolerance breakdown)");
      }
    }
  }
  return fix;
}

RMat fixed_algebra_from_ad(const AlgebraElement& x, const Tolerances& tol) {
  RMat ad = ad_matrix(x);
  const int d = static_cast<int>(ad.rows());
  Eigen::ComplexEigenSolver<CMat> es(ad.cast<Cplx>(), false);
  double rad = 0.0;
  for (int i = 0; i < d; ++i) rad = std::max(rad, std::abs(es.eigenvalues()(i)));
  const int nmax = static_cast<int>(std::ceil(rad / kTwoPi)) + 1;
  RMat stacked(d, 0);
  RMat ad2 = ad * ad;
  for (int n = 0; n <= nmax; ++n) {
    RMat op = ad2 + (kTwoPi * n) * (kTwoPi * n) * RMat::Identity(d, d);
    RMat ker = null_space(op, tol.rank_tol * std::max(1.0, op.norm()));
    if (ker.cols() == 0) continue;
    RMat grown(d, stacked.cols() + ker.cols());
    grown << stacked, ker;
    stacked = grown;
  }
  return column_space(stacked, tol.rank_tol);
}

// ---------------------------------------------------------------------------
// Compact embedding via invariant positive definite forms
// ---------------------------------------------------------------------------

bool is_compactly_embedded(const DescPtr& alg, const RMat& subalg_coords,
                           const Tolerances& tol, Rng& rng) {
  const int d = alg->dim;
  const int k = static_cast<int>(subalg_coords.cols());
  if (k == 0) return true;

  // Orthonormal basis of symmetric matrices (Frobenius-isometric vec map).
  std::vector<RMat> sym_basis;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      RMat s = RMat::Zero(d, d);
      if (i == j) {
        s(i, i) = 1.0;
      } else {
        s(i, j) = s(j, i) = 1.0 / std::sqrt(2.0);
      }
      sym_basis.push_back(s);
    }
  }
  const int sdim = static_cast<int>(sym_basis.size());

  std::vector<RMat> ads;
  for (int j = 0; j < k; ++j) {
    ads.push_back(ad_matrix(element_from_coords(alg, subalg_coords.col(j))));
  }

  // Invariance constraints: ad^T P + P ad = 0 for every basis ad.
  RMat M(k * d * d, sdim);
  for (int t = 0; t < sdim; ++t) {
    for (int j = 0; j < k; ++j) {
      RMat r = ads[j].transpose() * sym_basis[t] + sym_basis[t] * ads[j];
      M.block(j * d * d, t, d * d, 1) =
          Eigen::Map<RVec>(r.data(), d * d);
    }
  }
  // Null space via the Gram matrix.  Forming M^T M squares the spectrum but
  // also floors resolvable eigenvalues at ~eps * gmax, so the cut must sit
  // well above that floor; rank_tol * gmax keeps every true solution while
  // staying far below the smallest genuine nonzero Gram eigenvalue.
  RMat gram = M.transpose() * M;
  Eigen::SelfAdjointEigenSolver<RMat> ges(gram);
  const double gmax = std::max(1.0, ges.eigenvalues().maxCoeff());
  const double thresh = tol.rank_tol * gmax;
  std::vector<int> null_idx;
  for (int i = 0; i < sdim; ++i) {
    if (ges.eigenvalues()(i) <= thresh) null_idx.push_back(i);
  }
  if (null_idx.empty()) return false;
  const int m = static_cast<int>(null_idx.size());
  std::vector<RMat> forms;
  for (int idx : null_idx) {
    RMat f = RMat::Zero(d, d);
    for (int t = 0; t < sdim; ++t) f += ges.eigenvectors()(t, idx) * sym_basis[t];
    forms.push_back(f);
  }

  auto lambda_min = [&](const RVec& c, RVec* grad) {
    RMat p = RMat::Zero(d, d);
    for (int t = 0; t < m; ++t) p += c(t) * forms[t];
    Eigen::SelfAdjointEigenSolver<RMat> es(p);
    if (grad) {
      RVec v = es.eigenvectors().col(0);
      grad->resize(m);
      for (int t = 0; t < m; ++t) (*grad)(t) = v.dot(forms[t] * v);
    }
    return es.eigenvalues()(0);
  };

  // lambda_min is concave and 1-homogeneous, so projected subgradient ascent
  // on the unit sphere has no spurious strict local maxima when a positive
  // definite invariant form exists.
  // Any value comfortably above the acceptance margin already certifies
  // feasibility (the Cholesky check below is the authority), so the search
  // can stop early on clear successes.
  const double early_exit = std::max(0.05, 10.0 * tol.pd_margin);
  auto ascend = [&](RVec c) {
    if (c.norm() < 1e-12) c = RVec::Ones(m);
    c.normalize();
    double best = lambda_min(c, nullptr);
    RVec best_c = c;
    for (int it = 0; it < 500 && best < early_exit; ++it) {
      RVec grad;
      double val = lambda_min(c, &grad);
      if (val > best) {
        best = val;
        best_c = c;
      }
      grad -= grad.dot(c) * c;
      double step = 0.5 / (1.0 + 0.02 * it);
      c = (c + step * grad).normalized();
    }
    return std::make_pair(best, best_c);
  };

  auto project = [&](const RMat& target) {
    RVec c(m);
    for (int t = 0; t < m; ++t) {
      c(t) = (forms[t].array() * target.array()).sum();
    }
    return c;
  };

  double best = -1e300;
  RVec best_c;
  std::vector<RVec> starts;
  starts.push_back(project(RMat::Identity(d, d)));
  starts.push_back(project((-(alg->killing * alg->theta)).eval()));
  for (int r = 0; r < 20; ++r) {
    RVec c(m);
    for (int t = 0; t < m; ++t) c(t) = rng.normal();
    starts.push_back(c);
  }
  for (auto& c0 : starts) {
    auto [val, cbest] = ascend(c0);
    if (val > best) {
      best = val;
      best_c = cbest;
    }
    if (best >= early_exit) break;
  }
  if (best < tol.pd_margin) return false;

  // Cholesky certificate with an explicit margin.
  RMat p = RMat::Zero(d, d);
  for (int t = 0; t < m; ++t) p += best_c(t) * forms[t];
  p /= p.norm();
  RMat shifted = p - 0.5 * tol.pd_margin * RMat::Identity(d, d);
  Eigen::LLT<RMat> llt(shifted);
  return llt.info() == Eigen::Success;
}

// ---------------------------------------------------------------------------
// Torus normal form
// ---------------------------------------------------------------------------

namespace {

struct AngleColumn {
  double angle = 0.0;
  CVec w;  // Krein/form normalized column
};

/// Symplectic-family construction: eigenvalue clusters of g are split by the
/// sign of the Krein form kappa(v) = i v* J v; the kappa-positive columns at
/// angle x and their conjugates at 2 pi - x yield a real symplectic
/// conjugator into the standard rotation torus.
TorusForm torus_rep_symplectic(const GroupElement& g, const Tolerances& tol,
                               const DatumPtr& datum) {
  const auto& alg = *g.alg;
  const int n2 = alg.ambient;
  const int n = n2 / 2;
  RMat gm = g.matrix.real();
  CMat gc = gm.cast<Cplx>();
  RMat jm = alg.form().real();
  CMat ijc = Cplx(0, 1) * jm.cast<Cplx>();

  Eigen::ComplexEigenSolver<CMat> es(gc, false);
  CVec evals = es.eigenvalues();
  std::vector<Cplx> means;
  cluster_values(evals, std::max(tol.cluster_radius, 1e-10), &means);
  const double scale = std::max(1.0, gm.norm());

  std::vector<AngleColumn> cols;
  for (size_t ci = 0; ci < means.size(); ++ci) {
    const Cplx mu = means[ci];
    if (std::abs(std::abs(mu) - 1.0) > 1e-6 * scale) {
      throw BoundaryUnstableError("torus form: eigenvalue off the unit circle");
    }
    const double cut = cluster_rank_cut(means, ci, scale, tol);
    if (!conjugate_cluster_separate(means, ci)) {
      // Real eigenvalue +/-1: build a symplectic basis of the real eigenspace.
      double mur = (mu.real() > 0) ? 1.0 : -1.0;
      double angle = (mur > 0) ? 0.0 : kPi;
      RMat eig_op = gm - mur * RMat::Identity(n2, n2);
      RMat r = null_space(eig_op, cut);
      if (r.cols() % 2 != 0) {
        throw BoundaryUnstableError("torus form: odd real eigenspace");
      }
      while (r.cols() > 0) {
        RVec alpha = r.col(0);
        // Prefer beta parallel to J*alpha (keeps the conjugator orthogonal
        // when g lies in the maximal compact subgroup).
        RVec jal = jm * alpha;
        RVec cand = r * (r.transpose() * jal);
        RVec beta0;
        if (cand.norm() > 0.3 && std::abs(alpha.dot(jm * cand)) > 0.1) {
          beta0 = cand;
        } else {
          int bj = -1;
          double bw = 0.0;
          for (int j = 1; j < r.cols(); ++j) {
            double w = std::abs(alpha.dot(jm * r.col(j)));
            if (w > bw) {
              bw = w;
              bj = j;
            }
          }
          if (bj < 0 || bw < 1e-8) {
            throw BoundaryUnstableError("torus form: degenerate symplectic pairing");
          }
          beta0 = r.col(bj);
        }
        double om = alpha.dot(jm * beta0);
        RVec beta = beta0 / (-om);  // now omega(alpha, beta) = -1
        AngleColumn ac;
        ac.angle = angle;
        ac.w = (alpha.cast<Cplx>() + Cplx(0, 1) * beta.cast<Cplx>()) / std::sqrt(2.0);
        cols.push_back(ac);
        // Symplectic reduction of the remaining basis.
        std::vector<RVec> rest;
        for (int j = 1; j < r.cols(); ++j) {
          RVec v = r.col(j);
          double wvb = v.dot(jm * beta);   // omega(v, beta)
          double wva = v.dot(jm * alpha);  // omega(v, alpha)
          RVec vp = v + wvb * alpha - wva * beta;
          rest.push_back(vp);
        }
        if (rest.empty()) {
          r = RMat(n2, 0);
        } else {
          RMat stacked(n2, static_cast<int>(rest.size()));
          for (int j = 0; j < stacked.cols(); ++j) stacked.col(j) = rest[j];
          RMat nr = column_space(stacked, tol.rank_tol);
          if (nr.cols() != r.cols() - 2) {
            throw BoundaryUnstableError("torus form: symplectic reduction lost rank");
          }
          r = nr;
        }
      }
    } else if (mu.imag() > 0) {
      CMat shiftc = gc - mu * CMat::Identity(n2, n2);
      CMat v = null_space(shiftc, cut);
      CMat gramm = v.adjoint() * ijc * v;
      CMat herm = 0.5 * (gramm + gramm.adjoint());
      Eigen::SelfAdjointEigenSolver<CMat> ges(herm);
      double phi = std::arg(mu);  // in (0, pi)
      for (int t = 0; t < ges.eigenvalues().size(); ++t) {
        double s = ges.eigenvalues()(t);
        if (std::abs(s) < 1e-8) {
          throw BoundaryUnstableError("torus form: Krein-degenerate eigenvalue");
        }
        CVec w = v * ges.eigenvectors().col(t);
        AngleColumn ac;
        if (s > 0) {
          ac.w = w / std::sqrt(s);
          ac.angle = phi;
        } else {
          ac.w = (w / std::sqrt(-s)).conjugate();
          ac.angle = kTwoPi - phi;
        }
        cols.push_back(ac);
      }
    }
    // Clusters with negative imaginary part are conjugates of handled ones.
  }

  if (static_cast<int>(cols.size()) != n) {
    throw BoundaryUnstableError("torus form: wrong number of Krein-positive columns");
  }
  std::stable_sort(cols.begin(), cols.end(),
                   [](const AngleColumn& a, const AngleColumn& b) {
                     return a.angle < b.angle;
                   });

  RMat qm(n2, n2);
  RVec x(n);
  for (int j = 0; j < n; ++j) {
    qm.col(j) = std::sqrt(2.0) * cols[j].w.real();
    qm.col(n + j) = std::sqrt(2.0) * cols[j].w.imag();
    x(j) = cols[j].angle;
  }
  double jres = (qm.transpose() * jm * qm - jm).norm();
  if (jres > tol.cert_residual * std::max(1.0, qm.squaredNorm())) {
    throw BoundaryUnstableError("torus form: conjugator is not symplectic");
  }

  TorusForm tf{group_from_matrix(g.alg, qm.cast<Cplx>(), tol), RVec()};
  if (alg.family == Family::Sl2) {
    RVec c(1);
    c(0) = 2.0 * x(0);  // sl2 angle coordinate doubles the rotation block angle
    tf.angles = c;
  } else {
    tf.angles = x;
  }

  CMat torus_exp = group_exp(datum->torus(tf.angles), tol).matrix;
  double rres = (gc * tf.q.matrix - tf.q.matrix * torus_exp).norm();
  if (rres > tol.cert_residual * std::max(1.0, scale * tf.q.matrix.norm())) {
    throw BoundaryUnstableError("torus form: conjugation residual too large");
  }
  return tf;
}

/// Indefinite-unitary construction: clusters are split by the sign of the
/// invariant hermitian form; form-positive columns carry the first p slots,
/// form-negative the last q.
TorusForm torus_rep_su(const GroupElement& g, const Tolerances& tol,
                       const DatumPtr& datum) {
  const auto& alg = *g.alg;
  const int n = alg.ambient;
  const int p = alg.p, q = alg.q;
  CMat gc = g.matrix;
  CMat h = alg.form();
  const double scale = std::max(1.0, gc.norm());

  Eigen::ComplexEigenSolver<CMat> es(gc, false);
  CVec evals = es.eigenvalues();
  std::vector<Cplx> means;
  cluster_values(evals, std::max(tol.cluster_radius, 1e-10), &means);

  std::vector<AngleColumn> pos, neg;
  for (size_t ci = 0; ci < means.size(); ++ci) {
    const Cplx mu = means[ci];
    if (std::abs(std::abs(mu) - 1.0) > 1e-6 * scale) {
      throw BoundaryUnstableError("torus form: eigenvalue off the unit circle");
    }
    CMat shiftc = gc - mu * CMat::Identity(n, n);
    CMat v = null_space(shiftc, cluster_rank_cut(means, ci, scale, tol));
    CMat gramm = v.adjoint() * h * v;
    CMat herm = 0.5 * (gramm + gramm.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> ges(herm);
    // Torus entries are exp(-i a); the angle coordinate is -arg(eigenvalue).
    double a = reduce_mod(-std::arg(mu), kTwoPi);
    for (int t = 0; t < ges.eigenvalues().size(); ++t) {
      double s = ges.eigenvalues()(t);
      if (std::abs(s) < 1e-8) {
        throw BoundaryUnstableError("torus form: form-degenerate eigenvalue");
      }
      AngleColumn ac;
      ac.angle = a;
      ac.w = v * ges.eigenvectors().col(t) / std::sqrt(std::abs(s));
      (s > 0 ? pos : neg).push_back(ac);
    }
  }
  if (static_cast<int>(pos.size()) != p || static_cast<int>(neg.size()) != q) {
    throw BoundaryUnstableError("torus form: signature split mismatch");
  }
  auto by_angle = [](const AngleColumn& a, const AngleColumn& b) {
    return a.angle < b.angle;
  };
  std::stable_sort(pos.begin(), pos.end(), by_angle);
  std::stable_sort(neg.begin(), neg.end(), by_angle);

  CMat qm(n, n);
  RVec full(n);
  for (int j = 0; j < p; ++j) {
    qm.col(j) = pos[j].w;
    full(j) = pos[j].angle;
  }
  for (int j = 0; j < q; ++j) {
    qm.col(p + j) = neg[j].w;
    full(p + j) = neg[j].angle;
  }
  // Normalize the determinant to 1 with a unit-modulus column scaling.
  Cplx det = qm.determinant();
  if (std::abs(det) < 0.5) {
    throw BoundaryUnstableError("torus form: conjugator nearly singular");
  }
  qm.col(n - 1) /= det / std::abs(det);

  double hres = (qm.adjoint() * h * qm - h).norm();
  if (hres > tol.cert_residual * std::max(1.0, qm.squaredNorm())) {
    throw BoundaryUnstableError("torus form: conjugator does not preserve the form");
  }

  TorusForm tf{group_from_matrix(g.alg, qm, tol), full.head(n - 1)};
  CMat torus_exp = group_exp(datum->torus(tf.angles), tol).matrix;
  double rres = (gc * tf.q.matrix - tf.q.matrix * torus_exp).norm();
  if (rres > tol.cert_residual * std::max(1.0, scale * tf.q.matrix.norm())) {
    throw BoundaryUnstableError("torus form: conjugation residual too large");
  }
  return tf;
}

}  // namespace

RVec compact_torus_angles(const AlgebraElement& x, const Tolerances& tol) {
  const auto& alg = *x.alg;
  if (!alg.is_group_family()) {
    throw std::invalid_argument("compact_torus_angles: unsupported family");
  }
  if (!is_compact_element(x, tol)) {
    throw std::invalid_argument("compact_torus_angles: element is not compact");
  }
  const CMat xc = x.matrix;
  const double scale = std::max(1.0, xc.norm());
  Eigen::ComplexEigenSolver<CMat> es(xc, false);
  std::vector<Cplx> means;
  cluster_values(es.eigenvalues(), std::max(tol.cluster_radius, 1e-10), &means);

  if (alg.family == Family::Su) {
    const int n = alg.ambient;
    const CMat h = alg.form();
    std::vector<double> pos, neg;
    for (size_t ci = 0; ci < means.size(); ++ci) {
      const Cplx mu = means[ci];
      CMat v = null_space((xc - mu * CMat::Identity(n, n)).eval(),
                          cluster_rank_cut(means, ci, scale, tol));
      CMat gramm = v.adjoint() * h * v;
      CMat herm = 0.5 * (gramm + gramm.adjoint());
      Eigen::SelfAdjointEigenSolver<CMat> ges(herm);
      // Torus entries are -i a on the definite slots: a = -Im(eigenvalue).
      const double a = -mu.imag();
      for (int t = 0; t < ges.eigenvalues().size(); ++t) {
        const double s = ges.eigenvalues()(t);
        if (std::abs(s) < 1e-8) {
          throw BoundaryUnstableError(
              "compact angles: form-degenerate eigenvalue");
        }
        (s > 0 ? pos : neg).push_back(a);
      }
    }
    if (static_cast<int>(pos.size()) != alg.p ||
        static_cast<int>(neg.size()) != alg.q) {
      throw BoundaryUnstableError("compact angles: signature split mismatch");
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    RVec full(alg.ambient);
    for (int j = 0; j < alg.p; ++j) full(j) = pos[j];
    for (int j = 0; j < alg.q; ++j) full(alg.p + j) = neg[j];
    return full.head(alg.ambient - 1);
  }

  // Symplectic families: kappa-positive eigenvectors at eigenvalue i*m carry
  // angle m; kappa-negative ones are conjugates of positives at -i*m.
  const int n2 = alg.ambient;
  const int n = n2 / 2;
  const CMat ijc = Cplx(0, 1) * alg.form();
  std::vector<double> angles;
  for (size_t ci = 0; ci < means.size(); ++ci) {
    const Cplx mu = means[ci];
    const double cut = cluster_rank_cut(means, ci, scale, tol);
    if (!conjugate_cluster_separate(means, ci)) {
      // Zero eigenvalue: each symplectic plane in the kernel carries angle 0.
      CMat v = null_space((xc - mu * CMat::Identity(n2, n2)).eval(), cut);
      if (v.cols() % 2 != 0) {
        throw BoundaryUnstableError("compact angles: odd kernel dimension");
      }
      for (int t = 0; t < v.cols() / 2; ++t) angles.push_back(0.0);
      continue;
    }
    if (mu.imag() <= 0) continue;  // conjugate partner of a handled cluster
    CMat v = null_space((xc - mu * CMat::Identity(n2, n2)).eval(), cut);
    CMat gramm = v.adjoint() * ijc * v;
    CMat herm = 0.5 * (gramm + gramm.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> ges(herm);
    for (int t = 0; t < ges.eigenvalues().size(); ++t) {
      const double s = ges.eigenvalues()(t);
      if (std::abs(s) < 1e-8) {
        throw BoundaryUnstableError(
            "compact angles: Krein-degenerate eigenvalue");
      }
      angles.push_back(s > 0 ? mu.imag() : -mu.imag());
    }
  }
  if (static_cast<int>(angles.size()) != n) {
    throw BoundaryUnstableError("compact angles: wrong angle count");
  }
  std::sort(angles.begin(), angles.end());
  RVec out(n);
  for (int j = 0; j < n; ++j) out(j) = angles[j];
  if (alg.family == Family::Sl2) {
    out(0) *= 2.0;  // sl2 angle coordinate doubles the rotation block angle
  }
  return out;
}

TorusForm torus_representative(const GroupElement& g, const Tolerances& tol) {
  if (!g.alg->is_group_family()) {
    throw std::invalid_argument("torus_representative: unsupported family");
  }
  if (!is_elliptic(g, tol)) {
    throw std::invalid_argument("torus_representative: element is not elliptic");
  }
  DatumPtr datum = build_root_datum(g.alg);
  if (g.alg->family == Family::Su) {
    return torus_rep_su(g, tol, datum);
  }
  return torus_rep_symplectic(g, tol, datum);
}

PolarSplit polar_split(const GroupElement& g, const Tolerances& tol) {
  TorusForm tf = torus_representative(g, tol);
  const auto& alg = *g.alg;
  CMat qm = tf.q.matrix;
  CMat u = unitary_polar_factor(qm);
  CMat pfac = qm * u.adjoint();
  CMat herm = 0.5 * (pfac + pfac.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  if (es.eigenvalues().minCoeff() <= 0) {
    throw BoundaryUnstableError("polar split: non-positive polar factor");
  }
  CMat logp = es.eigenvectors() *
              es.eigenvalues().array().log().matrix().asDiagonal() *
              es.eigenvectors().adjoint();
  AlgebraElement y = element_from_matrix(g.alg, logp, tol);
  RVec ky = alg.proj_k * y.coords;
  if (ky.norm() > tol.cert_residual * std::max(1.0, y.coords.norm())) {
    throw BoundaryUnstableError("polar split: log of polar factor is not in p");
  }
  y = element_from_coords(g.alg, alg.proj_p * y.coords);

  DatumPtr datum = build_root_datum(g.alg);
  CMat torus_exp = group_exp(datum->torus(tf.angles), tol).matrix;
  CMat km = u * torus_exp * u.adjoint();
  GroupElement k = group_from_matrix(g.alg, km, tol);
  double kres = (km.adjoint() * km - CMat::Identity(km.rows(), km.cols())).norm();
  if (kres > tol.cert_residual * std::max(1.0, km.squaredNorm())) {
    throw BoundaryUnstableError("polar split: compact factor is not unitary");
  }
  GroupElement ey = group_exp(y, tol);
  CMat recon = ey.matrix * km * group_inv(ey).matrix;
  double rres = (recon - g.matrix).norm();
  if (rres > tol.cert_residual * std::max(1.0, g.matrix.norm() *
                                                   ey.matrix.squaredNorm())) {
    throw BoundaryUnstableError("polar split: reconstruction residual too large");
  }
  return PolarSplit{y, k, tf.angles};
}

}  // namespace elliptica
