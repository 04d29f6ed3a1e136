#include "elliptica/causal.hpp"

#include "elliptica/errors.hpp"
#include "elliptica/matutil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

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

}  // namespace

// ---------------------------------------------------------------------------
// Maximal invariant cone
// ---------------------------------------------------------------------------

ConeQuery in_max_cone(const AlgebraElement& x, const Tolerances& tol) {
  const auto& alg = *x.alg;
  if (!alg.is_group_family()) {
    throw std::invalid_argument("in_max_cone: unsupported family");
  }
  ConeQuery out;
  if (alg.family != Family::Su) {
    // Matrix certificate: W^max = { x : J x symmetric PSD }.
    RMat s = (alg.form() * x.matrix).real();
    const double scale = std::max(1.0, s.norm());
    if ((s - s.transpose()).norm() > 1e-10 * scale) {
      throw InvariantViolation("in_max_cone: J*x is not symmetric");
    }
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RMat> es(s);
    out.margin = es.eigenvalues().minCoeff();
    out.route = "matrix";
  } else {
    // Torus route: reduce a compact element to torus angles and test the
    // noncompact root values.  Noncompact su input has no certificate here.
    if (!is_compact_element(x, tol)) {
      throw std::invalid_argument(
          "in_max_cone: torus route requires a compact element (su family)");
    }
    DatumPtr datum = build_root_datum(x.alg);
    const RVec a = compact_torus_angles(x, tol);
    double mn = 1e300;
    for (int i : datum->delta_p_plus) {
      mn = std::min(mn, datum->root(i).value(a));
    }
    out.margin = mn;
    out.route = "torus";
  }
  out.member = out.margin >= -tol.psd_tol;
  out.interior = out.margin >= tol.interior_margin;
  return out;
}

// ---------------------------------------------------------------------------
// Krein signatures
// ---------------------------------------------------------------------------

KreinReport krein_signatures(const GroupElement& g, const Tolerances& tol) {
  const auto& alg = *g.alg;
  if (alg.family == Family::Su || !alg.is_group_family()) {
    throw std::invalid_argument("krein_signatures: symplectic families only");
  }
  const CMat gc = g.matrix;
  const double scale = std::max(1.0, gc.norm());
  const CMat ijc = Cplx(0, 1) * alg.form();

  Eigen::ComplexEigenSolver<CMat> es(gc, false);
  std::vector<Cplx> means;
  const std::vector<int> assign =
      cluster_values(es.eigenvalues(), std::max(tol.cluster_radius, 1e-10),
                     &means);

  KreinReport report;
  for (std::size_t ci = 0; ci < means.size(); ++ci) {
    const Cplx mu = means[ci];
    if (std::abs(std::abs(mu) - 1.0) > 1e-6 * scale) {
      throw std::invalid_argument(
          "krein_signatures: spectrum is not on the unit circle");
    }
    KreinEntry entry;
    entry.eigenvalue = mu;
    entry.multiplicity = static_cast<int>(
        std::count(assign.begin(), assign.end(), static_cast<int>(ci)));
    // The pairing is indefinite exactly on self-conjugate clusters (+/-1).  A
    // conjugate pair that has drifted close to the real axis but is still
    // resolved keeps definite signs, so decide by the clustering rather than
    // by a fixed distance from +/-1.
    entry.indefinite = !conjugate_cluster_separate(means, ci);
    CMat v = null_space((gc - mu * CMat::Identity(gc.rows(), gc.cols())).eval(),
                        cluster_rank_cut(means, ci, scale, tol));
    CMat gramm = v.adjoint() * ijc * v;
    CMat herm = 0.5 * (gramm + gramm.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> ges(herm);
    for (int t = 0; t < ges.eigenvalues().size(); ++t) {
      const double s = ges.eigenvalues()(t);
      if (std::abs(s) < 1e-10) {
        // Degenerate pairing: only possible in the collided case.
        entry.indefinite = true;
        continue;
      }
      if (s > 0) {
        ++entry.positive;
      } else {
        ++entry.negative;
      }
    }
    if (!entry.indefinite) {
      const double angle = reduce_mod(std::arg(mu), kTwoPi);
      entry.positive_angles.assign(entry.positive, angle);
    }
    report.total_positive += entry.positive;
    report.collision = report.collision || entry.indefinite;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Basic component membership (dual route)
// ---------------------------------------------------------------------------

namespace {

/// Spectral route for symplectic families: semisimple, unit spectrum away
/// from +/-1, and every Krein-positive angle in (0, pi).
bool basic_by_krein(const GroupElement& g, const Tolerances& tol) {
  if (!operator_is_semisimple(g.matrix, tol)) return false;
  KreinReport kr;
  try {
    kr = krein_signatures(g, tol);
  } catch (const std::invalid_argument&) {
    return false;  // spectrum off the unit circle
  }
  if (kr.collision) return false;
  for (const KreinEntry& e : kr.entries) {
    for (double a : e.positive_angles) {
      if (!(a > 0.0 && a < kPi)) return false;
    }
  }
  return true;
}

}  // namespace

bool in_basic_component(const GroupElement& g, const Tolerances& tol) {
  const EllipticityReport rep = classify_element(g, tol);
  if (!rep.stably_elliptic) return false;
  DatumPtr datum = build_root_datum(g.alg);
  const TorusForm tf = rep.torus ? *rep.torus : torus_representative(g, tol);
  const AlcoveLabel label = alcove_of(*datum, tf.angles, tol);
  const ComponentClass cls =
      canonical_component(*datum, datum->lattice("matrix"), label);
  const bool by_alcove = cls.is_basic();
  if (g.alg->family != Family::Su) {
    const bool by_krein = basic_by_krein(g, tol);
    if (by_krein != by_alcove) {
      std::ostringstream os;
      os << "in_basic_component: alcove route says " << by_alcove
         << " but Krein route says " << by_krein;
      throw InvariantViolation(os.str());
    }
  }
  return by_alcove;
}

// ---------------------------------------------------------------------------
// Time function
// ---------------------------------------------------------------------------

double tau_on_torus(const RootDatum& datum, const RVec& angles,
                    const Tolerances& tol) {
  const AlcoveLabel theta = alcove_of(datum, angles, tol);
  if (!theta.isZero()) {
    throw std::invalid_argument("tau_on_torus: point outside the basic alcove");
  }
  double s = 0.0;
  for (int i : datum.delta_p_plus) {
    const double v = datum.root(i).value(angles);
    s += std::log(v) - std::log(kTwoPi - v);
  }
  return s;
}

double tau(const GroupElement& g, const Tolerances& tol) {
  if (!in_basic_component(g, tol)) {
    throw std::invalid_argument("tau: element outside the basic component");
  }
  DatumPtr datum = build_root_datum(g.alg);
  const TorusForm tf = torus_representative(g, tol);
  return tau_on_torus(*datum, tf.angles, tol);
}

// ---------------------------------------------------------------------------
// Exit times
// ---------------------------------------------------------------------------

namespace {

bool inside_basic(const GroupElement& g, const Tolerances& tol) {
  try {
    return in_basic_component(g, tol);
  } catch (const BoundaryUnstableError&) {
    return false;  // wall-adjacent probe counts as already outside
  }
}

}  // namespace

double exit_time(const AlgebraElement& x, const GroupElement& g,
                 int direction, const Tolerances& tol) {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("exit_time: direction must be +1 or -1");
  }
  const ConeQuery q = in_max_cone(x, tol);
  if (!q.member || x.norm() < 1e-12) {
    throw std::invalid_argument("exit_time: direction is not a causal vector");
  }
  if (!in_basic_component(g, tol)) {
    throw std::invalid_argument(
        "exit_time: base point outside the basic component");
  }
  // Probes use an essentially exact wall decision so that bisection can
  // tighten the bracket below the requested 1e-8 width.
  Tolerances probe = tol;
  probe.boundary_margin = 1e-12;
  auto at = [&](double t) {
    const AlgebraElement tx = element_from_coords(x.alg, (t * x.coords).eval());
    const GroupElement gt = group_mul(group_exp(tx, tol), g);
    return inside_basic(gt, probe);
  };

  double lo = 0.0;
  double hi = 0.1 * direction;
  while (at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (std::abs(hi) > 1e6) {
      throw std::runtime_error(
          "exit_time: no boundary crossing within |t| <= 1e6");
    }
  }
  while (std::abs(hi - lo) >= 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ExitTimes exit_times(const AlgebraElement& x, const GroupElement& g,
                     const Tolerances& tol) {
  ExitTimes out;
  out.forward = exit_time(x, g, +1, tol);
  out.backward = exit_time(x, g, -1, tol);
  if (!(out.backward < 0.0 && 0.0 < out.forward)) {
    throw InvariantViolation("exit_times: crossings do not bracket zero");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Causal curves
// ---------------------------------------------------------------------------

CausalCurve generate_causal_curve(const GroupElement& start, int steps,
                                  double dt, Rng& rng, const Tolerances& tol) {
  if (steps < 1 || dt <= 0) {
    throw std::invalid_argument("generate_causal_curve: bad discretization");
  }
  const DescPtr alg = start.alg;
  DatumPtr datum = build_root_datum(alg);

  auto interior_torus_sample = [&]() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      RVec a(datum->rank);
      for (int j = 0; j < datum->rank; ++j) a(j) = rng.uniform(-1.2, 1.2);
      double mn = 1e300;
      for (int i : datum->delta_p_plus) {
        mn = std::min(mn, datum->root(i).value(a));
      }
      if (mn > 0.15) return a;
    }
    // Guaranteed-interior fallback: the central direction, mildly jittered.
    RVec a = datum->z_angles;
    for (int j = 0; j < datum->rank; ++j) a(j) *= 1.0 + 0.1 * rng.uniform();
    return a;
  };

  CausalCurve curve;
  GroupElement cur = start;
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    const RVec a = interior_torus_sample();
    const AlgebraElement tor = datum->torus(a);
    RVec hc(alg->dim);
    for (int j = 0; j < alg->dim; ++j) hc(j) = rng.normal();
    hc *= 0.5 / std::max(1.0, hc.norm());
    const GroupElement h = group_exp(element_from_coords(alg, hc), tol);
    const RVec w = adjoint_matrix(h, tol) * tor.coords;
    const AlgebraElement vel = element_from_coords(alg, w);

    curve.samples.push_back({t, cur, vel});
    const AlgebraElement stepx = element_from_coords(alg, (dt * w).eval());
    cur = group_mul(cur, group_exp(stepx, tol));
    t += dt;
  }
  // Terminal sample; its velocity slot is unused by construction.
  curve.samples.push_back(
      {t, cur, element_from_coords(alg, RVec::Zero(alg->dim))});
  return curve;
}

CausalCheckReport causal_check(const CausalCurve& curve, const Tolerances& tol) {
  CausalCheckReport report;
  report.all_causal = true;
  const int k = static_cast<int>(curve.samples.size());
  for (int i = 0; i + 1 < k; ++i) {
    const CurveSample& a = curve.samples[i];
    const CurveSample& b = curve.samples[i + 1];
    const double dt = b.t - a.t;
    CausalCheckItem item;
    item.t = a.t;
    const ConeQuery q = in_max_cone(a.velocity, tol);
    item.member = q.member;
    item.interior = q.interior;
    item.margin = q.margin;
    const AlgebraElement stepx =
        element_from_coords(a.velocity.alg, (dt * a.velocity.coords).eval());
    const CMat recon = a.g.matrix * group_exp(stepx, tol).matrix;
    item.step_residual =
        (b.g.matrix - recon).norm() / std::max(1.0, b.g.matrix.norm());
    report.all_causal = report.all_causal && item.member;
    report.max_step_residual =
        std::max(report.max_step_residual, item.step_residual);
    report.items.push_back(item);
  }
  return report;
}

CausalCheckReport causal_check_k_level(const CausalCurve& curve,
                                       const Tolerances& tol) {
  CausalCheckReport report;
  report.all_causal = true;
  const int k = static_cast<int>(curve.samples.size());
  if (k == 0) return report;
  const DescPtr alg = curve.samples.front().g.alg;

  // Compact shadow: the unitary polar factors of the samples.  This is the
  // continuous K-projection of the Cartan decomposition, so consecutive
  // discrete logarithmic velocities must again be causal (for the cone
  // traced inside the compact subgroup).
  std::vector<GroupElement> kparts;
  kparts.reserve(k);
  for (const CurveSample& s : curve.samples) {
    kparts.push_back(group_from_matrix(alg, unitary_polar_factor(s.g.matrix), tol));
  }
  for (int i = 0; i + 1 < k; ++i) {
    const double dt = curve.samples[i + 1].t - curve.samples[i].t;
    const CMat rel = group_mul(group_inv(kparts[i]), kparts[i + 1]).matrix;
    const CMat logm = rel.log();
    const AlgebraElement vel =
        element_from_matrix(alg, (logm / dt).eval(), tol);
    CausalCheckItem item;
    item.t = curve.samples[i].t;
    const ConeQuery q = in_max_cone(vel, tol);
    item.member = q.member;
    item.interior = q.interior;
    item.margin = q.margin;
    item.step_residual =
        (rel - (dt * vel.matrix).exp()).norm() / std::max(1.0, rel.norm());
    report.all_causal = report.all_causal && item.member;
    report.max_step_residual =
        std::max(report.max_step_residual, item.step_residual);
    report.items.push_back(item);
  }
  return report;
}

}  // namespace elliptica
