#include "elliptica/quasimorphism.hpp"

#include "elliptica/errors.hpp"
#include "elliptica/matutil.hpp"
#include "elliptica/structure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace elliptica {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_pi(double d) {
  return d - kTwoPi * std::round(d / kTwoPi);
}

double mean_root_value(const RootDatum& datum, const RVec& angles) {
  double s = 0.0;
  for (int i : datum.delta_p_plus) s += datum.root(i).value(angles);
  return s / static_cast<double>(datum.delta_p_plus.size());
}

/// Rotation phase of a real symplectic matrix: the argument of the complex
/// determinant of its (orthogonal-symplectic) unitary polar factor.
double rotation_phase(const RMat& m) {
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RMat u = svd.matrixU() * svd.matrixV().transpose();
  const int n = static_cast<int>(m.rows()) / 2;
  CMat c = u.topLeftCorner(n, n).cast<Cplx>() +
           Cplx(0, 1) * u.bottomLeftCorner(n, n).cast<Cplx>();
  return std::arg(c.determinant());
}

}  // namespace

double f_gw_closed_form(const AlgebraElement& x, const Tolerances& tol) {
  if (!x.alg->is_group_family()) {
    throw std::invalid_argument("f_gw_closed_form: unsupported family");
  }
  DatumPtr datum = build_root_datum(x.alg);
  const JordanParts jp = jordan_decompose(x, tol);
  if (jp.elliptic.norm() < 1e-14 * std::max(1.0, x.norm())) return 0.0;
  const RVec a = compact_torus_angles(jp.elliptic, tol);
  return mean_root_value(*datum, a);
}

// The tolerance profile is accepted for interface uniformity; the phase
// tracking below refines its own step counts and needs no thresholds.
GwValue f_gw_homogenized(const std::vector<AlgebraElement>& word,
                         const Tolerances& /*tol*/) {
  if (word.empty()) {
    throw std::invalid_argument("f_gw_homogenized: empty word");
  }
  const DescPtr alg = word.front().alg;
  if (alg->family == Family::Su || !alg->is_group_family()) {
    throw std::invalid_argument(
        "f_gw_homogenized: symplectic families only (sl2, sp2n)");
  }
  for (const AlgebraElement& x : word) {
    if (x.alg != alg) {
      throw std::invalid_argument("f_gw_homogenized: mixed algebras in word");
    }
  }
  const int amb = alg->ambient;
  const int n = amb / 2;

  struct Tracker {
    RMat g;
    double lift = 0.0;
    double raw = 0.0;
  };
  Tracker state;
  state.g = RMat::Identity(amb, amb);
  state.raw = rotation_phase(state.g);  // 0 at the identity

  // Per-segment substep counts, grown on demand when the phase moves by
  // pi/2 or more across one substep (lift continuity requirement).
  std::vector<int> substeps(word.size());
  std::vector<RMat> seg_exp(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    substeps[i] =
        std::max(4, static_cast<int>(std::ceil(2.0 * word[i].matrix.norm())));
    seg_exp[i] = (word[i].matrix.real() / substeps[i]).exp();
  }

  auto run_segment = [&](std::size_t i) {
    for (;;) {
      Tracker attempt = state;
      bool ok = true;
      for (int s = 0; s < substeps[i]; ++s) {
        attempt.g = attempt.g * seg_exp[i];
        const double raw = rotation_phase(attempt.g);
        const double delta = wrap_to_pi(raw - attempt.raw);
        if (std::abs(delta) >= kPi / 2.0) {
          ok = false;
          break;
        }
        attempt.lift += delta;
        attempt.raw = raw;
      }
      if (ok) {
        state = attempt;
        return;
      }
      if (substeps[i] >= (1 << 20)) {
        throw std::runtime_error(
            "f_gw_homogenized: phase step refinement limit exceeded");
      }
      substeps[i] *= 2;
      seg_exp[i] = (word[i].matrix.real() / substeps[i]).exp();
    }
  };

  const int m_full = 512;
  const int m_half = 256;
  double lift_half = 0.0;
  for (int rep = 0; rep < m_full; ++rep) {
    for (std::size_t i = 0; i < word.size(); ++i) run_segment(i);
    if (rep + 1 == m_half) lift_half = state.lift;
  }
  const double norm = -2.0 / static_cast<double>(n);
  const double f_half = norm * lift_half / m_half;
  const double f_full = norm * state.lift / m_full;

  GwValue out;
  out.value = f_full;
  out.error_bound = std::abs(f_full - f_half);
  out.power = m_full;
  return out;
}

double f_gw_basic(const GroupElement& g, const Tolerances& tol) {
  DatumPtr datum = build_root_datum(g.alg);
  const TorusForm tf = torus_representative(g, tol);
  return mean_root_value(*datum, tf.angles);
}

double quasimorphism_defect(const DescPtr& alg, int pairs, double norm_cap,
                            Rng& rng, const Tolerances& tol) {
  if (!alg->is_group_family()) {
    throw std::invalid_argument("quasimorphism_defect: unsupported family");
  }
  double worst = 0.0;
  int done = 0;
  int attempts = 0;
  while (done < pairs) {
    if (++attempts > 50 * pairs + 1000) {
      throw std::runtime_error(
          "quasimorphism_defect: resampling failed to stay on the principal "
          "branch");
    }
    RVec xc(alg->dim), yc(alg->dim);
    for (int j = 0; j < alg->dim; ++j) {
      xc(j) = rng.normal();
      yc(j) = rng.normal();
    }
    xc *= rng.uniform(0.1, norm_cap) / std::max(1e-12, xc.norm());
    yc *= rng.uniform(0.1, norm_cap) / std::max(1e-12, yc.norm());
    const AlgebraElement x = element_from_coords(alg, xc);
    const AlgebraElement y = element_from_coords(alg, yc);
    const GroupElement gh =
        group_mul(group_exp(x, tol), group_exp(y, tol));
    const CMat logm = gh.matrix.log();
    if ((logm.exp() - gh.matrix).norm() >
        1e-8 * std::max(1.0, gh.matrix.norm())) {
      continue;  // product left the principal branch; resample
    }
    try {
      const AlgebraElement xl = element_from_matrix(alg, logm, tol);
      const double d = std::abs(f_gw_closed_form(xl, tol) -
                                f_gw_closed_form(x, tol) -
                                f_gw_closed_form(y, tol));
      worst = std::max(worst, d);
      ++done;
    } catch (const std::exception&) {
      continue;
    }
  }
  return worst;
}

bool f_gw_monotone_check(const CausalCurve& curve, const Tolerances& tol) {
  if (curve.samples.empty()) return true;
  const DescPtr alg = curve.samples.front().g.alg;
  if (alg->family == Family::Su) {
    throw std::invalid_argument("f_gw_monotone_check: tube-type families only");
  }
  double prev = -1e300;
  for (const CurveSample& s : curve.samples) {
    const double v = f_gw_basic(s.g, tol);
    if (v < prev - tol.monotone_slack) return false;
    prev = v;
  }
  return true;
}

double mobius_act(const GroupElement& g, double point) {
  if (g.alg->family != Family::Sl2) {
    throw std::invalid_argument("mobius_act: sl2 only");
  }
  const double a = g.matrix(0, 0).real();
  const double b = g.matrix(0, 1).real();
  const double c = g.matrix(1, 0).real();
  const double d = g.matrix(1, 1).real();
  if (std::isinf(point)) {
    return c == 0.0 ? std::numeric_limits<double>::infinity() : a / c;
  }
  return (a * point + b) / (c * point + d);
}

double chi_iwa(const GroupElement& g) {
  return 2.0 * std::atan(mobius_act(g, 0.0));
}

}  // namespace elliptica
