// Invariant cones, Krein signatures, the basic component, the time function
// tau, exit times, and causal-curve verification.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptica/causal.hpp"
#include "elliptica/errors.hpp"
#include "elliptica/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace elliptica;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
const Tolerances tol = default_tolerances();

GroupElement random_conjugator(const DescPtr& alg, Rng& rng, double norm) {
  RVec c(alg->dim);
  for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
  c *= norm / std::max(1e-12, c.norm());
  return group_exp(element_from_coords(alg, c), tol);
}

GroupElement central_exp(const RootDatum& datum, double t) {
  return group_exp(element_scale(t, datum.z_element()), tol);
}
}  // namespace

TEST_CASE("maximal cone membership for symplectic elements") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);

  // The central element is deep interior: J z = I/2.
  const AlgebraElement z = datum->z_element();
  ConeQuery q = in_max_cone(z, tol);
  CHECK(q.route == "matrix");
  CHECK(q.member);
  CHECK(q.interior);
  CHECK(q.margin == doctest::Approx(0.5).epsilon(1e-10));

  q = in_max_cone(element_scale(-1.0, z), tol);
  CHECK_FALSE(q.member);
  CHECK(q.margin == doctest::Approx(-0.5).epsilon(1e-10));

  // The cone is Ad-invariant: conjugated interior stays interior.
  Rng rng(321);
  for (int k = 0; k < 5; ++k) {
    const GroupElement h = random_conjugator(alg, rng, 0.8);
    const RVec moved = adjoint_matrix(h, tol) * z.coords;
    const ConeQuery qc = in_max_cone(element_from_coords(alg, moved), tol);
    CHECK(qc.member);
    CHECK(qc.interior);
  }

  // A raising nilpotent sits exactly on the cone boundary.
  const DescPtr sl2 = make_algebra("sl2");
  CMat nil(2, 2);
  nil << 0, 1, 0, 0;
  const ConeQuery qn = in_max_cone(element_from_matrix(sl2, nil, tol), tol);
  CHECK(qn.member);
  CHECK_FALSE(qn.interior);
  CHECK(std::abs(qn.margin) < 1e-12);
}

TEST_CASE("maximal cone membership for su via torus reduction") {
  const DescPtr alg = make_algebra("su(2,1)");
  DatumPtr datum = build_root_datum(alg);

  RVec a(2);
  a << 0.4, 0.9;
  ConeQuery q = in_max_cone(datum->torus(a), tol);
  CHECK(q.route == "torus");
  CHECK(q.member);
  CHECK(q.interior);
  // Noncompact root values are 2*0.4+0.9 = 1.7 and 0.4+2*0.9 = 2.2.
  CHECK(q.margin == doctest::Approx(1.7).epsilon(1e-9));

  a << 0.4, -0.5;
  q = in_max_cone(datum->torus(a), tol);
  CHECK_FALSE(q.member);
  CHECK(q.margin == doctest::Approx(-0.6).epsilon(1e-9));

  // Noncompact su elements have no certificate: reject rather than guess.
  CMat m = CMat::Zero(3, 3);
  m(0, 2) = 1;
  m(2, 0) = 1;
  CHECK_THROWS_AS(in_max_cone(element_from_matrix(alg, m, tol), tol),
                  std::invalid_argument);
}

TEST_CASE("Krein signatures of an elliptic symplectic element") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);

  RVec a(2);
  a << kPi / 3.0, kPi / 5.0;
  const GroupElement g = group_exp(datum->torus(a), tol);
  const KreinReport rep = krein_signatures(g, tol);
  CHECK_FALSE(rep.collision);
  CHECK(rep.total_positive == 2);
  CHECK(rep.entries.size() == 4);  // four simple eigenvalue clusters

  std::vector<double> pos;
  for (const KreinEntry& e : rep.entries) {
    CHECK(e.multiplicity == 1);
    CHECK_FALSE(e.indefinite);
    CHECK(e.positive + e.negative == 1);
    for (double ang : e.positive_angles) pos.push_back(ang);
  }
  std::sort(pos.begin(), pos.end());
  REQUIRE(pos.size() == 2);
  // Rotation blocks built from positive alcove coordinates carry positive
  // Krein sign at exactly those angles.
  CHECK(pos[0] == doctest::Approx(kPi / 5.0).epsilon(1e-9));
  CHECK(pos[1] == doctest::Approx(kPi / 3.0).epsilon(1e-9));

  // Symplectic conjugation preserves the whole signature.
  Rng rng(322);
  const GroupElement h = random_conjugator(alg, rng, 0.7);
  const KreinReport repc = krein_signatures(group_conj(h, g), tol);
  CHECK(repc.total_positive == rep.total_positive);
  std::vector<double> posc;
  for (const KreinEntry& e : repc.entries) {
    for (double ang : e.positive_angles) posc.push_back(ang);
  }
  std::sort(posc.begin(), posc.end());
  REQUIRE(posc.size() == pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    CHECK(posc[i] == doctest::Approx(pos[i]).epsilon(1e-7));
  }

  // An eigenvalue pair colliding at -1 is flagged.
  a << kPi, 0.3;
  const KreinReport repw = krein_signatures(group_exp(datum->torus(a), tol), tol);
  CHECK(repw.collision);

  // The invariant pairing argument needs the symplectic form.
  const DescPtr su = make_algebra("su(2,1)");
  CHECK_THROWS_AS(krein_signatures(group_identity(su), tol),
                  std::invalid_argument);
}

TEST_CASE("basic component membership") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  Rng rng(323);

  for (double t : {0.5, 3.0, 6.0}) {
    CAPTURE(t);
    const GroupElement h = random_conjugator(alg, rng, 0.9);
    CHECK(in_basic_component(group_conj(h, central_exp(*datum, t)), tol));
  }
  for (double t : {kTwoPi + 0.1, 7.0}) {
    CAPTURE(t);
    CHECK_FALSE(in_basic_component(central_exp(*datum, t), tol));
  }

  // Not stably elliptic => not in the basic component, without any alcove
  // machinery: -1 in SL(2,R) and a hyperbolic element.
  const DescPtr sl2 = make_algebra("sl2");
  CMat m(2, 2);
  m << -1, 0, 0, -1;
  CHECK_FALSE(in_basic_component(group_from_matrix(sl2, m, tol), tol));
  m << 2, 0, 0, 0.5;
  CHECK_FALSE(in_basic_component(group_from_matrix(sl2, m, tol), tol));

  // su(2,1) goes through the alcove route alone.
  const DescPtr su = make_algebra("su(2,1)");
  DatumPtr sudatum = build_root_datum(su);
  RVec a(2);
  a << 0.4, 0.9;
  const GroupElement hq = random_conjugator(su, rng, 0.8);
  CHECK(in_basic_component(group_conj(hq, group_exp(sudatum->torus(a), tol)),
                           tol));
  a << 4.0, 4.0;
  CHECK_FALSE(in_basic_component(group_exp(sudatum->torus(a), tol), tol));
}

TEST_CASE("time function on the central circle") {
  const DescPtr sp4 = make_algebra("sp4");
  DatumPtr datum = build_root_datum(sp4);

  // Three positive noncompact roots, all evaluating to t on exp(t z).
  for (double t : {2.0, 4.0}) {
    CAPTURE(t);
    const double want = 3.0 * (std::log(t) - std::log(kTwoPi - t));
    CHECK(tau(central_exp(*datum, t), tol) ==
          doctest::Approx(want).epsilon(1e-9));
  }

  const DescPtr sl2 = make_algebra("sl2");
  DatumPtr d2 = build_root_datum(sl2);
  const double t2 = 2.5;
  CHECK(tau(central_exp(*d2, t2), tol) ==
        doctest::Approx(std::log(t2) - std::log(kTwoPi - t2)).epsilon(1e-9));

  // The midpoint of the central circle is the zero of tau.
  CHECK(std::abs(tau(central_exp(*datum, kPi), tol)) < 1e-12);
  CHECK(std::abs(tau(central_exp(*d2, kPi), tol)) < 1e-12);

  // Conjugation invariance.
  Rng rng(324);
  const GroupElement g = central_exp(*datum, 1.3);
  const double base = tau(g, tol);
  for (int k = 0; k < 5; ++k) {
    const GroupElement h = random_conjugator(sp4, rng, 1.0);
    CHECK(tau(group_conj(h, g), tol) == doctest::Approx(base).epsilon(1e-9));
  }

  // Strict monotonicity along the central circle.
  double prev = -1e300;
  for (int i = 0; i < 40; ++i) {
    const double t = 0.3 + (6.0 - 0.3) * i / 39.0;
    const double v = tau(central_exp(*datum, t), tol);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("time function near the component boundary") {
  const DescPtr sp4 = make_algebra("sp4");
  DatumPtr datum = build_root_datum(sp4);

  // Within the default wall margin the verdict is refused, not guessed.
  CHECK_THROWS_AS(tau(central_exp(*datum, kTwoPi - 1e-7), tol),
                  BoundaryUnstableError);

  // A sharper profile resolves points at relative distance 1e-9 from either
  // wall, where tau has already left [-20, 20].
  Tolerances sharp = tol;
  sharp.boundary_margin = 1e-12;
  sharp.cluster_radius = 1e-12;
  CHECK(tau(central_exp(*datum, kTwoPi * (1.0 - 1e-9)), sharp) > 20.0);
  CHECK(tau(central_exp(*datum, kTwoPi * 1e-9), sharp) < -20.0);

  // Outside the basic component tau is undefined.
  CHECK_THROWS_AS(tau(central_exp(*datum, kTwoPi + 0.1), tol),
                  std::invalid_argument);
}

TEST_CASE("exit times along the central direction") {
  const DescPtr sp4 = make_algebra("sp4");
  DatumPtr datum = build_root_datum(sp4);
  const double t0 = 2.0;
  const GroupElement g = central_exp(*datum, t0);

  const ExitTimes et = exit_times(datum->z_element(), g, tol);
  CHECK(et.backward == doctest::Approx(-t0).epsilon(1e-6));
  CHECK(et.forward == doctest::Approx(kTwoPi - t0).epsilon(1e-6));
  CHECK(exit_time(datum->z_element(), g, +1, tol) ==
        doctest::Approx(et.forward).epsilon(1e-12));

  // Non-causal directions are rejected up front.
  CHECK_THROWS_AS(
      exit_time(element_scale(-1.0, datum->z_element()), g, +1, tol),
      std::invalid_argument);
  // So are base points outside the basic component.
  CHECK_THROWS_AS(
      exit_time(datum->z_element(), central_exp(*datum, 7.0), +1, tol),
      std::invalid_argument);
}

TEST_CASE("generated causal curves verify as causal") {
  const DescPtr sp4 = make_algebra("sp4");
  DatumPtr datum = build_root_datum(sp4);
  Rng rng(325);
  RVec a(2);
  a << 0.7, 0.9;
  const GroupElement start = group_exp(datum->torus(a), tol);

  const CausalCurve curve = generate_causal_curve(start, 8, 0.03, rng, tol);
  REQUIRE(curve.samples.size() == 9);
  CHECK(curve.samples.front().t == doctest::Approx(0.0));

  const CausalCheckReport rep = causal_check(curve, tol);
  REQUIRE(rep.items.size() == 8);
  CHECK(rep.all_causal);
  CHECK(rep.max_step_residual < tol.step_consistency);
  for (const CausalCheckItem& item : rep.items) {
    CHECK(item.member);
    CHECK(item.margin > 1e-4);
  }

  // The compact shadow of a causal curve is again causal.
  const CausalCheckReport krep = causal_check_k_level(curve, tol);
  REQUIRE(krep.items.size() == 8);
  CHECK(krep.all_causal);
  CHECK(krep.max_step_residual < tol.step_consistency);
}

TEST_CASE("non-causal curves are flagged") {
  // Constant hyperbolic velocity in SL(2,R).
  const DescPtr sl2 = make_algebra("sl2");
  CMat hm(2, 2);
  hm << 1, 0, 0, -1;
  const AlgebraElement v = element_from_matrix(sl2, hm, tol);

  CausalCurve curve;
  GroupElement cur = group_identity(sl2);
  double t = 0.0;
  for (int i = 0; i < 3; ++i) {
    curve.samples.push_back({t, cur, v});
    cur = group_mul(cur, group_exp(element_scale(0.1, v), tol));
    t += 0.1;
  }
  curve.samples.push_back({t, cur, element_from_coords(sl2, RVec::Zero(3))});

  const CausalCheckReport rep = causal_check(curve, tol);
  REQUIRE(rep.items.size() == 3);
  CHECK_FALSE(rep.all_causal);
  CHECK_FALSE(rep.items.front().member);
  CHECK(rep.max_step_residual < tol.step_consistency);

  // Time-reversed central motion in sp4.
  const DescPtr sp4 = make_algebra("sp4");
  DatumPtr datum = build_root_datum(sp4);
  const AlgebraElement mz = element_scale(-1.0, datum->z_element());
  CausalCurve back;
  back.samples.push_back({0.0, group_identity(sp4), mz});
  back.samples.push_back(
      {0.2, group_exp(element_scale(0.2, mz), tol),
       element_from_coords(sp4, RVec::Zero(sp4->dim))});
  const CausalCheckReport brep = causal_check(back, tol);
  REQUIRE(brep.items.size() == 1);
  CHECK_FALSE(brep.all_causal);
  CHECK(brep.items.front().margin == doctest::Approx(-0.5).epsilon(1e-10));
}
