// Ellipticity and stable ellipticity: spectral criteria, fixed-space
// dimensions, compact embedding, torus normal forms, polar splitting.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptica/algebra.hpp"
#include "elliptica/ellipticity.hpp"
#include "elliptica/rng.hpp"
#include "elliptica/structure.hpp"

#include <cmath>

using namespace elliptica;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
const Tolerances tol = default_tolerances();

AlgebraElement random_element(const DescPtr& alg, Rng& rng, double scale) {
  RVec c(alg->dim);
  for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
  c *= scale / std::max(1e-12, c.norm());
  return element_from_coords(alg, c);
}

GroupElement conjugated_torus(const RootDatum& datum, const RVec& a, Rng& rng,
                              double conj_scale = 0.7) {
  const GroupElement q = group_exp(random_element(datum.alg, rng, conj_scale), tol);
  return group_conj(q, group_exp(datum.torus(a), tol));
}
}  // namespace

TEST_CASE("torus-level stable ellipticity matches the root-value criterion") {
  Rng rng(41);
  for (const std::string& name :
       {std::string("sp2"), std::string("su(2,1)"), std::string("su(2,2)")}) {
    CAPTURE(name);
    const DescPtr alg = make_algebra(name);
    DatumPtr datum = build_root_datum(alg);
    for (int k = 0; k < 25; ++k) {
      RVec a(datum->rank);
      for (int i = 0; i < datum->rank; ++i) a(i) = rng.uniform(-6.0, 6.0);
      if (k % 3 == 0) {
        // Put the first noncompact root exactly on a wall.
        const Root& r = datum->root(datum->delta_p_plus[0]);
        double v = r.value(a);
        const double target = kTwoPi * std::round(v / kTwoPi);
        a(0) += (target - v) / r.covector(0);
      }
      bool oracle = true;
      bool clean = true;
      for (int i : datum->delta_p_plus) {
        const double turns = datum->root(i).value(a) / kTwoPi;
        const double dist = std::abs(turns - std::round(turns)) * kTwoPi;
        if (dist < 1e-9) {
          oracle = false;
        } else if (dist < 1e-5) {
          clean = false;
        }
      }
      if (!clean) continue;
      const GroupElement g = conjugated_torus(*datum, a, rng);
      CAPTURE(a.transpose());
      CHECK(is_stably_elliptic(g, tol) == oracle);
      CHECK(is_elliptic(g, tol));
    }
  }
}

TEST_CASE("fixed-space dimension equals the root-value count") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  Rng rng(42);

  struct Case {
    double a1, a2;
    int dim;            // rank + #{roots of either sign with value in 2 pi Z}
    bool stably;        // compactly embedded fixed space?
  };
  // Roots of sp4 (both signs): +-2e1, +-2e2, +-(e1+e2), +-(e1-e2).
  const Case cases[] = {
      {0.7, 0.3, 2, true},          // generic: Fix = t
      {kPi, 0.4, 4, false},         // 2e1 wall: noncompact sl2 inside Fix
      {1.1, 1.1, 4, true},          // compact wall e1-e2: Fix is compact u(2)
      {0.9, kTwoPi - 0.9, 4, false},  // noncompact wall e1+e2
      {kPi, kPi, 10, false},          // -1: Ad is the identity, Fix is all of g
  };
  for (const Case& c : cases) {
    RVec a(2);
    a << c.a1, c.a2;
    const GroupElement g = conjugated_torus(*datum, a, rng);
    const EllipticityReport rep = classify_element(g, tol);
    CAPTURE(c.a1);
    CAPTURE(c.a2);
    CHECK(rep.elliptic);
    CHECK(rep.fixed_dim == c.dim);
    CHECK(rep.stably_elliptic == c.stably);
  }
}

TEST_CASE("minus identity is elliptic but not stably elliptic") {
  const DescPtr sl2 = make_algebra("sl2");
  const GroupElement minus_one =
      group_from_matrix(sl2, -CMat::Identity(2, 2), tol);
  const EllipticityReport rep = classify_element(minus_one, tol);
  CHECK(rep.elliptic);
  CHECK(rep.ad_semisimple);
  CHECK(rep.spectrum_unit);
  CHECK_FALSE(rep.stably_elliptic);
  CHECK(rep.fixed_dim == 3);  // Ad(-1) = id fixes everything
}

TEST_CASE("hyperbolic and parabolic elements are not elliptic") {
  const DescPtr sl2 = make_algebra("sl2");
  CMat hyp = CMat::Zero(2, 2);
  hyp(0, 0) = 2.0;
  hyp(1, 1) = 0.5;
  const EllipticityReport rh =
      classify_element(group_from_matrix(sl2, hyp, tol), tol);
  CHECK_FALSE(rh.elliptic);
  CHECK(rh.ad_semisimple);
  CHECK_FALSE(rh.spectrum_unit);

  CMat par = CMat::Identity(2, 2);
  par(0, 1) = 1.0;
  const EllipticityReport rp =
      classify_element(group_from_matrix(sl2, par, tol), tol);
  CHECK_FALSE(rp.elliptic);
  CHECK_FALSE(rp.ad_semisimple);
  CHECK(rp.spectrum_unit);
}

TEST_CASE("classification booleans are conjugation invariant") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  Rng rng(43);

  RVec a(2);
  a << 1.3, 0.4;
  const GroupElement base = group_exp(datum->torus(a), tol);
  RVec wall(2);
  wall << kPi, 0.4;
  const GroupElement base_wall = group_exp(datum->torus(wall), tol);

  for (int k = 0; k < 20; ++k) {
    // Include purely hyperbolic conjugators up to coordinate norm 1.3.  The
    // positive-definiteness certificate needs lambda_min >= pd_margin for a
    // unit-norm invariant form, and the best such form degrades like
    // 1/cond(Ad h)^2, so much stronger boosts are not certifiable in double
    // precision.
    AlgebraElement y = random_element(alg, rng, rng.uniform(0.5, 1.0));
    if (k % 2 == 0) {
      RVec c = alg->proj_p * y.coords;
      c *= rng.uniform(1.0, 1.3) / std::max(1e-12, c.norm());
      y = element_from_coords(alg, c);
    }
    const GroupElement h = group_exp(y, tol);
    const EllipticityReport r1 = classify_element(group_conj(h, base), tol);
    CHECK(r1.elliptic);
    CHECK(r1.stably_elliptic);
    CHECK(r1.fixed_dim == 2);
    const EllipticityReport r2 =
        classify_element(group_conj(h, base_wall), tol);
    CHECK(r2.elliptic);
    CHECK_FALSE(r2.stably_elliptic);
  }
}

TEST_CASE("centralizer of a stably elliptic element stays elliptic") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  Rng rng(44);
  RVec a(2);
  a << 0.9, 2.2;
  const GroupElement q = group_exp(random_element(alg, rng, 0.8), tol);
  const GroupElement g = group_conj(q, group_exp(datum->torus(a), tol));
  REQUIRE(is_stably_elliptic(g, tol));

  for (int k = 0; k < 50; ++k) {
    RVec s(2);
    s << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
    // q exp(torus) q^{-1} commutes with g by construction.
    const GroupElement c = group_conj(q, group_exp(datum->torus(s), tol));
    const CMat comm = c.matrix * g.matrix - g.matrix * c.matrix;
    REQUIRE(comm.norm() < 1e-8 * g.matrix.norm());
    CHECK(is_elliptic(c, tol));
  }
}

TEST_CASE("fixed algebras from the group and from ad agree on exp images") {
  Rng rng(45);
  for (const std::string& name : {std::string("sp4"), std::string("su(2,1)")}) {
    CAPTURE(name);
    const DescPtr alg = make_algebra(name);
    DatumPtr datum = build_root_datum(alg);
    for (int k = 0; k < 8; ++k) {
      RVec a(datum->rank);
      for (int i = 0; i < datum->rank; ++i) a(i) = rng.uniform(-4.0, 4.0);
      if (k % 2 == 0) a(0) = kPi;  // include wall cases
      const GroupElement q = group_exp(random_element(alg, rng, 0.6), tol);
      const AlgebraElement x = element_from_coords(
          alg, adjoint_matrix(q, tol) * datum->torus(a).coords);
      const RMat from_group = fixed_point_algebra(group_exp(x, tol), tol);
      const RMat from_ad = fixed_algebra_from_ad(x, tol);
      REQUIRE(from_group.cols() == from_ad.cols());
      // Same span: each generator of one lies in the other.
      const RMat proj = from_group * from_group.transpose();
      for (int c = 0; c < from_ad.cols(); ++c) {
        const RVec v = from_ad.col(c);
        CHECK((v - proj * v).norm() < 1e-7);
      }
    }
  }
}

TEST_CASE("compact embedding: torus yes, noncompact slices no") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);

  // The torus itself.
  RMat torus_basis(alg->dim, 2);
  RVec e1 = RVec::Zero(2), e2 = RVec::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  torus_basis.col(0) = datum->torus(e1).coords.normalized();
  torus_basis.col(1) = datum->torus(e2).coords.normalized();
  Rng rng(46);
  CHECK(is_compactly_embedded(alg, torus_basis, tol, rng));

  // A hyperbolic line is not compactly embedded.
  CMat hm = CMat::Zero(4, 4);
  hm(0, 0) = 1.0;
  hm(2, 2) = -1.0;
  RMat line(alg->dim, 1);
  line.col(0) = element_from_matrix(alg, hm, tol).coords.normalized();
  CHECK_FALSE(is_compactly_embedded(alg, line, tol, rng));

  // A nilpotent line is not compactly embedded either.
  CMat nm = CMat::Zero(4, 4);
  nm(0, 2) = 1.0;
  RMat nline(alg->dim, 1);
  nline.col(0) = element_from_matrix(alg, nm, tol).coords.normalized();
  CHECK_FALSE(is_compactly_embedded(alg, nline, tol, rng));
}

TEST_CASE("torus representative reconstructs and sorts angles") {
  Rng rng(47);
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  for (int k = 0; k < 10; ++k) {
    RVec a(2);
    a << rng.uniform(0.2, 2.9), rng.uniform(0.2, 2.9);
    if (std::abs(a(0) - a(1)) < 0.05) continue;
    const GroupElement g = conjugated_torus(*datum, a, rng);
    const TorusForm tf = torus_representative(g, tol);
    const CMat lhs = g.matrix * tf.q.matrix;
    const CMat rhs =
        tf.q.matrix * group_exp(datum->torus(tf.angles), tol).matrix;
    CHECK((lhs - rhs).norm() < 1e-8 * std::max(1.0, g.matrix.norm()));
    // Same multiset of angles as the input (both in (0, pi), sorted).
    RVec sorted = a;
    if (sorted(0) > sorted(1)) std::swap(sorted(0), sorted(1));
    CHECK(std::abs(tf.angles(0) - sorted(0)) < 1e-8);
    CHECK(std::abs(tf.angles(1) - sorted(1)) < 1e-8);
  }
}

TEST_CASE("algebra-level torus angles for the unitary families") {
  const DescPtr alg = make_algebra("su(2,1)");
  DatumPtr datum = build_root_datum(alg);
  RVec a(2);
  a << 0.4, 0.9;
  const AlgebraElement x = datum->torus(a);
  const RVec got = compact_torus_angles(x, tol);
  REQUIRE(got.size() == 2);
  CHECK(got(0) == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(got(1) == doctest::Approx(0.9).epsilon(1e-10));

  // Invariance under conjugation.
  Rng rng(48);
  const GroupElement q = group_exp(random_element(alg, rng, 0.7), tol);
  const AlgebraElement xc =
      element_from_coords(alg, adjoint_matrix(q, tol) * x.coords);
  const RVec moved = compact_torus_angles(xc, tol);
  CHECK((moved - got).norm() < 1e-8);
}

TEST_CASE("polar splitting recovers crafted factors") {
  Rng rng(49);
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  RVec a(2);
  a << 0.8, 1.9;
  const GroupElement k0 = group_exp(datum->torus(a), tol);
  RVec pc = alg->proj_p * random_element(alg, rng, 1.0).coords;
  pc *= 0.6 / std::max(1e-12, pc.norm());
  const AlgebraElement y0 = element_from_coords(alg, pc);
  const GroupElement g =
      group_conj(group_exp(y0, tol), k0);

  const PolarSplit ps = polar_split(g, tol);
  CHECK((ps.y.coords - y0.coords).norm() < 1e-7);
  const CMat krec = group_exp(element_scale(-1.0, ps.y), tol).matrix *
                    g.matrix *
                    group_exp(ps.y, tol).matrix;
  CHECK((krec - k0.matrix).norm() < 1e-7);
  RVec sorted = a;
  CHECK(std::abs(ps.angles(0) - sorted(0)) < 1e-8);
  CHECK(std::abs(ps.angles(1) - sorted(1)) < 1e-8);
}
