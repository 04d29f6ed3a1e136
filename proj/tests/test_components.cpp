// Alcove labels, Weyl/lattice canonicalization, component classes, atlases.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptica/components.hpp"
#include "elliptica/errors.hpp"
#include "elliptica/polyhedra.hpp"
#include "elliptica/rng.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <vector>

using namespace elliptica;

namespace {
constexpr double kPi = 3.14159265358979323846;
const Tolerances tol = default_tolerances();

RatVec random_exact_turns(int rank, Rng& rng, int denom, int bound) {
  RatVec u(rank, Rat(0));
  for (int i = 0; i < rank; ++i) {
    long long num = static_cast<long long>(rng.below(2 * bound * denom)) -
                    bound * denom;
    u[i] = Rat(2 * num + 1, 2LL * denom);
  }
  return u;
}

// Odd numerators alone do not keep sums of coordinates off the walls, so
// reject samples where any noncompact root value is an integer.
RatVec random_nonwall_turns(const RootDatum& datum, Rng& rng, int denom,
                            int bound) {
  for (int tries = 0; tries < 200; ++tries) {
    RatVec u = random_exact_turns(datum.rank, rng, denom, bound);
    bool wall = false;
    for (int i : datum.delta_p_plus) {
      if (datum.root(i).value(u).is_integer()) wall = true;
    }
    if (!wall) return u;
  }
  throw std::runtime_error("could not sample off-wall turns");
}

RVec turns_to_angles(const RatVec& u) {
  RVec a(static_cast<int>(u.size()));
  for (int i = 0; i < a.size(); ++i) a(i) = u[i].to_double() * 2.0 * kPi;
  return a;
}

RatVec apply_weyl(const Eigen::MatrixXi& w, const RatVec& u) {
  RatVec out(u.size(), Rat(0));
  for (int r = 0; r < w.rows(); ++r) {
    Rat acc(0);
    for (int c = 0; c < w.cols(); ++c) acc = acc + Rat(w(r, c)) * u[c];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}
}  // namespace

TEST_CASE("alcove labels from angles and from exact turns agree") {
  DatumPtr datum = build_root_datum(make_algebra("sp4"));

  RVec a(2);
  a << 1.5 * kPi, 0.25 * kPi;
  AlcoveLabel lbl = alcove_of(*datum, a, tol);
  REQUIRE(lbl.size() == 3);
  CHECK(lbl(0) == 1);  // 2 a1 = 3 pi -> floor(3/2)
  CHECK(lbl(1) == 0);
  CHECK(lbl(2) == 0);  // a1 + a2 = 7 pi / 4

  const AlcoveLabel exact =
      alcove_of_exact(*datum, RatVec{Rat(3, 4), Rat(1, 8)});
  CHECK(exact == lbl);

  a << -0.5 * kPi, -0.5 * kPi;
  lbl = alcove_of(*datum, a, tol);
  CHECK(lbl(0) == -1);
  CHECK(lbl(1) == -1);
  CHECK(lbl(2) == -1);

  // Exactly on a wall (2 e1 evaluates to a full turn): the exact routine
  // refuses, the float routine reports instability.
  CHECK_THROWS_AS(alcove_of_exact(*datum, RatVec{Rat(1, 2), Rat(1, 8)}),
                  std::invalid_argument);
  a << kPi, 0.4;
  CHECK_THROWS_AS(alcove_of(*datum, a, tol), BoundaryUnstableError);
}

TEST_CASE("labels transform correctly under lattice translations") {
  Rng rng(71);
  for (const std::string& name : {std::string("sp4"), std::string("su(2,1)")}) {
    CAPTURE(name);
    DatumPtr datum = build_root_datum(make_algebra(name));
    const KernelLattice& lat = datum->lattice("center");
    for (int k = 0; k < 30; ++k) {
      const RatVec u = random_nonwall_turns(*datum, rng, 9, 2);
      const AlcoveLabel base = alcove_of_exact(*datum, u);
      for (const RatVec& gamma : lat.gens) {
        RatVec shifted = u;
        for (std::size_t i = 0; i < shifted.size(); ++i) {
          shifted[i] = shifted[i] + gamma[i];
        }
        const AlcoveLabel direct = alcove_of_exact(*datum, shifted);
        const AlcoveLabel law = translate_label(*datum, gamma, base);
        CHECK(direct == law);
      }
    }
  }
}

TEST_CASE("labels transform correctly under the Weyl action") {
  Rng rng(72);
  for (const std::string& name : {std::string("sp4"), std::string("su(2,1)"),
                                  std::string("sp6")}) {
    CAPTURE(name);
    DatumPtr datum = build_root_datum(make_algebra(name));
    for (int k = 0; k < 15; ++k) {
      const RatVec u = random_nonwall_turns(*datum, rng, 11, 2);
      const AlcoveLabel base = alcove_of_exact(*datum, u);
      for (const Eigen::MatrixXi& w : datum->weyl) {
        const AlcoveLabel direct = alcove_of_exact(*datum, apply_weyl(w, u));
        const AlcoveLabel law = weyl_act_on_label(*datum, w, base);
        CHECK(direct == law);
      }
    }
  }
}

TEST_CASE("canonical classes are invariant under both group actions") {
  Rng rng(73);
  DatumPtr datum = build_root_datum(make_algebra("sp4"));
  const KernelLattice& lat = datum->lattice("matrix");
  for (int k = 0; k < 20; ++k) {
    const RatVec u = random_nonwall_turns(*datum, rng, 7, 2);
    const AlcoveLabel base = alcove_of_exact(*datum, u);
    const ComponentClass cls = canonical_component(*datum, lat, base);
    for (const Eigen::MatrixXi& w : datum->weyl) {
      const AlcoveLabel moved = weyl_act_on_label(*datum, w, base);
      CHECK(same_component(*datum, lat, base, moved));
      CHECK(canonical_component(*datum, lat, moved).canonical == cls.canonical);
    }
    for (const RatVec& gamma : lat.gens) {
      const AlcoveLabel moved = translate_label(*datum, gamma, base);
      CHECK(canonical_component(*datum, lat, moved).canonical == cls.canonical);
    }
  }
}

TEST_CASE("sp4 component atlas under the matrix-group kernel lattice") {
  DatumPtr datum = build_root_datum(make_algebra("sp4"));
  const KernelLattice& lat = datum->lattice("matrix");

  // Complete invariants of a label (t1, t2, tm) = (theta_{2e1}, theta_{2e2},
  // theta_{e1+e2}): the unordered parity pair {t1, t2} mod 2 (translations
  // shift t1 or t2 by 2, the Weyl swap exchanges them) and the discriminant
  // d = 2 tm - t1 - t2, which translations and the swap both preserve.
  // Nonempty alcoves force |d| <= 1 and d = t1 + t2 (mod 2), so the classes
  // are {0,0} d=0 (basic), {0,1} d=-1, {0,1} d=+1, {1,1} d=0: four total.
  const auto atlas = enumerate_components(*datum, lat, 2);
  CHECK(atlas.size() == 4);
  int basics = 0;
  std::set<std::array<int, 3>> invariants;
  for (const AtlasEntry& e : atlas) {
    basics += e.cls.is_basic() ? 1 : 0;
    const AlcoveLabel& t = e.cls.canonical;
    const int p1 = ((t(0) % 2) + 2) % 2;
    const int p2 = ((t(1) % 2) + 2) % 2;
    const int d = 2 * t(2) - t(0) - t(1);
    CHECK(std::abs(d) <= 1);
    invariants.insert({std::min(p1, p2), std::max(p1, p2), d});
  }
  // All four classes are separated by the invariant pair.
  CHECK(invariants.size() == 4);
  CHECK(basics == 1);

  // (2,2,2) is a pure lattice translate of the basic label.
  AlcoveLabel t(3);
  t << 2, 2, 2;
  CHECK(canonical_component(*datum, lat, t).is_basic());
  t << 1, 1, 1;
  CHECK_FALSE(canonical_component(*datum, lat, t).is_basic());
  // Under the central lattice the same label *is* basic: the center of the
  // group absorbs the simultaneous shift.
  CHECK(canonical_component(*datum, datum->lattice("center"), t).is_basic());
}

TEST_CASE("su(2,1) class counts distinguish the covering lattices") {
  DatumPtr datum = build_root_datum(make_algebra("su(2,1)"));
  // Matrix-group kernel: the label sum mod 3 is a complete invariant.
  const auto atlas3 = enumerate_components(*datum, datum->lattice("matrix"), 2);
  CHECK(atlas3.size() == 3);
  std::set<int> sums;
  for (const AtlasEntry& e : atlas3) {
    sums.insert(((e.cls.canonical(0) + e.cls.canonical(1)) % 3 + 3) % 3);
  }
  CHECK(sums.size() == 3);
  // Central lattice: everything collapses to the basic class.
  const auto atlas1 = enumerate_components(*datum, datum->lattice("center"), 2);
  CHECK(atlas1.size() == 1);
  CHECK(atlas1.front().cls.is_basic());
}

TEST_CASE("atlas witnesses are interior points of their canonical alcoves") {
  Rng rng(74);
  for (const std::string& name : {std::string("sp6"), std::string("su(2,2)")}) {
    CAPTURE(name);
    DatumPtr datum = build_root_datum(make_algebra(name));
    const auto atlas = enumerate_components(*datum, datum->lattice("center"), 1);
    CHECK(!atlas.empty());
    for (const AtlasEntry& e : atlas) {
      CHECK(alcove_nonempty(*datum, e.cls.canonical));
      // The witness satisfies every strict constraint exactly.
      const AlcoveLabel at = alcove_of_exact(*datum, e.witness_turns);
      CHECK(at == e.cls.canonical);
      CHECK(e.orbit_size_in_box >= 1);
    }
  }
}

TEST_CASE("alcove vertex enumeration matches feasibility on sp6") {
  DatumPtr datum = build_root_datum(make_algebra("sp6"));
  Rng rng(75);
  int nonempty_seen = 0;
  int empty_seen = 0;
  for (int k = 0; k < 40; ++k) {
    AlcoveLabel theta(datum->num_positive_noncompact());
    for (int i = 0; i < theta.size(); ++i) {
      theta(i) = static_cast<int>(rng.below(3)) - 1;
    }
    const bool feasible = alcove_nonempty(*datum, theta);
    const auto verts = alcove_vertices(*datum, theta);
    if (verts.empty()) {
      // Empty closure certainly has empty interior.
      CHECK_FALSE(feasible);
      ++empty_seen;
      continue;
    }
    // The vertex centroid lies in the closure; it satisfies every strict
    // constraint iff the open alcove is nonempty.  (Nonempty open alcove =>
    // the closure is a full-dimensional polytope whose vertex centroid is
    // interior; empty open alcove => no point at all satisfies the strict
    // system.)  All arithmetic is exact.
    RatVec c(static_cast<std::size_t>(datum->rank), Rat(0));
    for (const RatVec& v : verts) {
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = c[i] + v[i];
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = c[i] / Rat(static_cast<long long>(verts.size()));
    }
    const LinSystem sys = alcove_system(*datum, theta);
    bool centroid_strictly_inside = true;
    for (const LinConstraint& con : sys.cons) {
      Rat lhs(0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        lhs = lhs + con.a[i] * c[i];
      }
      const bool sat = con.strict ? lhs < con.b : !(con.b < lhs);
      if (!sat) centroid_strictly_inside = false;
    }
    CHECK(centroid_strictly_inside == feasible);
    if (feasible) {
      ++nonempty_seen;
      // Full-dimensional closures have at least rank + 1 vertices.
      CHECK(static_cast<int>(verts.size()) >= datum->rank + 1);
    } else {
      ++empty_seen;
    }
  }
  CHECK(nonempty_seen > 0);
  CHECK(empty_seen > 0);
}

TEST_CASE("component of a conjugated exponential matches the exact label") {
  Rng rng(76);
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  const KernelLattice& lat = datum->lattice("matrix");
  int matched = 0;
  int walls = 0;
  for (int k = 0; k < 12; ++k) {
    const RatVec u = random_exact_turns(2, rng, 13, 1);
    bool on_wall = false;
    for (int i : datum->delta_p_plus) {
      if (datum->root(i).value(u).is_integer()) on_wall = true;
    }
    RVec c(alg->dim);
    for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
    c *= 0.7 / std::max(1e-12, c.norm());
    const GroupElement q = group_exp(element_from_coords(alg, c), tol);
    const GroupElement g =
        group_conj(q, group_exp(datum->torus(turns_to_angles(u)), tol));
    if (on_wall) {
      // A root value on 2 pi Z makes the element non-stably-elliptic, which
      // component_of must refuse rather than mislabel.
      CHECK_THROWS_AS(component_of(g, *datum, lat, tol),
                      const std::invalid_argument&);
      ++walls;
      continue;
    }
    const AlcoveLabel want_label = alcove_of_exact(*datum, u);
    if (!alcove_nonempty(*datum, want_label)) continue;
    const ComponentClass want = canonical_component(*datum, lat, want_label);
    const ElementComponent got = component_of(g, *datum, lat, tol);
    CHECK(got.cls.canonical == want.canonical);
    ++matched;
  }
  CHECK(matched > 0);
  MESSAGE("matched ", matched, " wall refusals ", walls);
}

TEST_CASE("class witnesses reproduce the canonical reduction") {
  Rng rng(77);
  DatumPtr datum = build_root_datum(make_algebra("su(2,2)"));
  const KernelLattice& lat = datum->lattice("matrix");
  for (int k = 0; k < 15; ++k) {
    const RatVec u = random_nonwall_turns(*datum, rng, 5, 2);
    const AlcoveLabel base = alcove_of_exact(*datum, u);
    if (!alcove_nonempty(*datum, base)) continue;
    const ComponentClass cls = canonical_component(*datum, lat, base);
    // Recompute: canonical = (w . base) - label shift of the lattice vector.
    RatVec neg(cls.lattice_shift_turns.size(), Rat(0));
    for (std::size_t i = 0; i < neg.size(); ++i) {
      neg[i] = -cls.lattice_shift_turns[i];
    }
    const AlcoveLabel rebuilt = translate_label(
        *datum, neg,
        weyl_act_on_label(*datum, datum->weyl[cls.weyl_index], base));
    CHECK(rebuilt == cls.canonical);
  }
}

TEST_CASE("enumeration bound is validated") {
  DatumPtr datum = build_root_datum(make_algebra("sl2"));
  CHECK_THROWS_AS(enumerate_components(*datum, datum->lattice("matrix"), 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_components(*datum, datum->lattice("matrix"), -1),
                  std::invalid_argument);
}
