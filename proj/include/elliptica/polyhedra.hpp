#pragma once

#include "elliptica/rational.hpp"

#include <optional>
#include <vector>

namespace elliptica {

/// One linear constraint  a . y  (<|<=)  b  over rational vectors y.
struct LinConstraint {
  RatVec a;
  Rat b;
  bool strict = false;
};

/// A finite system of rational linear constraints in `dim` variables.
struct LinSystem {
  int dim = 0;
  std::vector<LinConstraint> cons;

  void add(const RatVec& a, const Rat& b, bool strict) {
    cons.push_back({a, b, strict});
  }
};

/// Exact feasibility of a (possibly strict) rational system via
/// Fourier-Motzkin elimination.  Sound and complete for any dimension; the
/// systems here have <= 3 variables and ~12 constraints, so blowup is moot.
bool fm_feasible(const LinSystem& sys);

/// A feasible point of the system, produced by eliminating variables and
/// back-substituting interval midpoints.  Empty when infeasible.
std::optional<RatVec> fm_feasible_point(const LinSystem& sys);

/// All vertices of the (closed) polyhedron, by exact enumeration of
/// d-subsets of the constraint hyperplanes.  Strict flags are ignored (the
/// closure is enumerated).  Duplicates are removed; order is lexicographic.
std::vector<RatVec> enumerate_vertices(const LinSystem& sys);

}  // namespace elliptica
