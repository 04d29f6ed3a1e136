#pragma once

#include "elliptica/ellipticity.hpp"
#include "elliptica/polyhedra.hpp"
#include "elliptica/structure.hpp"

#include <string>
#include <vector>

namespace elliptica {

/// Alcove label: one integer per positive noncompact root, in the declared
/// root order of the family.  theta_alpha = floor(alpha(x) / 2*pi).
using AlcoveLabel = Eigen::VectorXi;

/// Label of the open alcove containing the torus point `angles`.
/// Throws BoundaryUnstableError (naming the offending root) when some root
/// value is within `tol.boundary_margin` of a wall, i.e. of 2*pi*Z.
AlcoveLabel alcove_of(const RootDatum& datum, const RVec& angles,
                      const Tolerances& tol = default_tolerances());

/// Exact overload: `turns` are angle coordinates in units of 2*pi.  Wall
/// membership is decided exactly; on-wall input throws invalid_argument.
AlcoveLabel alcove_of_exact(const RootDatum& datum, const RatVec& turns);

/// Exact emptiness decision for the open alcove with the given label.
bool alcove_nonempty(const RootDatum& datum, const AlcoveLabel& theta);

/// The strict (open-alcove) constraint system in turn coordinates:
/// theta_alpha < alpha . u < theta_alpha + 1 for every positive noncompact
/// root.  Exposed so callers can enumerate vertices or pick sample points.
LinSystem alcove_system(const RootDatum& datum, const AlcoveLabel& theta);

/// Vertices of the alcove closure, exact, in turn coordinates.
std::vector<RatVec> alcove_vertices(const RootDatum& datum,
                                    const AlcoveLabel& theta);

/// Action of a Weyl element on labels: if w maps root alpha to root beta the
/// new label at beta is theta_alpha; if it maps alpha to -beta the new label
/// at beta is -theta_alpha - 1 (floor of a sign-flipped interior value).
AlcoveLabel weyl_act_on_label(const RootDatum& datum, const Eigen::MatrixXi& w,
                              const AlcoveLabel& theta);

/// Translation by a lattice vector gamma (turn coordinates): the label shifts
/// by the exact integers alpha(gamma).  Throws invalid_argument when some
/// alpha(gamma) is not an integer (gamma outside the root-integral lattice).
AlcoveLabel translate_label(const RootDatum& datum, const RatVec& gamma_turns,
                            const AlcoveLabel& theta);

/// A connected-component class of the stably elliptic set, named by the
/// lexicographically minimal label reachable from the input by the Weyl
/// action and kernel-lattice translations.  The witness fields reproduce the
/// reduction:  coset_reduce(w * theta) == canonical, and the subtracted image
/// vector is alpha(gamma) for the recorded lattice vector gamma.
struct ComponentClass {
  AlcoveLabel canonical;
  std::string lattice_name;
  int weyl_index = 0;                   ///< index into datum.weyl
  std::vector<long long> lattice_coeffs;  ///< integer combo of lattice gens
  RatVec lattice_shift_turns;           ///< the translating lattice vector

  bool is_basic() const { return canonical.isZero(); }
};

/// Canonical class of a (nonempty) alcove label under the given lattice.
/// Throws invalid_argument when the label's alcove is empty.
ComponentClass canonical_component(const RootDatum& datum,
                                   const KernelLattice& lattice,
                                   const AlcoveLabel& theta);

/// Same-component test: equality of canonical labels.
bool same_component(const RootDatum& datum, const KernelLattice& lattice,
                    const AlcoveLabel& a, const AlcoveLabel& b);

/// Component class of a stably elliptic group element: torus reduction,
/// alcove label, canonicalization.  Throws invalid_argument when g is not
/// stably elliptic, BoundaryUnstableError near an alcove wall.
struct ElementComponent {
  ComponentClass cls;
  RVec angles;        ///< torus angles of the reduction
  AlcoveLabel label;  ///< raw (pre-canonicalization) label
};
ElementComponent component_of(const GroupElement& g, const RootDatum& datum,
                              const KernelLattice& lattice,
                              const Tolerances& tol = default_tolerances());

/// One atlas entry: a component class, an exact interior sample point of its
/// canonical alcove (turn coordinates), and how many labels inside the
/// enumeration box fall into the class.
struct AtlasEntry {
  ComponentClass cls;
  RatVec witness_turns;
  int orbit_size_in_box = 0;
};

/// All component classes whose canonical label lies in [-bound, bound]^m,
/// m = #positive noncompact roots, discovered by enumerating nonempty
/// alcove labels in that box.  `bound` must be in [0, 6].
std::vector<AtlasEntry> enumerate_components(const RootDatum& datum,
                                             const KernelLattice& lattice,
                                             int bound);

}  // namespace elliptica
