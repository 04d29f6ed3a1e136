#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "elliptica/algebra.hpp"
#include "elliptica/rational.hpp"

namespace elliptica {

/// One root, stored as an integer covector on the angle coordinates of the
/// compactly embedded Cartan t, scaled so that the covector applied to x
/// equals i*alpha(x) (a real number).
struct Root {
  std::string name;          ///< e.g. "2e1", "e1+e2", "e1-e3"
  Eigen::VectorXi covector;
  bool compact = false;

  double value(const RVec& angles) const {
    double v = 0;
    for (int j = 0; j < covector.size(); ++j) v += covector(j) * angles(j);
    return v;
  }
  Rat value(const RatVec& angles) const {
    Rat v(0);
    for (int j = 0; j < covector.size(); ++j) {
      v += Rat(covector(j)) * angles[j];
    }
    return v;
  }
};

/// A lattice in t, given by generators in angle coordinates measured in
/// units of 2*pi (exact rationals).  Used for exp_T kernels of specific
/// covering groups and for the central lattice.
struct KernelLattice {
  std::string name;
  int rank = 0;
  std::vector<RatVec> gens;  ///< each generator has `rank` entries (units 2*pi)

  /// Generators as a real matrix (angle units, i.e. multiplied by 2*pi).
  RMat gens_real() const;
};

/// Root datum of one family: Cartan t with angle coordinates, the full root
/// system split into compact and noncompact roots, the adapted positive
/// system (in declared order), the central element z with i*alpha(z) = 1 for
/// all alpha in Delta_p^+, the small Weyl group as integer matrices on angle
/// coordinates, and the kernel-lattice presets.
struct RootDatum {
  DescPtr alg;
  int rank = 0;
  std::vector<Root> roots;        ///< all roots (both signs)
  std::vector<int> delta_p_plus;  ///< indices into `roots`, declared order
  std::vector<int> delta_k_plus;
  RatVec z_angles_rat;            ///< z in angle coordinates (exact)
  RVec z_angles;
  std::vector<Eigen::MatrixXi> weyl_gens;
  std::vector<Eigen::MatrixXi> weyl;  ///< full group (closure of generators)
  RMat torus_embed;                   ///< algebra coords of each angle axis
  double angle_period = 0.0;  ///< exp period per angle coordinate (2pi or 4pi)
  std::vector<KernelLattice> lattices;

  AlgebraElement torus(const RVec& angles) const;
  AlgebraElement z_element() const { return torus(z_angles); }
  const Root& root(int index) const { return roots[index]; }
  int num_positive_noncompact() const {
    return static_cast<int>(delta_p_plus.size());
  }
  const KernelLattice& lattice(const std::string& name) const;
};

using DatumPtr = std::shared_ptr<const RootDatum>;

/// Builds (and caches) the root datum for a group family.  Verifies at
/// construction: the ad-eigenvector relation of every root against the
/// matrix realization, the compactness split via the sign of
/// i*alpha([z,z*]), i*alpha(z) = 1 on the adapted positive system, Weyl
/// generators permuting the roots up to sign, and preset lattices being
/// sublattices of the central lattice.
DatumPtr build_root_datum(const DescPtr& alg);

/// Winding number of t -> det_C(unitary part of exp(t * torus(angles))),
/// t in [0,1], tracked numerically with phase unwrapping.  Defined for the
/// sl2/sp families (complex-structure route).
int torus_loop_winding(const RootDatum& datum, const RVec& angles);

}  // namespace elliptica
