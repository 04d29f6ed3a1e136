#pragma once

#include "elliptica/causal.hpp"
#include "elliptica/components.hpp"
#include "elliptica/ellipticity.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace elliptica {

/// Insertion-ordered JSON document type used throughout the tool layer.
using Json = nlohmann::ordered_json;

/// Deterministic serialization: fixed key order (insertion), floats printed
/// with 17 significant digits (lossless round trip), 2-space indentation.
std::string dump_json(const Json& j);

// --- matrix / rational helpers --------------------------------------------

Json json_from_cmat(const CMat& m);
CMat cmat_from_json(const Json& j);
Json json_from_rvec(const RVec& v);
RVec rvec_from_json(const Json& j);
Json json_from_ratvec(const RatVec& v);  ///< exact "p/q" strings
RatVec ratvec_from_json(const Json& j);

// --- report serialization ---------------------------------------------------

Json report_to_json(const EllipticityReport& rep);
Json class_to_json(const ComponentClass& cls);
Json component_to_json(const ElementComponent& ec);
Json krein_to_json(const KreinReport& kr);
Json cone_to_json(const ConeQuery& q);
Json datum_to_json(const RootDatum& datum);
Json atlas_to_json(const RootDatum& datum, const KernelLattice& lattice,
                   int bound, const std::vector<AtlasEntry>& entries);
Json curve_summary_to_json(const CausalCheckReport& report);

// --- causal-curve CSV (versioned column layout) -----------------------------

/// Columns: t, defining-matrix entries (row-major real block, then imaginary
/// block for complex families), velocity coordinates, tau, f_gw,
/// cone_margin, step_residual.  tau/f_gw are NaN where undefined.
std::string curve_to_csv(const CausalCurve& curve,
                         const Tolerances& tol = default_tolerances());

/// Rebuilds the curve (t, matrices, velocities) from the CSV text; derived
/// columns are ignored.  Throws invalid_argument on version/shape mismatch.
CausalCurve curve_from_csv(const std::string& text, const DescPtr& alg,
                           const Tolerances& tol = default_tolerances());

// --- element specifications --------------------------------------------------

/// Serializable recipe for one group element.  Exactness-critical inputs are
/// rationals (torus angles as multiples of pi) or seeds, never floats.
struct ElementSpec {
  std::string group;  ///< e.g. "sp4", "sl2", "su(2,1)"
  std::string kind;   ///< "angles" | "matrix" | "word" | "random"

  // kind == "angles": exact multiples of pi per torus coordinate, with an
  // optional seeded random conjugation.
  RatVec angles_pi;
  bool conjugate = false;
  std::uint64_t conj_seed = 0;

  // kind == "matrix"
  CMat matrix;

  // kind == "word": coordinate vectors of algebra elements; the element is
  // the product of their exponentials.
  std::vector<RVec> word_coords;

  // kind == "random"
  std::uint64_t seed = 0;
  std::string random_kind = "elliptic";  ///< "elliptic" | "generic"
  double scale = 1.0;
};

ElementSpec element_spec_from_json(const Json& j);
Json element_spec_to_json(const ElementSpec& spec);

/// Constructed element plus (when available) the exponential word realizing
/// it, for path-based evaluations.
struct BuiltElement {
  GroupElement g;
  std::vector<AlgebraElement> word;  ///< empty for kind == "matrix"
  bool exact_angles = false;         ///< true when angles_pi applies
  RatVec turns;                      ///< exact torus coordinates (units 2*pi)
};

BuiltElement build_element(const ElementSpec& spec,
                           const Tolerances& tol = default_tolerances());

// --- tolerance profiles -------------------------------------------------------

/// Partial override: known keys replace fields of `base`; unknown keys throw
/// invalid_argument.
Tolerances tolerances_from_json(const Json& j, Tolerances base);
Json tolerances_to_json(const Tolerances& tol);

/// Full classify report (ellipticity + component + tau + f_gw + certificates)
/// and its certificate revalidation, used by the round-trip invariant test.
Json classify_to_json(const GroupElement& g, const std::string& lattice_name,
                      const Tolerances& tol = default_tolerances());
bool revalidate_classify_json(const Json& j,
                              const Tolerances& tol = default_tolerances());

}  // namespace elliptica
