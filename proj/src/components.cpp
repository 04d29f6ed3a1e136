#include "elliptica/components.hpp"

#include "elliptica/errors.hpp"
#include "elliptica/intlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace elliptica {

namespace {

/// Lexicographic comparison of labels.
bool label_less(const AlcoveLabel& a, const AlcoveLabel& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

std::vector<int> label_key(const AlcoveLabel& a) {
  return std::vector<int>(a.data(), a.data() + a.size());
}

/// Image of the kernel lattice under the root pairing: one integer column
/// alpha(gamma) per generator, alpha running over the positive noncompact
/// roots in declared order.  Generators pair integrally by construction
/// (validated when the root datum is built).
IntMat image_lattice(const RootDatum& datum, const KernelLattice& lattice) {
  const int m = datum.num_positive_noncompact();
  const int k = static_cast<int>(lattice.gens.size());
  IntMat img(m, k);
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < m; ++i) {
      const Rat v = datum.root(datum.delta_p_plus[i]).value(lattice.gens[c]);
      if (!v.is_integer()) {
        throw InvariantViolation(
            "image_lattice: generator pairs non-integrally with root " +
            datum.root(datum.delta_p_plus[i]).name);
      }
      img(i, c) = v.num();
    }
  }
  return img;
}

IntVec to_int_vec(const AlcoveLabel& a) {
  IntVec v(a.size());
  for (int i = 0; i < a.size(); ++i) v(i) = a(i);
  return v;
}

AlcoveLabel to_label(const IntVec& v) {
  AlcoveLabel a(v.size());
  for (int i = 0; i < v.size(); ++i) {
    a(i) = static_cast<int>(v(i));
  }
  return a;
}

}  // namespace

AlcoveLabel alcove_of(const RootDatum& datum, const RVec& angles,
                      const Tolerances& tol) {
  const int m = datum.num_positive_noncompact();
  AlcoveLabel theta(m);
  for (int i = 0; i < m; ++i) {
    const Root& alpha = datum.root(datum.delta_p_plus[i]);
    const double turns = alpha.value(angles) / (2.0 * M_PI);
    if (std::abs(turns - std::round(turns)) < tol.boundary_margin) {
      std::ostringstream os;
      os << "alcove_of: root " << alpha.name << " value within "
         << tol.boundary_margin << " turns of a wall (value " << turns
         << " turns)";
      throw BoundaryUnstableError(os.str());
    }
    theta(i) = static_cast<int>(std::floor(turns));
  }
  return theta;
}

AlcoveLabel alcove_of_exact(const RootDatum& datum, const RatVec& turns) {
  if (static_cast<int>(turns.size()) != datum.rank) {
    throw std::invalid_argument("alcove_of_exact: wrong coordinate count");
  }
  const int m = datum.num_positive_noncompact();
  AlcoveLabel theta(m);
  for (int i = 0; i < m; ++i) {
    const Root& alpha = datum.root(datum.delta_p_plus[i]);
    const Rat v = alpha.value(turns);
    if (v.is_integer()) {
      throw std::invalid_argument("alcove_of_exact: point lies on the wall " +
                                  alpha.name + " = " + v.str());
    }
    theta(i) = static_cast<int>(v.floor());
  }
  return theta;
}

LinSystem alcove_system(const RootDatum& datum, const AlcoveLabel& theta) {
  const int m = datum.num_positive_noncompact();
  if (theta.size() != m) {
    throw std::invalid_argument("alcove label has wrong length");
  }
  LinSystem sys;
  sys.dim = datum.rank;
  for (int i = 0; i < m; ++i) {
    const Root& alpha = datum.root(datum.delta_p_plus[i]);
    RatVec up(datum.rank), lo(datum.rank);
    for (int j = 0; j < datum.rank; ++j) {
      up[j] = Rat(alpha.covector(j));
      lo[j] = Rat(-alpha.covector(j));
    }
    sys.add(up, Rat(theta(i)) + Rat(1), /*strict=*/true);  //  alpha.u < th+1
    sys.add(lo, Rat(-theta(i)), /*strict=*/true);          // -alpha.u < -th
  }
  return sys;
}

bool alcove_nonempty(const RootDatum& datum, const AlcoveLabel& theta) {
  return fm_feasible(alcove_system(datum, theta));
}

std::vector<RatVec> alcove_vertices(const RootDatum& datum,
                                    const AlcoveLabel& theta) {
  return enumerate_vertices(alcove_system(datum, theta));
}

AlcoveLabel weyl_act_on_label(const RootDatum& datum, const Eigen::MatrixXi& w,
                              const AlcoveLabel& theta) {
  const int m = datum.num_positive_noncompact();
  if (theta.size() != m) {
    throw std::invalid_argument("alcove label has wrong length");
  }
  AlcoveLabel out(m);
  for (int i = 0; i < m; ++i) {
    const Root& beta = datum.root(datum.delta_p_plus[i]);
    // beta(w x) = (w^T beta) (x); match w^T beta against +/- positive roots.
    const Eigen::VectorXi pulled = w.transpose() * beta.covector;
    bool matched = false;
    for (int j = 0; j < m && !matched; ++j) {
      const Eigen::VectorXi& cov = datum.root(datum.delta_p_plus[j]).covector;
      if (pulled == cov) {
        out(i) = theta(j);
        matched = true;
      } else if (pulled == -cov) {
        out(i) = -theta(j) - 1;
        matched = true;
      }
    }
    if (!matched) {
      throw InvariantViolation(
          "weyl_act_on_label: Weyl element does not permute the noncompact "
          "roots up to sign");
    }
  }
  return out;
}

AlcoveLabel translate_label(const RootDatum& datum, const RatVec& gamma_turns,
                            const AlcoveLabel& theta) {
  const int m = datum.num_positive_noncompact();
  if (theta.size() != m) {
    throw std::invalid_argument("alcove label has wrong length");
  }
  if (static_cast<int>(gamma_turns.size()) != datum.rank) {
    throw std::invalid_argument("translate_label: wrong coordinate count");
  }
  AlcoveLabel out(m);
  for (int i = 0; i < m; ++i) {
    const Root& alpha = datum.root(datum.delta_p_plus[i]);
    const Rat shift = alpha.value(gamma_turns);
    if (!shift.is_integer()) {
      throw std::invalid_argument(
          "translate_label: vector pairs non-integrally with root " +
          alpha.name + " (value " + shift.str() + ")");
    }
    out(i) = theta(i) + static_cast<int>(shift.num());
  }
  return out;
}

ComponentClass canonical_component(const RootDatum& datum,
                                   const KernelLattice& lattice,
                                   const AlcoveLabel& theta) {
  if (!alcove_nonempty(datum, theta)) {
    std::ostringstream os;
    os << "canonical_component: label [";
    for (int i = 0; i < theta.size(); ++i) os << (i ? "," : "") << theta(i);
    os << "] has empty alcove";
    throw std::invalid_argument(os.str());
  }

  const IntMat img = image_lattice(datum, lattice);
  std::vector<int> pivots;
  const IntMat H = hermite_normal_form(img, &pivots);

  bool have = false;
  AlcoveLabel best;
  int best_w = 0;
  IntVec best_shift;
  for (int wi = 0; wi < static_cast<int>(datum.weyl.size()); ++wi) {
    const AlcoveLabel moved = weyl_act_on_label(datum, datum.weyl[wi], theta);
    const IntVec mv = to_int_vec(moved);
    const IntVec red = coset_reduce(H, pivots, mv);
    const AlcoveLabel cand = to_label(red);
    if (!have || label_less(cand, best)) {
      have = true;
      best = cand;
      best_w = wi;
      best_shift = mv - red;
    }
  }

  ComponentClass cls;
  cls.canonical = best;
  cls.lattice_name = lattice.name;
  cls.weyl_index = best_w;

  // Express the subtracted image vector as an integer combination of the
  // lattice generators (they are linearly independent, so the rational
  // solution is unique, and it is integral because the shift lies in the
  // image lattice).
  const int k = static_cast<int>(lattice.gens.size());
  cls.lattice_coeffs.assign(k, 0);
  cls.lattice_shift_turns.assign(datum.rank, Rat(0));
  if (k > 0 && best_shift.size() > 0) {
    RatMat gram(k, RatVec(k, Rat(0)));
    RatVec rhs(k, Rat(0));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        long long s = 0;
        for (int i = 0; i < img.rows(); ++i) s += img(i, a) * img(i, b);
        gram[a][b] = Rat(s);
      }
      long long s = 0;
      for (int i = 0; i < img.rows(); ++i) s += img(i, a) * best_shift(i);
      rhs[a] = Rat(s);
    }
    RatVec coeff;
    if (!rat_solve(gram, rhs, coeff)) {
      throw InvariantViolation(
          "canonical_component: dependent lattice generators");
    }
    for (int a = 0; a < k; ++a) {
      if (!coeff[a].is_integer()) {
        throw InvariantViolation(
            "canonical_component: non-integral lattice coefficient " +
            coeff[a].str());
      }
      cls.lattice_coeffs[a] = coeff[a].num();
      for (int j = 0; j < datum.rank; ++j) {
        cls.lattice_shift_turns[j] += coeff[a] * lattice.gens[a][j];
      }
    }
  }

  // Witness check: w * theta translated by -gamma must reproduce canonical.
  RatVec neg(datum.rank);
  for (int j = 0; j < datum.rank; ++j) neg[j] = -cls.lattice_shift_turns[j];
  const AlcoveLabel check = translate_label(
      datum, neg, weyl_act_on_label(datum, datum.weyl[best_w], theta));
  if (check != cls.canonical) {
    throw InvariantViolation(
        "canonical_component: witness fails to reproduce canonical label");
  }
  return cls;
}

bool same_component(const RootDatum& datum, const KernelLattice& lattice,
                    const AlcoveLabel& a, const AlcoveLabel& b) {
  return canonical_component(datum, lattice, a).canonical ==
         canonical_component(datum, lattice, b).canonical;
}

ElementComponent component_of(const GroupElement& g, const RootDatum& datum,
                              const KernelLattice& lattice,
                              const Tolerances& tol) {
  const EllipticityReport report = classify_element(g, tol);
  if (!report.stably_elliptic) {
    throw std::invalid_argument(
        "component_of: element is not stably elliptic");
  }
  const TorusForm form =
      report.torus ? *report.torus : torus_representative(g, tol);
  ElementComponent out;
  out.angles = form.angles;
  out.label = alcove_of(datum, form.angles, tol);
  out.cls = canonical_component(datum, lattice, out.label);
  return out;
}

std::vector<AtlasEntry> enumerate_components(const RootDatum& datum,
                                             const KernelLattice& lattice,
                                             int bound) {
  if (bound < 0 || bound > 6) {
    throw std::invalid_argument("enumerate_components: bound must be in [0,6]");
  }
  const int m = datum.num_positive_noncompact();

  // Depth-first enumeration of box labels with exact feasibility pruning on
  // prefixes: once the first i roots pin an empty region, no extension of
  // that prefix is nonempty.
  std::map<std::vector<int>, AtlasEntry> classes;
  AlcoveLabel theta = AlcoveLabel::Zero(m);
  std::function<void(int)> walk = [&](int depth) {
    if (depth == m) {
      const ComponentClass cls = canonical_component(datum, lattice, theta);
      if (cls.canonical.cwiseAbs().maxCoeff() > bound) return;
      auto it = classes.find(label_key(cls.canonical));
      if (it == classes.end()) {
        AtlasEntry entry;
        entry.cls = cls;
        const auto point =
            fm_feasible_point(alcove_system(datum, cls.canonical));
        if (!point) {
          throw InvariantViolation(
              "enumerate_components: canonical alcove unexpectedly empty");
        }
        entry.witness_turns = *point;
        entry.orbit_size_in_box = 1;
        classes.emplace(label_key(cls.canonical), std::move(entry));
      } else {
        ++it->second.orbit_size_in_box;
      }
      return;
    }
    LinSystem prefix;
    prefix.dim = datum.rank;
    for (int bnd = -bound; bnd <= bound; ++bnd) {
      theta(depth) = bnd;
      prefix.cons.clear();
      for (int i = 0; i <= depth; ++i) {
        const Root& alpha = datum.root(datum.delta_p_plus[i]);
        RatVec up(datum.rank), lo(datum.rank);
        for (int j = 0; j < datum.rank; ++j) {
          up[j] = Rat(alpha.covector(j));
          lo[j] = Rat(-alpha.covector(j));
        }
        prefix.add(up, Rat(theta(i)) + Rat(1), true);
        prefix.add(lo, Rat(-theta(i)), true);
      }
      if (!fm_feasible(prefix)) continue;
      walk(depth + 1);
    }
    theta(depth) = 0;
  };
  walk(0);

  std::vector<AtlasEntry> out;
  out.reserve(classes.size());
  for (auto& [key, entry] : classes) out.push_back(std::move(entry));
  return out;
}

}  // namespace elliptica
