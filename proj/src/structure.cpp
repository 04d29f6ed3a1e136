#include "elliptica/structure.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "elliptica/errors.hpp"
#include "elliptica/intlinalg.hpp"
#include "elliptica/matutil.hpp"
#include "elliptica/tolerances.hpp"

namespace elliptica {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXi make_cov(int rank, std::initializer_list<std::pair<int, int>> terms) {
  Eigen::VectorXi c = Eigen::VectorXi::Zero(rank);
  for (auto [idx, coef] : terms) c(idx) += coef;
  return c;
}

std::string pm_name(const std::string& pos) { return "-(" + pos + ")"; }

// ---------------------------------------------------------------------------
// Family-specific construction
// ---------------------------------------------------------------------------

void build_sl2(RootDatum& d) {
  d.rank = 1;
  d.angle_period = 4.0 * kPi;
  Root pos{"alpha", make_cov(1, {{0, 1}}), false};
  Root neg{pm_name("alpha"), -pos.covector, false};
  d.roots = {pos, neg};
  d.delta_p_plus = {0};
  d.delta_k_plus = {};
  d.z_angles_rat = {Rat(1)};
  // torus(c) = c*z where z = (1/2) * basis[0]
  d.torus_embed = RMat::Zero(3, 1);
  d.torus_embed(0, 0) = 0.5;

  d.lattices.push_back({"trivial", 1, {}});
  d.lattices.push_back({"universal", 1, {}});
  d.lattices.push_back({"matrix", 1, {{Rat(2)}}});
  d.lattices.push_back({"adjoint", 1, {{Rat(1)}}});
  d.lattices.push_back({"center", 1, {{Rat(1)}}});
}

void build_sp(RootDatum& d, int n) {
  d.rank = n;
  d.angle_period = 2.0 * kPi;
  std::vector<Root> pos;
  // Noncompact positive roots: 2e_j first, then e_i + e_j (i < j) lex.
  for (int j = 0; j < n; ++j) {
    std::ostringstream nm;
    nm << "2e" << (j + 1);
    pos.push_back({nm.str(), make_cov(n, {{j, 2}}), false});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::ostringstream nm;
      nm << "e" << (i + 1) << "+e" << (j + 1);
      pos.push_back({nm.str(), make_cov(n, {{i, 1}, {j, 1}}), false});
    }
  }
  int num_nc = static_cast<int>(pos.size());
  // Compact positive roots: e_i - e_j (i < j).
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::ostringstream nm;
      nm << "e" << (i + 1) << "-e" << (j + 1);
      pos.push_back({nm.str(), make_cov(n, {{i, 1}, {j, -1}}), true});
    }
  }
  d.roots = pos;
  for (const Root& r : pos) {
    d.roots.push_back({pm_name(r.name), -r.covector, r.compact});
  }
  for (int k = 0; k < num_nc; ++k) d.delta_p_plus.push_back(k);
  for (int k = num_nc; k < static_cast<int>(pos.size()); ++k) {
    d.delta_k_plus.push_back(k);
  }
  d.z_angles_rat.assign(n, Rat(1, 2));
  d.torus_embed = RMat::Zero(d.alg->dim, n);
  for (int j = 0; j < n; ++j) d.torus_embed(j, j) = 1.0;  // torus basis first

  for (int j = 0; j + 1 < n; ++j) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Identity(n, n);
    m(j, j) = m(j + 1, j + 1) = 0;
    m(j, j + 1) = m(j + 1, j) = 1;
    d.weyl_gens.push_back(m);
  }

  d.lattices.push_back({"trivial", n, {}});
  KernelLattice matrix_lat{"matrix", n, {}};
  for (int j = 0; j < n; ++j) {
    RatVec g(n, Rat(0));
    g[j] = Rat(1);
    matrix_lat.gens.push_back(g);
  }
  d.lattices.push_back(matrix_lat);
  KernelLattice univ{"universal", n, {}};
  for (int j = 0; j + 1 < n; ++j) {
    RatVec g(n, Rat(0));
    g[j] = Rat(1);
    g[j + 1] = Rat(-1);
    univ.gens.push_back(g);
  }
  d.lattices.push_back(univ);
  KernelLattice center{"center", n, {}};
  center.gens.push_back(RatVec(n, Rat(1, 2)));
  for (int j = 0; j + 1 < n; ++j) {
    RatVec g(n, Rat(0));
    g[j] = Rat(1);
    center.gens.push_back(g);
  }
  d.lattices.push_back(center);
}

void build_su(RootDatum& d, int p, int q) {
  const int n = p + q;
  const int r = n - 1;
  d.rank = r;
  d.angle_period = 2.0 * kPi;
  // Angle coordinates are a_1..a_{n-1}; a_n = -(a_1+...+a_{n-1}).
  auto ind = [&](int k) {  // 1-based matrix index -> covector contribution
    Eigen::VectorXi v = Eigen::VectorXi::Zero(r);
    if (k < n) {
      v(k - 1) = 1;
    } else {
      v.setConstant(-1);
    }
    return v;
  };
  auto is_compact_pair = [&](int i, int j) { return (j <= p) || (i > p); };

  std::vector<std::pair<int, int>> nc_pos, k_pos;
  for (int i = 1; i <= p; ++i) {
    for (int j = p + 1; j <= n; ++j) nc_pos.emplace_back(i, j);
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (is_compact_pair(i, j)) k_pos.emplace_back(i, j);
    }
  }
  auto push_pair = [&](int i, int j, bool compact) {
    std::ostringstream nm;
    nm << "e" << i << "-e" << j;
    d.roots.push_back({nm.str(), (ind(i) - ind(j)).eval(), compact});
  };
  for (auto [i, j] : nc_pos) push_pair(i, j, false);
  for (auto [i, j] : k_pos) push_pair(i, j, true);
  int npos = static_cast<int>(d.roots.size());
  for (auto [i, j] : nc_pos) push_pair(j, i, false);
  for (auto [i, j] : k_pos) push_pair(j, i, true);
  for (int k = 0; k < static_cast<int>(nc_pos.size()); ++k) {
    d.delta_p_plus.push_back(k);
  }
  for (int k = static_cast<int>(nc_pos.size()); k < npos; ++k) {
    d.delta_k_plus.push_back(k);
  }

  d.z_angles_rat.assign(r, Rat(0));
  for (int j = 0; j < r; ++j) {
    d.z_angles_rat[j] = (j < p) ? Rat(q, n) : Rat(-p, n);
  }
  d.torus_embed = RMat::Zero(d.alg->dim, r);
  for (int j = 0; j < r; ++j) d.torus_embed(j, j) = 1.0;  // torus basis first

  auto swap_gen = [&](int j) {  // 1-based transposition (j, j+1)
    Eigen::MatrixXi m = Eigen::MatrixXi::Identity(r, r);
    if (j + 1 < n) {
      m(j - 1, j - 1) = m(j, j) = 0;
      m(j - 1, j) = m(j, j - 1) = 1;
    } else {
      for (int c = 0; c < r; ++c) m(j - 1, c) = -1;
    }
    return m;
  };
  for (int j = 1; j < p; ++j) d.weyl_gens.push_back(swap_gen(j));
  for (int j = p + 1; j < n; ++j) d.weyl_gens.push_back(swap_gen(j));

  d.lattices.push_back({"trivial", r, {}});
  KernelLattice matrix_lat{"matrix", r, {}};
  for (int j = 0; j < r; ++j) {
    RatVec g(r, Rat(0));
    g[j] = Rat(1);
    matrix_lat.gens.push_back(g);
  }
  d.lattices.push_back(matrix_lat);
  KernelLattice center{"center", r, {}};
  center.gens.push_back(RatVec(r, Rat(1, n)));
  for (int j = 0; j + 1 < r; ++j) {
    RatVec g(r, Rat(0));
    g[j] = Rat(1);
    center.gens.push_back(g);
  }
  d.lattices.push_back(center);
}

// ---------------------------------------------------------------------------
// Construction-time verification
// ---------------------------------------------------------------------------

CVec bracket_complex(const LieAlgebraDescriptor& alg, const CVec& x, const CVec& y) {
  CVec out = CVec::Zero(alg.dim);
  for (int k = 0; k < alg.dim; ++k) {
    if (std::abs(x(k)) == 0.0) continue;
    out += x(k) * (alg.ad_basis[k] * y.real()).cast<Cplx>() +
           x(k) * Cplx(0, 1) * (alg.ad_basis[k] * y.imag()).cast<Cplx>();
  }
  return out;
}

void verify_roots(const RootDatum& d) {
  const auto& alg = *d.alg;
  const double tol = 1e-8;
  // Generic torus point with irrational coordinate ratios.
  RVec y0(d.rank);
  for (int j = 0; j < d.rank; ++j) y0(j) = std::sqrt(2.0 + j) / 2.0;

  AlgebraElement xy = d.torus(y0);
  RMat ady = ad_matrix(xy);
  std::vector<RMat> ad_axis;
  std::vector<AlgebraElement> axis_elems;
  for (int j = 0; j < d.rank; ++j) {
    AlgebraElement ax = element_from_coords(d.alg, d.torus_embed.col(j));
    axis_elems.push_back(ax);
    ad_axis.push_back(ad_matrix(ax));
  }

  for (const Root& root : d.roots) {
    const double cval = root.value(y0);
    // ad(x) acts on the root space by alpha(x) = -i * (i alpha)(x).
    CMat shifted = ady.cast<Cplx>();
    shifted += Cplx(0, cval) * CMat::Identity(alg.dim, alg.dim);
    CMat ns = null_space(shifted, 1e-7 * std::max(1.0, ady.norm()));
    if (ns.cols() != 1) {
      throw InvariantViolation("root space for " + root.name + " has dimension " +
                               std::to_string(ns.cols()) + ", expected 1");
    }
    CVec v = ns.col(0);
    for (int j = 0; j < d.rank; ++j) {
      CVec resid = (ad_axis[j] * v.real()).cast<Cplx>() +
                    Cplx(0, 1) * (ad_axis[j] * v.imag()).cast<Cplx>() +
                    Cplx(0, root.covector(j)) * v;
      if (resid.norm() > tol * (1.0 + ad_axis[j].norm())) {
        throw InvariantViolation("root covector mismatch for " + root.name);
      }
    }
    // Compactness criterion: alpha([z, z*]) > 0 for compact roots, < 0 for
    // noncompact, where z spans the root space and z* = -conj(z).
    CVec w = bracket_complex(alg, v, (-v.conjugate()).eval());
    CVec u = Cplx(0, -1) * w;
    if (u.imag().norm() > tol * u.norm()) {
      throw InvariantViolation("[z,z*] not in i*t for root " + root.name);
    }
    RVec ureal = u.real();
    RVec angles = d.torus_embed.colPivHouseholderQr().solve(ureal);
    if ((d.torus_embed * angles - ureal).norm() > tol * (1.0 + ureal.norm())) {
      throw InvariantViolation("[z,z*] not in t for root " + root.name);
    }
    double val = root.value(angles);
    if (std::abs(val) < 1e-6) {
      throw InvariantViolation("degenerate compactness value for " + root.name);
    }
    if ((val > 0) != root.compact) {
      throw InvariantViolation("compactness classification mismatch for " + root.name);
    }
  }

  // i*alpha(z) = 1 on the adapted positive system, 0 on compact roots (exact).
  for (int idx : d.delta_p_plus) {
    if (!(d.roots[idx].value(d.z_angles_rat) == Rat(1))) {
      throw InvariantViolation("i*alpha(z) != 1 for " + d.roots[idx].name);
    }
  }
  for (int idx : d.delta_k_plus) {
    if (!(d.roots[idx].value(d.z_angles_rat) == Rat(0))) {
      throw InvariantViolation("i*alpha(z) != 0 for " + d.roots[idx].name);
    }
  }
}

std::string matrix_key(const Eigen::MatrixXi& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) os << m(i, j) << ",";
  return os.str();
}

void close_weyl(RootDatum& d) {
  std::map<std::string, Eigen::MatrixXi> seen;
  Eigen::MatrixXi id = Eigen::MatrixXi::Identity(d.rank, d.rank);
  seen[matrix_key(id)] = id;
  std::vector<Eigen::MatrixXi> frontier = {id};
  while (!frontier.empty()) {
    std::vector<Eigen::MatrixXi> next;
    for (const auto& w : frontier) {
      for (const auto& g : d.weyl_gens) {
        Eigen::MatrixXi prod = g * w;
        auto key = matrix_key(prod);
        if (!seen.count(key)) {
          seen[key] = prod;
          next.push_back(prod);
        }
      }
    }
    frontier = std::move(next);
    if (seen.size() > 4096) {
      throw InvariantViolation("Weyl closure did not terminate");
    }
  }
  d.weyl.clear();
  for (auto& [k, m] : seen) d.weyl.push_back(m);
}

Eigen::MatrixXi integer_inverse(const Eigen::MatrixXi& m) {
  const int r = static_cast<int>(m.rows());
  RatMat a(r, RatVec(r, Rat(0)));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) a[i][j] = Rat(m(i, j));
  Eigen::MatrixXi inv(r, r);
  for (int c = 0; c < r; ++c) {
    RatVec rhs(r, Rat(0));
    rhs[c] = Rat(1);
    RatVec x;
    if (!rat_solve(a, rhs, x)) {
      throw InvariantViolation("Weyl matrix is singular");
    }
    for (int i = 0; i < r; ++i) {
      if (x[i].den() != 1) {
        throw InvariantViolation("Weyl matrix inverse is not integral");
      }
      inv(i, c) = static_cast<int>(x[i].num());
    }
  }
  return inv;
}

void verify_weyl(const RootDatum& d) {
  for (const auto& w : d.weyl) {
    Eigen::MatrixXi winv = integer_inverse(w);
    // z is fixed by the small Weyl group (exact rational check).
    for (int i = 0; i < d.rank; ++i) {
      Rat acc(0);
      for (int j = 0; j < d.rank; ++j) acc += Rat(w(i, j)) * d.z_angles_rat[j];
      if (!(acc == d.z_angles_rat[i])) {
        throw InvariantViolation("Weyl element does not fix z");
      }
    }
    // Each root maps to +/- another root of the same compactness type.
    for (const Root& r : d.roots) {
      Eigen::VectorXi c2 = (r.covector.transpose() * winv).transpose();
      bool found = false;
      for (const Root& s : d.roots) {
        if (s.covector == c2) {
          if (s.compact != r.compact) {
            throw InvariantViolation("Weyl action mixes compact/noncompact roots");
          }
          found = true;
          break;
        }
      }
      if (!found) {
        throw InvariantViolation("Weyl action does not permute the roots");
      }
    }
  }
}

void verify_lattices(const RootDatum& d) {
  for (const auto& lat : d.lattices) {
    // Sublattice of the central lattice: every root pairing is an integer
    // (generators are in units of 2*pi).
    for (const auto& g : lat.gens) {
      if (static_cast<int>(g.size()) != d.rank) {
        throw InvariantViolation("lattice generator has wrong dimension");
      }
      for (const Root& r : d.roots) {
        if (r.value(g).den() != 1) {
          throw InvariantViolation("lattice " + lat.name +
                                   " is not a sublattice of the central lattice");
        }
      }
    }
    if (lat.gens.empty()) continue;
    // Weyl invariance (needed for canonical labels to be well defined).
    long long den = 1;
    for (const auto& g : lat.gens)
      for (const auto& e : g) den = std::lcm(den, e.den());
    IntMat scaled(d.rank, static_cast<int>(lat.gens.size()));
    for (int c = 0; c < scaled.cols(); ++c)
      for (int i = 0; i < d.rank; ++i) {
        Rat s = lat.gens[c][i] * Rat(den);
        scaled(i, c) = s.num();
      }
    std::vector<int> pivots;
    IntMat h = hermite_normal_form(scaled, &pivots);
    for (const auto& w : d.weyl) {
      for (const auto& g : lat.gens) {
        IntVec img(d.rank);
        for (int i = 0; i < d.rank; ++i) {
          Rat acc(0);
          for (int j = 0; j < d.rank; ++j) acc += Rat(w(i, j)) * g[j];
          acc = acc * Rat(den);
          if (acc.den() != 1) {
            throw InvariantViolation("non-integral Weyl image of lattice generator");
          }
          img(i) = acc.num();
        }
        if (!lattice_contains(h, pivots, img)) {
          throw InvariantViolation("lattice " + lat.name + " is not Weyl invariant");
        }
      }
    }
  }
}

}  // namespace

RMat KernelLattice::gens_real() const {
  RMat m = RMat::Zero(rank, static_cast<Eigen::Index>(gens.size()));
  for (int c = 0; c < m.cols(); ++c)
    for (int i = 0; i < rank; ++i) {
      m(i, c) = 2.0 * kPi * gens[c][i].to_double();
    }
  return m;
}

AlgebraElement RootDatum::torus(const RVec& angles) const {
  if (angles.size() != rank) {
    throw std::invalid_argument("torus: expected " + std::to_string(rank) +
                                " angle coordinates");
  }
  return element_from_coords(alg, torus_embed * angles);
}

const KernelLattice& RootDatum::lattice(const std::string& name) const {
  for (const auto& l : lattices) {
    if (l.name == name) return l;
  }
  throw std::invalid_argument("unknown lattice preset: " + name);
}

DatumPtr build_root_datum(const DescPtr& alg) {
  static std::mutex mu;
  static std::map<std::string, DatumPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(alg->name);
  if (it != cache.end()) return it->second;

  auto d = std::make_shared<RootDatum>();
  d->alg = alg;
  switch (alg->family) {
    case Family::Sl2:
      build_sl2(*d);
      break;
    case Family::Sp:
      build_sp(*d, alg->n);
      break;
    case Family::Su:
      build_su(*d, alg->p, alg->q);
      break;
    default:
      throw std::invalid_argument("no root datum for family " + alg->name);
  }
  d->z_angles = RVec(d->rank);
  for (int j = 0; j < d->rank; ++j) d->z_angles(j) = d->z_angles_rat[j].to_double();

  verify_roots(*d);
  close_weyl(*d);
  verify_weyl(*d);
  verify_lattices(*d);

  cache[alg->name] = d;
  return d;
}

int torus_loop_winding(const RootDatum& datum, const RVec& angles) {
  const auto& alg = *datum.alg;
  if (alg.family != Family::Sl2 && alg.family != Family::Sp) {
    throw std::invalid_argument("winding oracle requires a complex-structure family");
  }
  const int n2 = alg.ambient;
  const int n = n2 / 2;
  AlgebraElement x = datum.torus(angles);
  RMat xm = x.matrix.real();
  RMat end = (xm).exp();
  if ((end - RMat::Identity(n2, n2)).norm() > 1e-8 * (1.0 + end.norm())) {
    throw std::invalid_argument("winding oracle: path is not a loop");
  }
  int steps = 64 + 16 * static_cast<int>(xm.norm());
  double total = 0.0, prev = 0.0;
  for (int s = 0; s <= steps; ++s) {
    double t = static_cast<double>(s) / steps;
    RMat g = (t * xm).exp();
    CMat c = g.topLeftCorner(n, n).cast<Cplx>() +
             Cplx(0, 1) * g.bottomLeftCorner(n, n).cast<Cplx>();
    double arg = std::arg(c.determinant());
    if (s == 0) {
      prev = arg;
      continue;
    }
    double delta = arg - prev;
    while (delta > kPi) delta -= 2.0 * kPi;
    while (delta < -kPi) delta += 2.0 * kPi;
    total += delta;
    prev = arg;
  }
  double w = total / (2.0 * kPi);
  int rounded = static_cast<int>(std::lround(w));
  if (std::abs(w - rounded) > 1e-6) {
    throw BoundaryUnstableError("winding oracle did not converge to an integer");
  }
  return rounded;
}

}  // namespace elliptica
