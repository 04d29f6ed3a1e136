#include "elliptica/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <mutex>
#include <sstream>

#include "elliptica/errors.hpp"

namespace elliptica {

namespace {

CMat unit_matrix(int n, int r, int c, Cplx v) {
  CMat m = CMat::Zero(n, n);
  m(r, c) = v;
  return m;
}

// sp2n(R): x^T J + J x = 0 with J = [[0,-1],[1,0]] (n x n blocks).
// Basis order: torus directions first (j = 0..n-1), then the remaining
// k-part, then the p-part.
std::vector<CMat> sp_basis(int n) {
  const int N = 2 * n;
  std::vector<CMat> basis;
  auto sym = [&](int j, int k) {
    RMat b = RMat::Zero(n, n);
    b(j, k) += 1.0;
    b(k, j) += 1.0;
    if (j == k) b(j, j) = 1.0;
    return b;
  };
  auto embed = [&](const RMat& a, const RMat& b, const RMat& c,
                   const RMat& d) -> CMat {
    RMat m(N, N);
    m.topLeftCorner(n, n) = a;
    m.topRightCorner(n, n) = b;
    m.bottomLeftCorner(n, n) = c;
    m.bottomRightCorner(n, n) = d;
    return m.cast<Cplx>();
  };
  const RMat zero = RMat::Zero(n, n);
  // Torus: [[0, E_jj], [-E_jj, 0]]  (rotation generator of the j-th plane).
  for (int j = 0; j < n; ++j) {
    const RMat b = sym(j, j);
    basis.push_back(embed(zero, b, -b, zero));
  }
  // Rest of k: [[0, B], [-B, 0]] with B = E_jk + E_kj, and
  // [[A, 0], [0, A]] with A = E_jk - E_kj.
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const RMat b = sym(j, k);
      basis.push_back(embed(zero, b, -b, zero));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      RMat a = RMat::Zero(n, n);
      a(j, k) = 1.0;
      a(k, j) = -1.0;
      basis.push_back(embed(a, zero, zero, a));
    }
  }
  // p-part: [[A, 0], [0, -A]] and [[0, B], [B, 0]] with A, B symmetric.
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const RMat a = sym(j, k);
      basis.push_back(embed(a, zero, zero, -a));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const RMat b = sym(j, k);
      basis.push_back(embed(zero, b, b, zero));
    }
  }
  return basis;
}

// sl2(R) with theta-adapted integer basis; the first element spans k.
std::vector<CMat> sl2_basis() {
  std::vector<CMat> basis;
  CMat k(2, 2), h(2, 2), b(2, 2);
  k << 0, 1, -1, 0;
  h << 1, 0, 0, -1;
  b << 0, 1, 1, 0;
  basis.push_back(k);
  basis.push_back(h);
  basis.push_back(b);
  return basis;
}

// su(p,q): x* I_pq + I_pq x = 0, tr x = 0.  Torus directions first:
// T_j = -i (E_jj - E_nn), j = 0..n-2.
std::vector<CMat> su_basis(int p, int q) {
  const int n = p + q;
  const Cplx i(0, 1);
  std::vector<CMat> basis;
  for (int j = 0; j + 1 < n; ++j) {
    basis.push_back(unit_matrix(n, j, j, -i) + unit_matrix(n, n - 1, n - 1, i));
  }
  auto block_pairs = [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      for (int k = j + 1; k < hi; ++k) {
        basis.push_back(unit_matrix(n, j, k, 1) + unit_matrix(n, k, j, -1));
        basis.push_back(unit_matrix(n, j, k, i) + unit_matrix(n, k, j, i));
      }
    }
  };
  block_pairs(0, p);
  block_pairs(p, n);
  for (int j = 0; j < p; ++j) {
    for (int k = p; k < n; ++k) {
      basis.push_back(unit_matrix(n, j, k, 1) + unit_matrix(n, k, j, 1));
      basis.push_back(unit_matrix(n, j, k, i) + unit_matrix(n, k, j, -i));
    }
  }
  return basis;
}

// Heisenberg fixture: strictly upper triangular 3x3, [P,Q] = Z central.
std::vector<CMat> heisenberg_basis() {
  return {unit_matrix(3, 0, 1, 1), unit_matrix(3, 1, 2, 1),
          unit_matrix(3, 0, 2, 1)};
}

DescPtr build_descriptor(Family family, const std::string& name, int n, int p,
                         int q) {
  auto d = std::make_shared<LieAlgebraDescriptor>();
  d->family = family;
  d->name = name;
  d->n = n;
  d->p = p;
  d->q = q;
  switch (family) {
    case Family::Sl2:
      d->ambient = 2;
      d->basis = sl2_basis();
      break;
    case Family::Sp:
      d->ambient = 2 * n;
      d->basis = sp_basis(n);
      break;
    case Family::Su:
      d->ambient = p + q;
      d->basis = su_basis(p, q);
      break;
    case Family::Heisenberg3:
      d->ambient = 3;
      d->basis = heisenberg_basis();
      break;
  }
  d->dim = static_cast<int>(d->basis.size());

  d->basis_mat.resize(2 * d->ambient * d->ambient, d->dim);
  for (int i = 0; i < d->dim; ++i) d->basis_mat.col(i) = realify(d->basis[i]);
  d->coord_qr.compute(d->basis_mat);
  if (d->coord_qr.rank() != d->dim) {
    throw InvariantViolation(name + ": basis is not linearly independent");
  }

  const Tolerances& tol = default_tolerances();
  // Structure constants: ad_i(:,j) = coordinates of [b_i, b_j].
  d->ad_basis.assign(d->dim, RMat::Zero(d->dim, d->dim));
  for (int i = 0; i < d->dim; ++i) {
    for (int j = 0; j < d->dim; ++j) {
      const CMat comm = d->basis[i] * d->basis[j] - d->basis[j] * d->basis[i];
      double res = 0.0;
      d->ad_basis[i].col(j) = d->coordinates_of(comm, &res);
      if (res > tol.basis_residual) {
        throw InvariantViolation(name + ": bracket leaves the basis span");
      }
    }
  }
  // Jacobi identity, verified at the operator level:
  // ad([b_i, b_j]) = [ad b_i, ad b_j].
  for (int i = 0; i < d->dim; ++i) {
    for (int j = i + 1; j < d->dim; ++j) {
      RMat lhs = RMat::Zero(d->dim, d->dim);
      for (int k = 0; k < d->dim; ++k) {
        lhs += d->ad_basis[i](k, j) * d->ad_basis[k];
      }
      const RMat rhs =
          d->ad_basis[i] * d->ad_basis[j] - d->ad_basis[j] * d->ad_basis[i];
      if ((lhs - rhs).norm() > tol.basis_residual * 10 *
                                   std::max(1.0, rhs.norm())) {
        throw InvariantViolation(name + ": Jacobi identity residual too large");
      }
    }
  }
  d->killing.resize(d->dim, d->dim);
  for (int i = 0; i < d->dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      d->killing(i, j) = d->killing(j, i) =
          (d->ad_basis[i] * d->ad_basis[j]).trace();
    }
  }
  d->theta.resize(d->dim, d->dim);
  for (int i = 0; i < d->dim; ++i) {
    double res = 0.0;
    d->theta.col(i) = d->coordinates_of(d->theta_matrix(d->basis[i]), &res);
    if (res > tol.basis_residual) {
      throw InvariantViolation(name + ": Cartan involution leaves the span");
    }
  }
  if ((d->theta * d->theta - RMat::Identity(d->dim, d->dim)).norm() >
      tol.basis_residual) {
    throw InvariantViolation(name + ": Cartan involution is not involutive");
  }
  d->proj_k = 0.5 * (RMat::Identity(d->dim, d->dim) + d->theta);
  d->proj_p = 0.5 * (RMat::Identity(d->dim, d->dim) - d->theta);
  return d;
}

void require_same(const DescPtr& a, const DescPtr& b) {
  if (a.get() != b.get()) {
    throw std::invalid_argument("operands belong to different algebras");
  }
}

}  // namespace

RVec LieAlgebraDescriptor::coordinates_of(const CMat& m,
                                          double* residual) const {
  const RVec target = realify(m);
  const RVec c = coord_qr.solve(target);
  if (residual) *residual = (basis_mat * c - target).norm();
  return c;
}

CMat LieAlgebraDescriptor::matrix_of(const RVec& coords) const {
  CMat m = CMat::Zero(ambient, ambient);
  for (int i = 0; i < dim; ++i) m += coords(i) * basis[i];
  return m;
}

CMat LieAlgebraDescriptor::form() const {
  CMat f = CMat::Zero(ambient, ambient);
  if (family == Family::Su) {
    for (int i = 0; i < ambient; ++i) f(i, i) = i < p ? 1.0 : -1.0;
  } else {
    const int half = ambient / 2;
    for (int i = 0; i < half; ++i) {
      f(i, half + i) = -1.0;
      f(half + i, i) = 1.0;
    }
  }
  return f;
}

CMat LieAlgebraDescriptor::theta_matrix(const CMat& m) const {
  switch (family) {
    case Family::Su:
      return form() * m * form();
    case Family::Heisenberg3:
      return m;
    default:
      return -m.transpose();
  }
}

DescPtr make_algebra(const std::string& name) {
  static std::map<std::string, DescPtr> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;

  DescPtr d;
  if (name == "sl2") {
    d = build_descriptor(Family::Sl2, name, 1, 0, 0);
  } else if (name == "sp2" || name == "sp4" || name == "sp6") {
    const int n = (name[2] - '0') / 2;
    d = build_descriptor(Family::Sp, name, n, 0, 0);
  } else if (name == "heisenberg3") {
    d = build_descriptor(Family::Heisenberg3, name, 0, 0, 0);
  } else if (name.rfind("su(", 0) == 0 && name.back() == ')') {
    const auto comma = name.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("unknown algebra: " + name);
    }
    int p = 0, q = 0;
    try {
      p = std::stoi(name.substr(3, comma - 3));
      q = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown algebra: " + name);
    }
    if (p < 1 || q < 1 || p + q > 4) {
      throw std::invalid_argument("su(p,q) requires p,q >= 1 and p+q <= 4");
    }
    d = build_descriptor(Family::Su, name, 0, p, q);
  } else {
    throw std::invalid_argument("unknown algebra: " + name);
  }
  cache[name] = d;
  return d;
}

std::vector<std::string> group_family_names() {
  return {"sl2",     "sp2",     "sp4",     "sp6",
          "su(1,1)", "su(2,1)", "su(2,2)", "su(3,1)"};
}

AlgebraElement element_from_coords(const DescPtr& alg, const RVec& coords) {
  if (coords.size() != alg->dim) {
    throw std::invalid_argument("coordinate vector has wrong dimension");
  }
  return {alg, coords, alg->matrix_of(coords)};
}

AlgebraElement element_from_matrix(const DescPtr& alg, const CMat& m,
                                   const Tolerances& tol) {
  if (m.rows() != alg->ambient || m.cols() != alg->ambient) {
    throw std::invalid_argument("matrix has wrong size for " + alg->name);
  }
  double res = 0.0;
  const RVec c = alg->coordinates_of(m, &res);
  if (res > tol.coord_residual * std::max(1.0, m.norm())) {
    throw std::invalid_argument("matrix does not lie in " + alg->name +
                                " (residual " + std::to_string(res) + ")");
  }
  return {alg, c, alg->matrix_of(c)};
}

AlgebraElement element_zero(const DescPtr& alg) {
  return element_from_coords(alg, RVec::Zero(alg->dim));
}

AlgebraElement element_add(const AlgebraElement& x, const AlgebraElement& y) {
  require_same(x.alg, y.alg);
  return {x.alg, x.coords + y.coords, x.matrix + y.matrix};
}

AlgebraElement element_scale(double s, const AlgebraElement& x) {
  return {x.alg, s * x.coords, s * x.matrix};
}

GroupElement group_from_matrix(const DescPtr& alg, const CMat& m,
                               const Tolerances& tol) {
  if (!alg->is_group_family()) {
    throw std::invalid_argument(alg->name + " has no associated group");
  }
  if (m.rows() != alg->ambient || m.cols() != alg->ambient) {
    throw std::invalid_argument("matrix has wrong size for " + alg->name);
  }
  const double scale2 = std::max(1.0, m.squaredNorm());
  const double bound = tol.group_residual * scale2;
  if (alg->is_real_family() && m.imag().norm() > bound) {
    throw std::invalid_argument("matrix is not real");
  }
  const CMat f = alg->form();
  if (alg->family == Family::Su) {
    if ((m.adjoint() * f * m - f).norm() > bound ||
        std::abs(m.determinant() - 1.0) > bound) {
      throw std::invalid_argument("matrix violates the su(p,q) relations");
    }
  } else if (alg->family == Family::Sl2) {
    if (std::abs(m.determinant() - 1.0) > bound) {
      throw std::invalid_argument("matrix violates det = 1");
    }
  } else {
    if ((m.transpose() * f * m - f).norm() > bound) {
      throw std::invalid_argument("matrix is not symplectic");
    }
  }
  return {alg, m};
}

GroupElement group_identity(const DescPtr& alg) {
  return {alg, CMat::Identity(alg->ambient, alg->ambient)};
}

GroupElement group_exp(const AlgebraElement& x, const Tolerances& tol) {
  CMat e;
  if (x.alg->is_real_family()) {
    const RMat m = x.matrix.real();
    e = RMat(m.exp()).cast<Cplx>();
  } else {
    e = x.matrix.exp();
  }
  return group_from_matrix(x.alg, e, tol);
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  require_same(a.alg, b.alg);
  return {a.alg, a.matrix * b.matrix};
}

GroupElement group_inv(const GroupElement& g) {
  return {g.alg, g.matrix.inverse()};
}

GroupElement group_conj(const GroupElement& h, const GroupElement& g) {
  require_same(h.alg, g.alg);
  return {g.alg, h.matrix * g.matrix * h.matrix.inverse()};
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same(x.alg, y.alg);
  RVec c = RVec::Zero(x.alg->dim);
  for (int i = 0; i < x.alg->dim; ++i) {
    if (x.coords(i) != 0.0) c += x.coords(i) * (x.alg->ad_basis[i] * y.coords);
  }
  return {x.alg, c, x.matrix * y.matrix - y.matrix * x.matrix};
}

RMat ad_matrix(const AlgebraElement& x) {
  RMat a = RMat::Zero(x.alg->dim, x.alg->dim);
  for (int i = 0; i < x.alg->dim; ++i) {
    if (x.coords(i) != 0.0) a += x.coords(i) * x.alg->ad_basis[i];
  }
  return a;
}

double killing_form(const AlgebraElement& x, const AlgebraElement& y) {
  require_same(x.alg, y.alg);
  return x.coords.dot(x.alg->killing * y.coords);
}

RMat adjoint_matrix(const GroupElement& g, const Tolerances& tol) {
  const CMat ginv = g.matrix.inverse();
  const double scale2 = std::max(1.0, g.matrix.squaredNorm());
  RMat ad(g.alg->dim, g.alg->dim);
  for (int i = 0; i < g.alg->dim; ++i) {
    double res = 0.0;
    ad.col(i) = g.alg->coordinates_of(g.matrix * g.alg->basis[i] * ginv, &res);
    if (res > tol.group_residual * scale2) {
      throw std::invalid_argument(
          "conjugation does not preserve the algebra: invalid group element");
    }
  }
  return ad;
}

bool operator_is_semisimple(const CMat& A, const Tolerances& tol) {
  const double scale = std::max(1.0, A.norm());
  // The defect-aware clustering inside spectral_split keeps the perturbation
  // cloud of a defective eigenvalue together, so the geometric-vs-algebraic
  // comparison below stays meaningful for nilpotent and unipotent inputs.
  const SpectralSplit sp = spectral_split(A, tol);
  const int n = static_cast<int>(A.rows());
  for (size_t c = 0; c < sp.means.size(); ++c) {
    const CMat shifted = A - sp.means[c] * CMat::Identity(n, n);
    const CMat ns = null_space(shifted, cluster_rank_cut(sp.means, c, scale, tol));
    if (static_cast<int>(ns.cols()) != sp.sizes[c]) return false;
  }
  return true;
}

bool is_compact_element(const AlgebraElement& x, const Tolerances& tol) {
  const CMat A = ad_matrix(x).cast<Cplx>();
  const double scale = std::max(1.0, A.norm());
  const SpectralSplit sp = spectral_split(A, tol);
  for (const Cplx& mu : sp.means) {
    if (std::abs(mu.real()) > tol.spec_imag_tol * scale) return false;
  }
  const int n = static_cast<int>(A.rows());
  for (size_t c = 0; c < sp.means.size(); ++c) {
    const CMat shifted = A - sp.means[c] * CMat::Identity(n, n);
    const CMat ns = null_space(shifted, cluster_rank_cut(sp.means, c, scale, tol));
    if (static_cast<int>(ns.cols()) != sp.sizes[c]) return false;
  }
  return true;
}

JordanParts jordan_decompose(const AlgebraElement& x, const Tolerances& tol) {
  if (!x.alg->is_group_family()) {
    throw std::invalid_argument(
        "jordan_decompose: unsupported for diagnostic fixture " + x.alg->name);
  }
  const SpectralSplit sp = spectral_split(x.matrix, tol);
  const int n = x.alg->ambient;
  CVec de(n), dh(n);
  int pos = 0;
  for (size_t c = 0; c < sp.sizes.size(); ++c) {
    for (int k = 0; k < sp.sizes[c]; ++k) {
      de(pos) = Cplx(0.0, sp.means[c].imag());
      dh(pos) = Cplx(sp.means[c].real(), 0.0);
      ++pos;
    }
  }
  const CMat E = sp.V * de.asDiagonal() * sp.V_inv;
  const CMat H = sp.V * dh.asDiagonal() * sp.V_inv;
  const CMat N = x.matrix - E - H;
  const double scale = std::max(1.0, x.matrix.norm());
  auto fit = [&](const CMat& m, const char* what) {
    double res = 0.0;
    const RVec c = x.alg->coordinates_of(m, &res);
    if (res > tol.cert_residual * scale) {
      throw BoundaryUnstableError(std::string("jordan_decompose: ") + what +
                                  " part leaves the algebra (residual " +
                                  std::to_string(res) + ")");
    }
    return AlgebraElement{x.alg, c, m};
  };
  JordanParts parts{fit(E, "elliptic"), fit(H, "hyperbolic"),
                    fit(N, "nilpotent"), sp.cond};
  return parts;
}

FlowOrbitDiagnostic flow_orbit_diagnostic(const AlgebraElement& x,
                                          const Tolerances& tol) {
  FlowOrbitDiagnostic out;
  const RMat A = ad_matrix(x);
  const CMat Ac = A.cast<Cplx>();
  const double scale = std::max(1.0, A.norm());
  // Cluster means are far more reliable than raw eigenvalues here: a k-fold
  // defective eigenvalue perturbs its individual eigenvalues by ~eps^{1/k}
  // while the cluster mean stays within ~eps of the true value.
  const SpectralSplit sp = spectral_split(Ac, tol);
  out.spectrum_imaginary = true;
  for (const Cplx& mu : sp.means) {
    if (std::abs(mu.real()) > tol.spec_imag_tol * scale) {
      out.spectrum_imaginary = false;
      break;
    }
  }
  // Nilpotent ad-part and its image.
  CVec ds(A.rows());
  int pos = 0;
  for (size_t c = 0; c < sp.sizes.size(); ++c) {
    for (int k = 0; k < sp.sizes[c]; ++k) ds(pos++) = sp.means[c];
  }
  const CMat N = Ac - sp.V * ds.asDiagonal() * sp.V_inv;
  const RMat Nr = N.real();
  const RMat range =
      column_space(Nr, tol.rank_tol * std::max(1.0, Nr.norm()));
  // Center of the algebra: common null space of all ad operators.
  const int d = x.alg->dim;
  RMat stacked(d * d, d);
  for (int i = 0; i < d; ++i) {
    stacked.middleRows(i * d, d) = x.alg->ad_basis[i];
  }
  const RMat center = null_space(stacked, tol.rank_tol);
  const RMat residual = range - center * (center.transpose() * range);
  out.nilpotent_into_center = residual.norm() <= 1e-8 * std::max<double>(
      1.0, range.cols());
  return out;
}

}  // namespace elliptica
