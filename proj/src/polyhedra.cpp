#include "elliptica/polyhedra.hpp"

#include <algorithm>

namespace elliptica {

namespace {

struct Bound {
  RatVec coef;  // over the remaining variables
  Rat rhs;
  bool strict;
};

// Split the constraints of `sys` by the sign of the coefficient of the last
// variable; rewrite bounds on that variable over the remaining ones.
void split_last(const LinSystem& sys, std::vector<Bound>& lowers,
                std::vector<Bound>& uppers, LinSystem& rest) {
  const int k = sys.dim - 1;
  rest.dim = k;
  rest.cons.clear();
  lowers.clear();
  uppers.clear();
  for (const auto& c : sys.cons) {
    const Rat ak = c.a[k];
    if (ak.sign() == 0) {
      LinConstraint kept = c;
      kept.a.resize(k);
      rest.cons.push_back(std::move(kept));
      continue;
    }
    Bound b;
    b.coef.resize(k);
    for (int j = 0; j < k; ++j) b.coef[j] = -c.a[j] / ak;
    b.rhs = c.b / ak;
    b.strict = c.strict;
    // a_k * y_k <= b - rest:  upper bound when a_k > 0, lower otherwise.
    (ak.sign() > 0 ? uppers : lowers).push_back(std::move(b));
  }
}

// Fourier-Motzkin step: eliminate the last variable.
LinSystem eliminate_last(const LinSystem& sys) {
  std::vector<Bound> lowers, uppers;
  LinSystem rest;
  split_last(sys, lowers, uppers, rest);
  for (const auto& lo : lowers) {
    for (const auto& up : uppers) {
      // lo.coef . y + lo.rhs  (<|<=)  up.coef . y + up.rhs
      LinConstraint c;
      c.a.resize(rest.dim);
      for (int j = 0; j < rest.dim; ++j) c.a[j] = lo.coef[j] - up.coef[j];
      c.b = up.rhs - lo.rhs;
      c.strict = lo.strict || up.strict;
      rest.cons.push_back(std::move(c));
    }
  }
  return rest;
}

bool constant_system_feasible(const LinSystem& sys) {
  for (const auto& c : sys.cons) {
    const int s = c.b.sign();
    if (c.strict ? s <= 0 : s < 0) return false;
  }
  return true;
}

Rat eval(const RatVec& coef, const RatVec& y) {
  Rat v(0);
  for (size_t j = 0; j < coef.size(); ++j) v += coef[j] * y[j];
  return v;
}

}  // namespace

bool fm_feasible(const LinSystem& sys) {
  LinSystem cur = sys;
  while (cur.dim > 0) cur = eliminate_last(cur);
  return constant_system_feasible(cur);
}

std::optional<RatVec> fm_feasible_point(const LinSystem& sys) {
  // Record the chain of systems so bounds can be re-derived per variable.
  std::vector<LinSystem> chain{sys};
  while (chain.back().dim > 0) chain.push_back(eliminate_last(chain.back()));
  if (!constant_system_feasible(chain.back())) return std::nullopt;

  RatVec y;
  for (int level = static_cast<int>(chain.size()) - 2; level >= 0; --level) {
    std::vector<Bound> lowers, uppers;
    LinSystem rest;
    split_last(chain[level], lowers, uppers, rest);
    bool has_lo = false, has_up = false;
    Rat lo(0), up(0);
    for (const auto& b : lowers) {
      const Rat v = eval(b.coef, y) + b.rhs;
      if (!has_lo || v > lo) lo = v;
      has_lo = true;
    }
    for (const auto& b : uppers) {
      const Rat v = eval(b.coef, y) + b.rhs;
      if (!has_up || v < up) up = v;
      has_up = true;
    }
    Rat value(0);
    if (has_lo && has_up) {
      value = (lo + up) / Rat(2);
    } else if (has_lo) {
      value = lo + Rat(1);
    } else if (has_up) {
      value = up - Rat(1);
    }
    y.push_back(value);  // chain[level]'s last variable comes after y's entries
  }
  return y;
}

std::vector<RatVec> enumerate_vertices(const LinSystem& sys) {
  const int d = sys.dim;
  const int m = static_cast<int>(sys.cons.size());
  std::vector<RatVec> verts;
  std::vector<int> idx(d);
  // Enumerate all d-subsets of constraint hyperplanes.
  std::vector<int> comb(d);
  for (int i = 0; i < d; ++i) comb[i] = i;
  auto next_comb = [&]() {
    int i = d - 1;
    while (i >= 0 && comb[i] == m - d + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  if (m < d) return verts;
  do {
    RatMat A(d, RatVec(d));
    RatVec b(d);
    for (int i = 0; i < d; ++i) {
      A[i] = sys.cons[comb[i]].a;
      b[i] = sys.cons[comb[i]].b;
    }
    RatVec x;
    if (!rat_solve(A, b, x)) continue;
    bool ok = true;
    for (const auto& c : sys.cons) {
      if (eval(c.a, x) > c.b) {  // closure: treat strict as <=
        ok = false;
        break;
      }
    }
    if (ok && std::find(verts.begin(), verts.end(), x) == verts.end()) {
      verts.push_back(std::move(x));
    }
  } while (next_comb());
  std::sort(verts.begin(), verts.end(), [](const RatVec& a, const RatVec& b) {
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  });
  return verts;
}

}  // namespace elliptica
