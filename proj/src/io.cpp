#include "elliptica/io.hpp"

#include "elliptica/errors.hpp"
#include "elliptica/quasimorphism.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace elliptica {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void dump_rec(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + Json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(item, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt17(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_rec(j, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// matrix / vector helpers
// ---------------------------------------------------------------------------

Json json_from_cmat(const CMat& m) {
  Json out;
  out["rows"] = static_cast<int>(m.rows());
  out["cols"] = static_cast<int>(m.cols());
  Json re = Json::array();
  bool any_imag = false;
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back(m(i, c).real());
      any_imag = any_imag || m(i, c).imag() != 0.0;
    }
    re.push_back(std::move(row));
  }
  out["re"] = std::move(re);
  if (any_imag) {
    Json im = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c).imag());
      im.push_back(std::move(row));
    }
    out["im"] = std::move(im);
  }
  return out;
}

CMat cmat_from_json(const Json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: bad shape");
  CMat m(rows, cols);
  const Json& re = j.at("re");
  const Json* im = j.contains("im") ? &j.at("im") : nullptr;
  if (static_cast<int>(re.size()) != rows ||
      (im && static_cast<int>(im->size()) != rows)) {
    throw std::invalid_argument("matrix: row count mismatch");
  }
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(re.at(i).size()) != cols) {
      throw std::invalid_argument("matrix: column count mismatch");
    }
    for (int c = 0; c < cols; ++c) {
      const double a = re.at(i).at(c).get<double>();
      const double b = im ? im->at(i).at(c).get<double>() : 0.0;
      m(i, c) = Cplx(a, b);
    }
  }
  return m;
}

Json json_from_rvec(const RVec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVec rvec_from_json(const Json& j) {
  RVec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

Json json_from_ratvec(const RatVec& v) {
  Json out = Json::array();
  for (const Rat& r : v) out.push_back(r.str());
  return out;
}

RatVec ratvec_from_json(const Json& j) {
  RatVec v;
  v.reserve(j.size());
  for (const auto& item : j) v.push_back(Rat::parse(item.get<std::string>()));
  return v;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

Json report_to_json(const EllipticityReport& rep) {
  Json out;
  out["ad_semisimple"] = rep.ad_semisimple;
  out["spectrum_unit"] = rep.spectrum_unit;
  out["elliptic"] = rep.elliptic;
  out["fixed_dim"] = rep.fixed_dim;
  out["fixed_compactly_embedded"] = rep.fixed_compactly_embedded;
  out["stably_elliptic"] = rep.stably_elliptic;
  out["max_modulus_deviation"] = rep.max_modulus_deviation;
  out["min_wall_distance"] = rep.min_wall_distance;
  if (rep.torus) {
    Json t;
    t["angles"] = json_from_rvec(rep.torus->angles);
    t["q"] = json_from_cmat(rep.torus->q.matrix);
    out["torus"] = std::move(t);
  } else {
    out["torus"] = nullptr;
  }
  return out;
}

Json class_to_json(const ComponentClass& cls) {
  Json out;
  Json canonical = Json::array();
  for (int i = 0; i < cls.canonical.size(); ++i) canonical.push_back(cls.canonical(i));
  out["canonical"] = std::move(canonical);
  out["lattice"] = cls.lattice_name;
  out["basic"] = cls.is_basic();
  Json witness;
  witness["weyl_index"] = cls.weyl_index;
  Json coeffs = Json::array();
  for (long long c : cls.lattice_coeffs) coeffs.push_back(c);
  witness["lattice_coeffs"] = std::move(coeffs);
  witness["lattice_shift_turns"] = json_from_ratvec(cls.lattice_shift_turns);
  out["witness"] = std::move(witness);
  return out;
}

Json component_to_json(const ElementComponent& ec) {
  Json out;
  out["class"] = class_to_json(ec.cls);
  Json raw = Json::array();
  for (int i = 0; i < ec.label.size(); ++i) raw.push_back(ec.label(i));
  out["raw_label"] = std::move(raw);
  out["angles"] = json_from_rvec(ec.angles);
  return out;
}

Json krein_to_json(const KreinReport& kr) {
  Json out;
  out["collision"] = kr.collision;
  out["total_positive"] = kr.total_positive;
  Json entries = Json::array();
  for (const KreinEntry& e : kr.entries) {
    Json je;
    je["eigenvalue_re"] = e.eigenvalue.real();
    je["eigenvalue_im"] = e.eigenvalue.imag();
    je["multiplicity"] = e.multiplicity;
    je["positive"] = e.positive;
    je["negative"] = e.negative;
    je["indefinite"] = e.indefinite;
    Json angles = Json::array();
    for (double a : e.positive_angles) angles.push_back(a);
    je["positive_angles"] = std::move(angles);
    entries.push_back(std::move(je));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json cone_to_json(const ConeQuery& q) {
  Json out;
  out["member"] = q.member;
  out["interior"] = q.interior;
  out["margin"] = q.margin;
  out["route"] = q.route;
  return out;
}

Json datum_to_json(const RootDatum& datum) {
  Json out;
  out["group"] = datum.alg->name;
  out["rank"] = datum.rank;
  out["angle_period"] = datum.angle_period;
  out["z_turns"] = json_from_ratvec(datum.z_angles_rat);
  Json roots = Json::array();
  for (const Root& r : datum.roots) {
    Json jr;
    jr["name"] = r.name;
    Json cov = Json::array();
    for (int i = 0; i < r.covector.size(); ++i) cov.push_back(r.covector(i));
    jr["covector"] = std::move(cov);
    jr["compact"] = r.compact;
    roots.push_back(std::move(jr));
  }
  out["roots"] = std::move(roots);
  Json order = Json::array();
  for (int i : datum.delta_p_plus) order.push_back(datum.root(i).name);
  out["positive_noncompact_order"] = std::move(order);
  out["weyl_order"] = static_cast<int>(datum.weyl.size());
  Json lattices = Json::array();
  for (const KernelLattice& lat : datum.lattices) {
    Json jl;
    jl["name"] = lat.name;
    Json gens = Json::array();
    for (const RatVec& g : lat.gens) gens.push_back(json_from_ratvec(g));
    jl["gens_turns"] = std::move(gens);
    lattices.push_back(std::move(jl));
  }
  out["lattices"] = std::move(lattices);
  return out;
}

Json atlas_to_json(const RootDatum& datum, const KernelLattice& lattice,
                   int bound, const std::vector<AtlasEntry>& entries) {
  Json out;
  out["group"] = datum.alg->name;
  out["lattice"] = lattice.name;
  out["bound"] = bound;
  out["class_count"] = static_cast<int>(entries.size());
  // A kernel lattice with no generators leaves infinitely many classes; the
  // enumeration is then only a box truncation.
  out["total"] = lattice.gens.empty()
                     ? Json("infinite")
                     : Json(static_cast<int>(entries.size()));
  Json classes = Json::array();
  for (const AtlasEntry& e : entries) {
    Json je = class_to_json(e.cls);
    je["orbit_size_in_box"] = e.orbit_size_in_box;
    je["witness_turns"] = json_from_ratvec(e.witness_turns);
    Json wa = Json::array();
    for (const Rat& r : e.witness_turns) wa.push_back(r.to_double() * 2.0 * kPi);
    je["witness_angles"] = std::move(wa);
    classes.push_back(std::move(je));
  }
  out["classes"] = std::move(classes);
  return out;
}

Json curve_summary_to_json(const CausalCheckReport& report) {
  Json out;
  out["steps"] = static_cast<int>(report.items.size());
  out["all_causal"] = report.all_causal;
  out["max_step_residual"] = report.max_step_residual;
  Json items = Json::array();
  for (const CausalCheckItem& it : report.items) {
    Json ji;
    ji["t"] = it.t;
    ji["member"] = it.member;
    ji["interior"] = it.interior;
    ji["margin"] = it.margin;
    ji["step_residual"] = it.step_residual;
    items.push_back(std::move(ji));
  }
  out["items"] = std::move(items);
  return out;
}

// ---------------------------------------------------------------------------
// causal-curve CSV
// ---------------------------------------------------------------------------

std::string curve_to_csv(const CausalCurve& curve, const Tolerances& tol) {
  if (curve.samples.empty()) {
    throw std::invalid_argument("curve_to_csv: empty curve");
  }
  const DescPtr alg = curve.samples.front().g.alg;
  const bool complex_family = !alg->is_real_family();
  const int amb = alg->ambient;
  const int dim = alg->dim;

  std::ostringstream os;
  os << "# elliptica-curve-csv v1\n";
  os << "# group=" << alg->name << " ambient=" << amb << " dim=" << dim
     << " complex=" << (complex_family ? 1 : 0)
     << " samples=" << curve.samples.size() << "\n";
  os << "t";
  for (int i = 0; i < amb; ++i)
    for (int c = 0; c < amb; ++c) os << ",m_re_" << i << "_" << c;
  if (complex_family) {
    for (int i = 0; i < amb; ++i)
      for (int c = 0; c < amb; ++c) os << ",m_im_" << i << "_" << c;
  }
  for (int i = 0; i < dim; ++i) os << ",v_" << i;
  os << ",tau,f_gw,cone_margin,step_residual\n";

  const CausalCheckReport check = causal_check(curve, tol);
  for (std::size_t s = 0; s < curve.samples.size(); ++s) {
    const CurveSample& smp = curve.samples[s];
    os << fmt17(smp.t);
    for (int i = 0; i < amb; ++i)
      for (int c = 0; c < amb; ++c) os << "," << fmt17(smp.g.matrix(i, c).real());
    if (complex_family) {
      for (int i = 0; i < amb; ++i)
        for (int c = 0; c < amb; ++c)
          os << "," << fmt17(smp.g.matrix(i, c).imag());
    }
    for (int i = 0; i < dim; ++i) os << "," << fmt17(smp.velocity.coords(i));
    double tau_v = std::numeric_limits<double>::quiet_NaN();
    double fgw_v = std::numeric_limits<double>::quiet_NaN();
    try {
      tau_v = tau(smp.g, tol);
    } catch (const std::exception&) {
    }
    try {
      fgw_v = f_gw_basic(smp.g, tol);
    } catch (const std::exception&) {
    }
    const bool interior_row = s < check.items.size();
    const double margin = interior_row ? check.items[s].margin : 0.0;
    const double resid = interior_row ? check.items[s].step_residual : 0.0;
    os << "," << fmt17(tau_v) << "," << fmt17(fgw_v) << "," << fmt17(margin)
       << "," << fmt17(resid) << "\n";
  }
  return os.str();
}

CausalCurve curve_from_csv(const std::string& text, const DescPtr& alg,
                           const Tolerances& tol) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "# elliptica-curve-csv v1") {
    throw std::invalid_argument("curve_from_csv: unknown version header");
  }
  if (!std::getline(is, line) || line.rfind("# group=", 0) != 0) {
    throw std::invalid_argument("curve_from_csv: missing metadata header");
  }
  {
    std::istringstream meta(line.substr(2));
    std::string tok;
    while (meta >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "group" && val != alg->name) {
        throw std::invalid_argument("curve_from_csv: group mismatch (" + val +
                                    ")");
      }
      if (key == "ambient" && std::stoi(val) != alg->ambient) {
        throw std::invalid_argument("curve_from_csv: ambient mismatch");
      }
      if (key == "dim" && std::stoi(val) != alg->dim) {
        throw std::invalid_argument("curve_from_csv: dimension mismatch");
      }
    }
  }
  if (!std::getline(is, line)) {
    throw std::invalid_argument("curve_from_csv: missing column header");
  }

  const bool complex_family = !alg->is_real_family();
  const int amb = alg->ambient;
  const int dim = alg->dim;
  const int matrix_cols = amb * amb * (complex_family ? 2 : 1);
  const int expected = 1 + matrix_cols + dim + 4;

  CausalCurve curve;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    vals.reserve(expected);
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(vals.size()) != expected) {
      throw std::invalid_argument("curve_from_csv: wrong column count");
    }
    int k = 0;
    const double t = vals[k++];
    CMat m(amb, amb);
    for (int i = 0; i < amb; ++i)
      for (int c = 0; c < amb; ++c) m(i, c) = vals[k++];
    if (complex_family) {
      for (int i = 0; i < amb; ++i)
        for (int c = 0; c < amb; ++c) m(i, c) += Cplx(0, vals[k++]);
    }
    RVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = vals[k++];
    curve.samples.push_back(
        {t, group_from_matrix(alg, m, tol), element_from_coords(alg, v)});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// element specs
// ---------------------------------------------------------------------------

ElementSpec element_spec_from_json(const Json& j) {
  ElementSpec spec;
  spec.group = j.at("group").get<std::string>();
  const Json& e = j.at("element");
  spec.kind = e.at("type").get<std::string>();
  if (spec.kind == "angles") {
    spec.angles_pi = ratvec_from_json(e.at("pi_units"));
    spec.conjugate = e.value("conjugate", false);
    spec.conj_seed = e.value("conj_seed", 0ULL);
  } else if (spec.kind == "matrix") {
    spec.matrix = cmat_from_json(e.at("matrix"));
  } else if (spec.kind == "word") {
    for (const auto& term : e.at("terms")) {
      spec.word_coords.push_back(rvec_from_json(term));
    }
    if (spec.word_coords.empty()) {
      throw std::invalid_argument("element spec: empty word");
    }
  } else if (spec.kind == "random") {
    spec.seed = e.at("seed").get<std::uint64_t>();
    spec.random_kind = e.value("kind", std::string("elliptic"));
    spec.scale = e.value("scale", 1.0);
  } else {
    throw std::invalid_argument("element spec: unknown type '" + spec.kind +
                                "'");
  }
  return spec;
}

Json element_spec_to_json(const ElementSpec& spec) {
  Json out;
  out["group"] = spec.group;
  Json e;
  e["type"] = spec.kind;
  if (spec.kind == "angles") {
    e["pi_units"] = json_from_ratvec(spec.angles_pi);
    e["conjugate"] = spec.conjugate;
    e["conj_seed"] = spec.conj_seed;
  } else if (spec.kind == "matrix") {
    e["matrix"] = json_from_cmat(spec.matrix);
  } else if (spec.kind == "word") {
    Json terms = Json::array();
    for (const RVec& v : spec.word_coords) terms.push_back(json_from_rvec(v));
    e["terms"] = std::move(terms);
  } else if (spec.kind == "random") {
    e["seed"] = spec.seed;
    e["kind"] = spec.random_kind;
    e["scale"] = spec.scale;
  }
  out["element"] = std::move(e);
  return out;
}

BuiltElement build_element(const ElementSpec& spec, const Tolerances& tol) {
  const DescPtr alg = make_algebra(spec.group);
  DatumPtr datum = build_root_datum(alg);

  auto conjugated = [&](const AlgebraElement& x, std::uint64_t seed) {
    Rng rng(seed);
    RVec hc(alg->dim);
    for (int i = 0; i < alg->dim; ++i) hc(i) = rng.normal();
    hc *= 0.7 / std::max(1e-12, hc.norm());
    const GroupElement h = group_exp(element_from_coords(alg, hc), tol);
    const RVec moved = adjoint_matrix(h, tol) * x.coords;
    return element_from_coords(alg, moved);
  };

  BuiltElement out{group_identity(alg), {}, false, {}};
  if (spec.kind == "angles") {
    if (static_cast<int>(spec.angles_pi.size()) != datum->rank) {
      throw std::invalid_argument("element spec: expected " +
                                  std::to_string(datum->rank) +
                                  " torus angles");
    }
    RVec a(datum->rank);
    out.turns.clear();
    for (int i = 0; i < datum->rank; ++i) {
      a(i) = spec.angles_pi[i].to_double() * kPi;
      out.turns.push_back(spec.angles_pi[i] / Rat(2));
    }
    AlgebraElement x = datum->torus(a);
    if (spec.conjugate) x = conjugated(x, spec.conj_seed);
    out.word = {x};
    out.g = group_exp(x, tol);
    out.exact_angles = true;
  } else if (spec.kind == "matrix") {
    out.g = group_from_matrix(alg, spec.matrix, tol);
  } else if (spec.kind == "word") {
    GroupElement g = group_identity(alg);
    for (const RVec& coords : spec.word_coords) {
      if (coords.size() != alg->dim) {
        throw std::invalid_argument("element spec: word term has wrong size");
      }
      const AlgebraElement x = element_from_coords(alg, coords);
      out.word.push_back(x);
      g = group_mul(g, group_exp(x, tol));
    }
    out.g = g;
  } else if (spec.kind == "random") {
    Rng rng(spec.seed);
    if (spec.random_kind == "elliptic") {
      RVec a(datum->rank);
      for (int attempt = 0;; ++attempt) {
        if (attempt > 10000) {
          throw std::runtime_error("element spec: sampling failed");
        }
        for (int i = 0; i < datum->rank; ++i) {
          a(i) = rng.uniform(0.0, 2.0 * kPi);
        }
        double wall = 1e300;
        for (int i : datum->delta_p_plus) {
          const double turns = datum->root(i).value(a) / (2.0 * kPi);
          wall = std::min(wall, std::abs(turns - std::round(turns)));
        }
        if (wall > 1e-3) break;
      }
      AlgebraElement x = datum->torus(a);
      x = conjugated(x, rng.bits());
      out.word = {x};
      out.g = group_exp(x, tol);
    } else if (spec.random_kind == "generic") {
      RVec c(alg->dim);
      for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
      c *= spec.scale / std::max(1e-12, c.norm());
      const AlgebraElement x = element_from_coords(alg, c);
      out.word = {x};
      out.g = group_exp(x, tol);
    } else {
      throw std::invalid_argument("element spec: unknown random kind '" +
                                  spec.random_kind + "'");
    }
  } else {
    throw std::invalid_argument("element spec: unknown type '" + spec.kind +
                                "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// tolerance profiles
// ---------------------------------------------------------------------------

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const double v = it.value().get<double>();
    if (key == "basis_residual") {
      base.basis_residual = v;
    } else if (key == "coord_residual") {
      base.coord_residual = v;
    } else if (key == "group_residual") {
      base.group_residual = v;
    } else if (key == "cert_residual") {
      base.cert_residual = v;
    } else if (key == "cluster_radius") {
      base.cluster_radius = v;
    } else if (key == "rank_tol") {
      base.rank_tol = v;
    } else if (key == "semisimple_tol") {
      base.semisimple_tol = v;
    } else if (key == "spec_imag_tol") {
      base.spec_imag_tol = v;
    } else if (key == "unit_circle_tol") {
      base.unit_circle_tol = v;
    } else if (key == "jordan_tol") {
      base.jordan_tol = v;
    } else if (key == "psd_tol") {
      base.psd_tol = v;
    } else if (key == "interior_margin") {
      base.interior_margin = v;
    } else if (key == "boundary_margin") {
      base.boundary_margin = v;
    } else if (key == "pd_margin") {
      base.pd_margin = v;
    } else if (key == "step_consistency") {
      base.step_consistency = v;
    } else if (key == "cond_limit") {
      base.cond_limit = v;
    } else if (key == "monotone_slack") {
      base.monotone_slack = v;
    } else if (key == "homog_tol") {
      base.homog_tol = v;
    } else {
      throw std::invalid_argument("tolerance profile: unknown key '" + key +
                                  "'");
    }
  }
  return base;
}

Json tolerances_to_json(const Tolerances& tol) {
  Json out;
  out["basis_residual"] = tol.basis_residual;
  out["coord_residual"] = tol.coord_residual;
  out["group_residual"] = tol.group_residual;
  out["cert_residual"] = tol.cert_residual;
  out["cluster_radius"] = tol.cluster_radius;
  out["rank_tol"] = tol.rank_tol;
  out["semisimple_tol"] = tol.semisimple_tol;
  out["spec_imag_tol"] = tol.spec_imag_tol;
  out["unit_circle_tol"] = tol.unit_circle_tol;
  out["jordan_tol"] = tol.jordan_tol;
  out["psd_tol"] = tol.psd_tol;
  out["interior_margin"] = tol.interior_margin;
  out["boundary_margin"] = tol.boundary_margin;
  out["pd_margin"] = tol.pd_margin;
  out["step_consistency"] = tol.step_consistency;
  out["cond_limit"] = tol.cond_limit;
  out["monotone_slack"] = tol.monotone_slack;
  out["homog_tol"] = tol.homog_tol;
  return out;
}

// ---------------------------------------------------------------------------
// classify report + revalidation
// ---------------------------------------------------------------------------

Json classify_to_json(const GroupElement& g, const std::string& lattice_name,
                      const Tolerances& tol) {
  DatumPtr datum = build_root_datum(g.alg);
  const KernelLattice& lattice = datum->lattice(lattice_name);

  Json out;
  out["group"] = g.alg->name;
  out["lattice"] = lattice.name;
  out["matrix"] = json_from_cmat(g.matrix);
  const EllipticityReport rep = classify_element(g, tol);
  out["ellipticity"] = report_to_json(rep);
  if (rep.stably_elliptic) {
    const ElementComponent ec = component_of(g, *datum, lattice, tol);
    out["component"] = component_to_json(ec);
  } else {
    out["component"] = nullptr;
  }
  try {
    out["tau"] = tau(g, tol);
  } catch (const std::exception&) {
    out["tau"] = nullptr;
  }
  if (rep.elliptic) {
    try {
      out["f_gw"] = f_gw_basic(g, tol);
    } catch (const std::exception&) {
      out["f_gw"] = nullptr;
    }
  } else {
    out["f_gw"] = nullptr;
  }
  if (g.alg->family != Family::Su && rep.elliptic) {
    out["krein"] = krein_to_json(krein_signatures(g, tol));
  } else {
    out["krein"] = nullptr;
  }
  return out;
}

bool revalidate_classify_json(const Json& j, const Tolerances& tol) {
  const DescPtr alg = make_algebra(j.at("group").get<std::string>());
  DatumPtr datum = build_root_datum(alg);
  const GroupElement g = group_from_matrix(alg, cmat_from_json(j.at("matrix")), tol);

  const Json& ell = j.at("ellipticity");
  if (!ell.at("torus").is_null()) {
    const Json& t = ell.at("torus");
    const GroupElement q =
        group_from_matrix(alg, cmat_from_json(t.at("q")), tol);
    const RVec angles = rvec_from_json(t.at("angles"));
    const CMat lhs = g.matrix * q.matrix;
    const CMat rhs = q.matrix * group_exp(datum->torus(angles), tol).matrix;
    const double scale =
        std::max(1.0, g.matrix.norm() * std::max(1.0, q.matrix.norm()));
    if ((lhs - rhs).norm() > tol.cert_residual * scale) return false;
  }

  if (!j.at("component").is_null()) {
    const Json& comp = j.at("component");
    const KernelLattice& lattice =
        datum->lattice(j.at("lattice").get<std::string>());
    const Json& raw = comp.at("raw_label");
    AlcoveLabel label(static_cast<int>(raw.size()));
    for (int i = 0; i < label.size(); ++i) label(i) = raw.at(i).get<int>();
    const ComponentClass cls = canonical_component(*datum, lattice, label);
    const Json& stored = comp.at("class").at("canonical");
    if (static_cast<int>(stored.size()) != cls.canonical.size()) return false;
    for (int i = 0; i < cls.canonical.size(); ++i) {
      if (stored.at(i).get<int>() != cls.canonical(i)) return false;
    }
    // Witness reproduction from the stored data.
    const Json& wit = comp.at("class").at("witness");
    const int wi = wit.at("weyl_index").get<int>();
    const RatVec shift = ratvec_from_json(wit.at("lattice_shift_turns"));
    RatVec neg(shift.size());
    for (std::size_t i = 0; i < shift.size(); ++i) neg[i] = -shift[i];
    const AlcoveLabel reproduced = translate_label(
        *datum, neg, weyl_act_on_label(*datum, datum->weyl[wi], label));
    if (reproduced != cls.canonical) return false;
  }

  if (!j.at("tau").is_null()) {
    const double stored = j.at("tau").get<double>();
    const double recomputed = tau(g, tol);
    if (std::abs(stored - recomputed) >
        1e-9 * std::max(1.0, std::abs(recomputed))) {
      return false;
    }
  }
  return true;
}

}  // namespace elliptica
