// elliptica -- command-line front end for the ellipticity / component /
// causal-geometry library.
//
// Exit codes: 0 success, 1 invalid input, 2 boundary-unstable input,
// 3 internal invariant violation.

#include "elliptica/accept.hpp"
#include "elliptica/algebra.hpp"
#include "elliptica/causal.hpp"
#include "elliptica/components.hpp"
#include "elliptica/ellipticity.hpp"
#include "elliptica/errors.hpp"
#include "elliptica/io.hpp"
#include "elliptica/quasimorphism.hpp"
#include "elliptica/structure.hpp"

#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace elliptica;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// parsing helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos != s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi" (also with "j").
Cplx parse_complex(std::string s) {
  for (char& c : s) {
    if (c == 'j') c = 'i';
    if (c == ' ') c = '\0';
  }
  s.erase(std::remove(s.begin(), s.end(), '\0'), s.end());
  if (s.empty()) throw std::invalid_argument("empty matrix entry");
  const auto ipos = s.find('i');
  if (ipos == std::string::npos) return Cplx(parse_double(s), 0.0);
  if (ipos != s.size() - 1) {
    throw std::invalid_argument("malformed complex entry: '" + s + "'");
  }
  std::string body = s.substr(0, s.size() - 1);
  // Find the split between real and imaginary parts: the last sign that is
  // not a leading sign and not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
        body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  if (cut == std::string::npos) {
    std::string im = body;
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return Cplx(0.0, parse_double(im));
  }
  std::string im = body.substr(cut);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return Cplx(parse_double(body.substr(0, cut)), parse_double(im));
}

CMat parse_matrix(const std::string& text) {
  const std::vector<std::string> rows = split(text, ';');
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  const int n = static_cast<int>(rows.size());
  CMat m(n, static_cast<int>(split(rows[0], ',').size()));
  for (int i = 0; i < n; ++i) {
    const std::vector<std::string> cells = split(rows[i], ',');
    if (static_cast<int>(cells.size()) != m.cols()) {
      throw std::invalid_argument("ragged matrix rows");
    }
    for (int c = 0; c < m.cols(); ++c) m(i, c) = parse_complex(cells[c]);
  }
  return m;
}

RatVec parse_rationals(const std::string& text) {
  RatVec out;
  for (const std::string& tok : split(text, ',')) out.push_back(Rat::parse(tok));
  return out;
}

RVec parse_vector(const std::string& text) {
  const std::vector<std::string> cells = split(text, ',');
  RVec v(static_cast<int>(cells.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = parse_double(cells[i]);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for write: " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string group = "sp4";
  std::string lattice = "matrix";
  bool json = false;
  std::uint64_t seed = 1;
  std::string tol_profile;

  Tolerances tolerances() const {
    Tolerances tol = default_tolerances();
    if (!tol_profile.empty()) {
      tol = tolerances_from_json(Json::parse(read_file(tol_profile)), tol);
    }
    return tol;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_lattice = true) {
  cmd->add_option("--group", opts.group,
                  "group family (sl2, sp2, sp4, sp6, su(p,q) with p+q <= 4)");
  if (with_lattice) {
    cmd->add_option("--lattice", opts.lattice,
                    "kernel lattice preset (universal, matrix, adjoint, "
                    "center)");
  }
  cmd->add_flag("--json", opts.json, "emit a JSON report");
  cmd->add_option("--seed", opts.seed, "random seed for sampled inputs");
  cmd->add_option("--tol-profile", opts.tol_profile,
                  "JSON file overriding tolerance fields");
}

struct ElementOpts {
  std::string angles;  // exact rational multiples of pi, comma separated
  bool conjugate = false;
  std::string matrix;
  std::string word;  // terms separated by ';', coordinates by ','
  std::string random_kind;
  double scale = 1.0;
};

void add_element(CLI::App* cmd, ElementOpts& opts) {
  cmd->add_option("--angles", opts.angles,
                  "torus angles as exact rational multiples of pi, e.g. "
                  "'1/2,1/4'");
  cmd->add_flag("--conjugate", opts.conjugate,
                "conjugate the torus element by a seeded random group element");
  cmd->add_option("--matrix", opts.matrix,
                  "defining matrix, rows ';'-separated, entries ','-separated "
                  "(complex entries as a+bi)");
  cmd->add_option("--word", opts.word,
                  "product of exponentials: algebra coordinate vectors, terms "
                  "';'-separated");
  cmd->add_option("--random", opts.random_kind,
                  "seeded random element: 'elliptic' or 'generic'");
  cmd->add_option("--scale", opts.scale, "norm scale for --random generic");
}

ElementSpec make_spec(const CommonOpts& common, const ElementOpts& elem) {
  ElementSpec spec;
  spec.group = common.group;
  int given = 0;
  if (!elem.angles.empty()) ++given;
  if (!elem.matrix.empty()) ++given;
  if (!elem.word.empty()) ++given;
  if (!elem.random_kind.empty()) ++given;
  if (given != 1) {
    throw std::invalid_argument(
        "specify exactly one of --angles, --matrix, --word, --random");
  }
  if (!elem.angles.empty()) {
    spec.kind = "angles";
    spec.angles_pi = parse_rationals(elem.angles);
    spec.conjugate = elem.conjugate;
    spec.conj_seed = common.seed;
  } else if (!elem.matrix.empty()) {
    spec.kind = "matrix";
    spec.matrix = parse_matrix(elem.matrix);
  } else if (!elem.word.empty()) {
    spec.kind = "word";
    for (const std::string& term : split(elem.word, ';')) {
      spec.word_coords.push_back(parse_vector(term));
    }
  } else {
    spec.kind = "random";
    spec.seed = common.seed;
    spec.random_kind = elem.random_kind;
    spec.scale = elem.scale;
  }
  return spec;
}

std::string render_label(const Eigen::VectorXi& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_classify(const CommonOpts& common, const ElementOpts& elem) {
  const Tolerances tol = common.tolerances();
  const BuiltElement built = build_element(make_spec(common, elem), tol);
  const Json out = classify_to_json(built.g, common.lattice, tol);
  if (common.json) {
    std::cout << dump_json(out);
    return 0;
  }
  const Json& ell = out.at("ellipticity");
  std::cout << "group:            " << common.group << "\n";
  std::cout << "elliptic:         "
            << (ell.at("elliptic").get<bool>() ? "yes" : "no") << "\n";
  std::cout << "stably elliptic:  "
            << (ell.at("stably_elliptic").get<bool>() ? "yes" : "no") << "\n";
  std::cout << "fixed-space dim:  " << ell.at("fixed_dim").get<int>() << "\n";
  if (out.at("component").is_null()) {
    std::cout << "component:        (not stably elliptic)\n";
  } else {
    const Json& cls = out.at("component").at("class");
    std::ostringstream lbl;
    lbl << "(";
    const Json& canon = cls.at("canonical");
    for (std::size_t i = 0; i < canon.size(); ++i) {
      lbl << (i ? "," : "") << canon.at(i).get<int>();
    }
    lbl << ")";
    std::cout << "component:        " << lbl.str()
              << (cls.at("basic").get<bool>() ? " [basic]" : "")
              << "  (lattice " << cls.at("lattice").get<std::string>()
              << ")\n";
  }
  std::cout << "tau:              "
            << (out.at("tau").is_null() ? std::string("(outside basic component)")
                                        : std::to_string(out.at("tau").get<double>()))
            << "\n";
  std::cout << "f_gw:             "
            << (out.at("f_gw").is_null()
                    ? std::string("(undefined)")
                    : std::to_string(out.at("f_gw").get<double>()))
            << "\n";
  return 0;
}

int cmd_atlas(const CommonOpts& common, int bound) {
  if (bound < 0 || bound > 6) {
    throw std::invalid_argument("--bound must be between 0 and 6");
  }
  DatumPtr datum = build_root_datum(make_algebra(common.group));
  const KernelLattice& lattice = datum->lattice(common.lattice);
  const std::vector<AtlasEntry> entries =
      enumerate_components(*datum, lattice, bound);
  if (common.json) {
    std::cout << dump_json(atlas_to_json(*datum, lattice, bound, entries));
    return 0;
  }
  std::cout << "group " << common.group << ", lattice " << common.lattice
            << ", label box [-" << bound << "," << bound << "]^"
            << datum->num_positive_noncompact() << "\n";
  if (lattice.gens.empty()) {
    std::cout << "class count: infinite (box-truncated: " << entries.size()
              << ")\n";
  } else {
    std::cout << "class count: " << entries.size() << "\n";
  }
  for (const AtlasEntry& e : entries) {
    std::cout << "  class " << render_label(e.cls.canonical)
              << (e.cls.is_basic() ? " [basic]" : "") << "  box orbit "
              << e.orbit_size_in_box << "  witness (";
    for (std::size_t i = 0; i < e.witness_turns.size(); ++i) {
      std::cout << (i ? "," : "") << e.witness_turns[i].str();
    }
    std::cout << ") turns\n";
  }
  return 0;
}

int cmd_causal(const CommonOpts& common, int steps, double dt, bool hyperbolic,
               bool k_level, const std::string& csv_path,
               const std::string& start_angles) {
  const Tolerances tol = common.tolerances();
  const DescPtr alg = make_algebra(common.group);
  DatumPtr datum = build_root_datum(alg);
  Rng rng(common.seed);

  CausalCurve curve;
  if (hyperbolic) {
    // Deliberately non-causal: constant noncompact velocity.
    RVec c(alg->dim);
    for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
    c = alg->proj_p * c;
    c /= std::max(1e-12, c.norm());
    const AlgebraElement w = element_from_coords(alg, c);
    GroupElement cur = group_identity(alg);
    for (int i = 0; i < steps; ++i) {
      curve.samples.push_back({i * dt, cur, w});
      cur = group_mul(cur, group_exp(element_from_coords(alg, dt * c), tol));
    }
    curve.samples.push_back({steps * dt, cur, element_zero(alg)});
  } else {
    GroupElement start = group_identity(alg);
    if (!start_angles.empty()) {
      RatVec pis = parse_rationals(start_angles);
      if (static_cast<int>(pis.size()) != datum->rank) {
        throw std::invalid_argument("--start-angles needs rank-many entries");
      }
      RVec a(datum->rank);
      for (int i = 0; i < datum->rank; ++i) a(i) = pis[i].to_double() * kPi;
      start = group_exp(datum->torus(a), tol);
    } else {
      RVec a(datum->rank);
      for (int i = 0; i < datum->rank; ++i) a(i) = rng.uniform(0.4, 1.6);
      start = group_exp(datum->torus(a), tol);
    }
    curve = generate_causal_curve(start, steps, dt, rng, tol);
  }

  const CausalCheckReport report = causal_check(curve, tol);
  Json out = curve_summary_to_json(report);
  int first_violation = -1;
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    if (!report.items[i].member) {
      first_violation = static_cast<int>(i);
      break;
    }
  }
  out["first_violation"] =
      first_violation < 0 ? Json(nullptr) : Json(first_violation);
  if (k_level) out["k_level"] = curve_summary_to_json(causal_check_k_level(curve, tol));

  const std::string csv = curve_to_csv(curve, tol);
  if (!csv_path.empty()) {
    write_file(csv_path, csv);
    out["csv_path"] = csv_path;
  }
  if (common.json || !csv_path.empty()) {
    std::cout << dump_json(out);
  } else {
    std::cout << csv << "\n" << dump_json(out);
  }
  return 0;
}

int cmd_maslov(const CommonOpts& common, const ElementOpts& elem,
               int defect_pairs) {
  const Tolerances tol = common.tolerances();
  const BuiltElement built = build_element(make_spec(common, elem), tol);
  const DescPtr alg = built.g.alg;

  Json out;
  out["group"] = common.group;
  try {
    out["basic_branch"] = f_gw_basic(built.g, tol);
  } catch (const std::exception&) {
    out["basic_branch"] = nullptr;
  }
  try {
    const CMat logm = built.g.matrix.log();
    if ((logm.exp() - built.g.matrix).norm() <=
        1e-8 * std::max(1.0, built.g.matrix.norm())) {
      out["closed_form_principal_log"] =
          f_gw_closed_form(element_from_matrix(alg, logm, tol), tol);
    } else {
      out["closed_form_principal_log"] = nullptr;
    }
  } catch (const std::exception&) {
    out["closed_form_principal_log"] = nullptr;
  }
  if (!built.word.empty() && alg->family != Family::Su) {
    const GwValue hom = f_gw_homogenized(built.word, tol);
    Json jh;
    jh["value"] = hom.value;
    jh["error_bound"] = hom.error_bound;
    jh["power"] = hom.power;
    out["homogenized"] = std::move(jh);
  } else {
    out["homogenized"] = nullptr;
  }
  if (defect_pairs > 0) {
    Rng rng(common.seed);
    out["defect_bound"] = quasimorphism_defect(alg, defect_pairs, 0.8, rng, tol);
  }
  if (common.json) {
    std::cout << dump_json(out);
  } else {
    std::cout << "basic branch:    "
              << (out["basic_branch"].is_null()
                      ? std::string("(undefined)")
                      : std::to_string(out["basic_branch"].get<double>()))
              << "\n";
    std::cout << "closed form:     "
              << (out["closed_form_principal_log"].is_null()
                      ? std::string("(no principal logarithm)")
                      : std::to_string(
                            out["closed_form_principal_log"].get<double>()))
              << "\n";
    if (!out["homogenized"].is_null()) {
      std::cout << "homogenized:     " << out["homogenized"]["value"].get<double>()
                << "  (error bound "
                << out["homogenized"]["error_bound"].get<double>() << ")\n";
    }
    if (out.contains("defect_bound")) {
      std::cout << "defect estimate: " << out["defect_bound"].get<double>()
                << "\n";
    }
  }
  return 0;
}

int cmd_tau(const CommonOpts& common, const ElementOpts& elem) {
  const Tolerances tol = common.tolerances();
  const BuiltElement built = build_element(make_spec(common, elem), tol);
  const double value = tau(built.g, tol);
  if (common.json) {
    Json out;
    out["group"] = common.group;
    out["tau"] = value;
    std::cout << dump_json(out);
  } else {
    std::cout << value << "\n";
  }
  return 0;
}

int cmd_cone(const CommonOpts& common, const std::string& coords,
             const std::string& torus_angles) {
  const Tolerances tol = common.tolerances();
  const DescPtr alg = make_algebra(common.group);
  AlgebraElement x = element_zero(alg);
  if (!coords.empty()) {
    x = element_from_coords(alg, parse_vector(coords));
  } else if (!torus_angles.empty()) {
    DatumPtr datum = build_root_datum(alg);
    RatVec pis = parse_rationals(torus_angles);
    if (static_cast<int>(pis.size()) != datum->rank) {
      throw std::invalid_argument("--torus-angles needs rank-many entries");
    }
    RVec a(datum->rank);
    for (int i = 0; i < datum->rank; ++i) a(i) = pis[i].to_double() * kPi;
    x = datum->torus(a);
  } else {
    throw std::invalid_argument("specify --coords or --torus-angles");
  }
  const ConeQuery q = in_max_cone(x, tol);
  if (common.json) {
    std::cout << dump_json(cone_to_json(q));
  } else {
    std::cout << "member:   " << (q.member ? "yes" : "no") << "\n"
              << "interior: " << (q.interior ? "yes" : "no") << "\n"
              << "margin:   " << q.margin << "  (route " << q.route << ")\n";
  }
  return 0;
}

int cmd_exit_time(const CommonOpts& common, const ElementOpts& elem,
                  const std::string& direction) {
  const Tolerances tol = common.tolerances();
  const BuiltElement built = build_element(make_spec(common, elem), tol);
  if (direction.empty()) {
    throw std::invalid_argument("--direction is required");
  }
  const AlgebraElement x =
      element_from_coords(built.g.alg, parse_vector(direction));
  const ExitTimes et = exit_times(x, built.g, tol);
  if (common.json) {
    Json out;
    out["group"] = common.group;
    out["backward"] = et.backward;
    out["forward"] = et.forward;
    std::cout << dump_json(out);
  } else {
    std::cout << "backward: " << et.backward << "\nforward:  " << et.forward
              << "\n";
  }
  return 0;
}

int cmd_selftest(const CommonOpts& common, bool full,
                 const std::string& log_path) {
  const Tolerances tol = common.tolerances();
  const auto results = elliptica::accept::run_all(
      full ? accept::Level::Full : accept::Level::Quick, tol);
  Json log;
  log["level"] = full ? "full" : "quick";
  Json items = Json::array();
  for (const auto& r : results) {
    Json ji;
    ji["index"] = r.index;
    ji["name"] = r.name;
    ji["pass"] = r.pass;
    ji["detail"] = r.detail;
    ji["seconds"] = r.seconds;
    items.push_back(std::move(ji));
  }
  log["results"] = std::move(items);
  const bool ok = accept::all_pass(results);
  log["all_pass"] = ok;
  if (!log_path.empty()) write_file(log_path, dump_json(log));
  if (common.json) {
    std::cout << dump_json(log);
  } else {
    for (const auto& r : results) std::cout << accept::format_line(r) << "\n";
    std::cout << (ok ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "elliptica: classification of elliptic and stably elliptic elements, "
      "connected components, causal cones, time functions and the rotation "
      "quasimorphism for hermitian matrix groups"};
  app.require_subcommand(1);

  CommonOpts c_classify, c_atlas, c_causal, c_maslov, c_tau, c_cone, c_exit,
      c_self;
  ElementOpts e_classify, e_maslov, e_tau, e_exit;

  auto* classify = app.add_subcommand(
      "classify", "ellipticity, component class, tau, quasimorphism");
  add_common(classify, c_classify);
  add_element(classify, e_classify);

  int atlas_bound = 3;
  auto* atlas = app.add_subcommand(
      "atlas", "enumerate component classes with labels in a box");
  add_common(atlas, c_atlas);
  atlas->add_option("--bound", atlas_bound, "label box half-width (0..6)");

  int causal_steps = 8;
  double causal_dt = 0.05;
  bool causal_hyperbolic = false;
  bool causal_k_level = false;
  std::string causal_csv, causal_start;
  auto* causal = app.add_subcommand(
      "causal", "synthesize a curve, verify causality, emit CSV + summary");
  add_common(causal, c_causal, false);
  causal->add_option("--steps", causal_steps, "number of curve steps");
  causal->add_option("--dt", causal_dt, "step size");
  causal->add_flag("--hyperbolic", causal_hyperbolic,
                   "use a constant noncompact velocity (non-causal demo)");
  causal->add_flag("--k-level", causal_k_level,
                   "also check the compact-level shadow curve");
  causal->add_option("--csv", causal_csv, "write the curve CSV to this path");
  causal->add_option("--start-angles", causal_start,
                     "start torus angles (rational multiples of pi)");

  int maslov_defect_pairs = 0;
  auto* maslov = app.add_subcommand(
      "maslov", "rotation-quasimorphism values and defect estimates");
  add_common(maslov, c_maslov, false);
  add_element(maslov, e_maslov);
  maslov->add_option("--defect-pairs", maslov_defect_pairs,
                     "sample this many pairs for a defect estimate");

  auto* tau_cmd =
      app.add_subcommand("tau", "time-function value on the basic component");
  add_common(tau_cmd, c_tau, false);
  add_element(tau_cmd, e_tau);

  std::string cone_coords, cone_angles;
  auto* cone = app.add_subcommand(
      "cone", "maximal invariant cone membership of an algebra element");
  add_common(cone, c_cone, false);
  cone->add_option("--coords", cone_coords, "algebra coordinates");
  cone->add_option("--torus-angles", cone_angles,
                   "torus element (rational multiples of pi)");

  std::string exit_direction;
  auto* exit_cmd = app.add_subcommand(
      "exit-time", "boundary crossings of exp(t x) g out of the basic "
                   "component");
  add_common(exit_cmd, c_exit, false);
  add_element(exit_cmd, e_exit);
  exit_cmd->add_option("--direction", exit_direction,
                       "cone direction (algebra coordinates)");

  bool self_full = false;
  std::string self_log;
  auto* selftest = app.add_subcommand(
      "selftest", "run the verification battery (quick or full)");
  add_common(selftest, c_self, false);
  selftest->add_flag("--full", self_full, "full battery (minutes)");
  selftest->add_option("--log", self_log, "write a JSON log to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(c_classify, e_classify);
    if (atlas->parsed()) return cmd_atlas(c_atlas, atlas_bound);
    if (causal->parsed()) {
      return cmd_causal(c_causal, causal_steps, causal_dt, causal_hyperbolic,
                        causal_k_level, causal_csv, causal_start);
    }
    if (maslov->parsed())
      return cmd_maslov(c_maslov, e_maslov, maslov_defect_pairs);
    if (tau_cmd->parsed()) return cmd_tau(c_tau, e_tau);
    if (cone->parsed()) return cmd_cone(c_cone, cone_coords, cone_angles);
    if (exit_cmd->parsed())
      return cmd_exit_time(c_exit, e_exit, exit_direction);
    if (selftest->parsed()) return cmd_selftest(c_self, self_full, self_log);
  } catch (const BoundaryUnstableError& err) {
    std::cerr << "boundary-unstable input: " << err.what() << "\n";
    return 2;
  } catch (const InvariantViolation& err) {
    std::cerr << "internal invariant violation: " << err.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
