// Deterministic serialization, certificate revalidation, curve CSV round
// trips, element specs, tolerance profiles, and the command-line tool.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptica/io.hpp"
#include "elliptica/errors.hpp"
#include "elliptica/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

using namespace elliptica;

namespace {
constexpr double kPi = 3.14159265358979323846;
const Tolerances tol = default_tolerances();

GroupElement conjugated_torus(const DescPtr& alg, const RVec& a, Rng& rng) {
  DatumPtr datum = build_root_datum(alg);
  RVec c(alg->dim);
  for (int i = 0; i < alg->dim; ++i) c(i) = rng.normal();
  c *= 0.6 / std::max(1e-12, c.norm());
  const GroupElement q = group_exp(element_from_coords(alg, c), tol);
  return group_conj(q, group_exp(datum->torus(a), tol));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string temp_file(const std::string& stem) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  return (dir / ("elliptica_io_" + stem + "_" + std::to_string(counter++)))
      .string();
}
}  // namespace

TEST_CASE("JSON dumps are deterministic and round-trip through parsing") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  RVec a(2);
  a << 0.9, 0.4;

  Rng rng1(91);
  Rng rng2(91);
  const Json j1 = classify_to_json(conjugated_torus(alg, a, rng1), "matrix", tol);
  const Json j2 = classify_to_json(conjugated_torus(alg, a, rng2), "matrix", tol);
  const std::string d1 = dump_json(j1);
  const std::string d2 = dump_json(j2);
  CHECK(d1 == d2);

  // Parse and re-dump: byte-identical (17 significant digits are lossless).
  CHECK(dump_json(Json::parse(d1)) == d1);

  // Non-finite values serialize as null, never as bare NaN tokens.
  Json nj;
  nj["x"] = std::nan("");
  CHECK(dump_json(nj) == "{\n  \"x\": null\n}");
}

TEST_CASE("classify reports carry verifiable certificates") {
  const DescPtr alg = make_algebra("sp4");
  RVec a(2);
  a << 1.1, 0.6;
  Rng rng(92);
  const GroupElement g = conjugated_torus(alg, a, rng);
  const Json j = classify_to_json(g, "matrix", tol);
  REQUIRE(j["ellipticity"]["stably_elliptic"].get<bool>());
  CHECK(revalidate_classify_json(j, tol));

  // Tampering with the conjugator breaks the factorization certificate.
  Json bad = j;
  bad["ellipticity"]["torus"]["q"]["re"][0][0] =
      bad["ellipticity"]["torus"]["q"]["re"][0][0].get<double>() + 1e-3;
  CHECK_FALSE(revalidate_classify_json(bad, tol));

  // Tampering with the component label breaks the canonical reduction.
  bad = j;
  bad["component"]["raw_label"][0] =
      bad["component"]["raw_label"][0].get<int>() + 1;
  CHECK_FALSE(revalidate_classify_json(bad, tol));

  // Tampering with tau breaks the recomputation check.
  bad = j;
  bad["tau"] = bad["tau"].get<double>() + 1e-3;
  CHECK_FALSE(revalidate_classify_json(bad, tol));
}

TEST_CASE("causal curves round-trip through CSV byte-identically") {
  const DescPtr alg = make_algebra("sp4");
  DatumPtr datum = build_root_datum(alg);
  RVec a(2);
  a << 0.8, 0.7;
  Rng rng(93);
  const GroupElement start = group_exp(datum->torus(a), tol);
  const CausalCurve curve = generate_causal_curve(start, 4, 0.05, rng, tol);

  const std::string csv = curve_to_csv(curve, tol);
  const CausalCurve back = curve_from_csv(csv, alg, tol);
  REQUIRE(back.samples.size() == curve.samples.size());
  CHECK(curve_to_csv(back, tol) == csv);

  // Version and group are validated.
  CHECK_THROWS_AS(curve_from_csv(csv, make_algebra("sl2"), tol),
                  std::invalid_argument);
  std::string tampered = csv;
  const auto vpos = tampered.find("elliptica-curve-csv v1");
  REQUIRE(vpos != std::string::npos);
  tampered.replace(vpos, 22, "elliptica-curve-csv v9");
  CHECK_THROWS_AS(curve_from_csv(tampered, alg, tol), std::invalid_argument);
}

TEST_CASE("element specs round-trip and build deterministically") {
  ElementSpec spec;
  spec.group = "sp4";
  spec.kind = "angles";
  spec.angles_pi = {Rat(1, 2), Rat(1, 4)};
  spec.conjugate = true;
  spec.conj_seed = 7;

  const Json j = element_spec_to_json(spec);
  const ElementSpec back = element_spec_from_json(j);
  CHECK(dump_json(element_spec_to_json(back)) == dump_json(j));

  const BuiltElement b1 = build_element(spec, tol);
  const BuiltElement b2 = build_element(spec, tol);
  CHECK((b1.g.matrix - b2.g.matrix).norm() == 0.0);
  CHECK(b1.exact_angles);
  REQUIRE(b1.turns.size() == 2);
  CHECK(b1.turns[0] == Rat(1, 4));  // half the pi-units
  CHECK_FALSE(b1.word.empty());

  ElementSpec rnd;
  rnd.group = "sl2";
  rnd.kind = "random";
  rnd.seed = 5;
  const BuiltElement r1 = build_element(rnd, tol);
  const BuiltElement r2 = build_element(rnd, tol);
  CHECK((r1.g.matrix - r2.g.matrix).norm() == 0.0);
  rnd.seed = 6;
  const BuiltElement r3 = build_element(rnd, tol);
  CHECK((r1.g.matrix - r3.g.matrix).norm() > 1e-9);

  ElementSpec word;
  word.group = "sl2";
  word.kind = "word";
  RVec v1(3), v2(3);
  v1 << 0.1, 0.2, -0.1;
  v2 << 0.0, -0.3, 0.2;
  word.word_coords = {v1, v2};
  const Json jw = element_spec_to_json(word);
  CHECK(dump_json(element_spec_to_json(element_spec_from_json(jw))) ==
        dump_json(jw));
  const BuiltElement bw = build_element(word, tol);
  CHECK(bw.word.size() == 2);
}

TEST_CASE("tolerance profiles: partial override, unknown keys rejected") {
  Json j;
  j["pd_margin"] = 1e-5;
  const Tolerances t = tolerances_from_json(j, tol);
  CHECK(t.pd_margin == 1e-5);
  CHECK(t.boundary_margin == tol.boundary_margin);
  CHECK(t.unit_circle_tol == tol.unit_circle_tol);

  Json bad;
  bad["not_a_tolerance"] = 1.0;
  CHECK_THROWS_AS(tolerances_from_json(bad, tol), std::invalid_argument);

  // Full round trip through the serializer.
  const Tolerances t2 = tolerances_from_json(tolerances_to_json(tol), tol);
  CHECK(t2.cert_residual == tol.cert_residual);
  CHECK(t2.homog_tol == tol.homog_tol);
}

#ifdef ELLIPTICA_CLI_PATH

namespace {
struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string out_path = temp_file("out");
  const std::string cmd =
      std::string(ELLIPTICA_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult res;
#ifndef _WIN32
  res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#else
  res.status = raw;
#endif
  res.out = slurp(out_path);
  std::filesystem::remove(out_path);
  return res;
}
}  // namespace

TEST_CASE("CLI classify: JSON reports, exit codes, determinism") {
  const CliResult r1 = run_cli("classify --group sp4 --angles 1/2,1/4 --json");
  REQUIRE(r1.status == 0);
  const Json j = Json::parse(r1.out);
  CHECK(j["ellipticity"]["stably_elliptic"].get<bool>());
  CHECK(j["component"]["class"]["basic"].get<bool>());
  CHECK(j["tau"].is_number());
  CHECK(j["krein"]["total_positive"].get<int>() == 2);

  // Byte-for-byte determinism across runs.
  const CliResult r2 = run_cli("classify --group sp4 --angles 1/2,1/4 --json");
  REQUIRE(r2.status == 0);
  CHECK(r1.out == r2.out);

  // -1 in SL(2,R): elliptic but on the wall, so no component.
  const CliResult rm =
      run_cli("classify --group sl2 '--matrix=-1,0;0,-1' --json");
  REQUIRE(rm.status == 0);
  const Json jm = Json::parse(rm.out);
  CHECK(jm["ellipticity"]["elliptic"].get<bool>());
  CHECK_FALSE(jm["ellipticity"]["stably_elliptic"].get<bool>());
  CHECK(jm["component"].is_null());

  // Hyperbolic exponential: not elliptic at all.
  const CliResult rh = run_cli("classify --group sl2 --word 0,0.6,0 --json");
  REQUIRE(rh.status == 0);
  const Json jh = Json::parse(rh.out);
  CHECK_FALSE(jh["ellipticity"]["elliptic"].get<bool>());
  CHECK(jh["component"].is_null());
  CHECK(jh["f_gw"].is_null());

  // Within the wall margin the component verdict is refused: exit code 2.
  const CliResult rb =
      run_cli("classify --group sp4 --angles 1/15707963,1/4 --json");
  CHECK(rb.status == 2);

  // Unknown group: usage error, exit code 1.
  const CliResult rbad = run_cli("classify --group nope --json");
  CHECK(rbad.status == 1);
}

TEST_CASE("CLI atlas, cone, tau, maslov, exit-time") {
  const CliResult ra =
      run_cli("atlas --group 'su(2,1)' --lattice center --bound 2 --json");
  REQUIRE(ra.status == 0);
  const Json ja = Json::parse(ra.out);
  CHECK(ja["class_count"].get<int>() == 1);
  CHECK(ja["classes"][0]["class"]["basic"].get<bool>());

  const CliResult rc =
      run_cli("cone --group sp4 --torus-angles 1/4,1/4 --json");
  REQUIRE(rc.status == 0);
  const Json jc = Json::parse(rc.out);
  CHECK(jc["member"].get<bool>());
  CHECK(jc["interior"].get<bool>());
  CHECK(jc["margin"].get<double>() == doctest::Approx(kPi / 4.0).epsilon(1e-9));

  const CliResult rt = run_cli("tau --group sp4 --angles 1/2,1/2 --json");
  REQUIRE(rt.status == 0);
  CHECK(std::abs(Json::parse(rt.out)["tau"].get<double>()) < 1e-9);

  const CliResult rq = run_cli("maslov --group sl2 --angles 1/2 --json");
  REQUIRE(rq.status == 0);
  const Json jq = Json::parse(rq.out);
  CHECK(jq["basic_branch"].get<double>() ==
        doctest::Approx(kPi / 2.0).epsilon(1e-9));
  CHECK(jq["closed_form_principal_log"].get<double>() ==
        doctest::Approx(kPi / 2.0).epsilon(1e-9));
  REQUIRE_FALSE(jq["homogenized"].is_null());
  CHECK(std::abs(jq["homogenized"]["value"].get<double>() - kPi / 2.0) <=
        jq["homogenized"]["error_bound"].get<double>() + 0.02);

  const CliResult re =
      run_cli("exit-time --group sl2 --angles 1/2 --direction 1,0,0 --json");
  REQUIRE(re.status == 0);
  const Json je = Json::parse(re.out);
  CHECK(je["backward"].get<double>() ==
        doctest::Approx(-kPi / 4.0).epsilon(1e-5));
  CHECK(je["forward"].get<double>() ==
        doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-5));
}

TEST_CASE("CLI causal curves: verification summary and CSV output") {
  const std::string csv_path = temp_file("curve_csv");
  const CliResult r = run_cli(
      "causal --group sp4 --steps 4 --dt 0.05 --start-angles 1/4,2/5 --seed 3 "
      "--csv " +
      csv_path + " --json");
  REQUIRE(r.status == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["all_causal"].get<bool>());
  CHECK(j["first_violation"].is_null());
  CHECK(j["max_step_residual"].get<double>() < 1e-6);

  const std::string csv = slurp(csv_path);
  std::filesystem::remove(csv_path);
  const CausalCurve curve = curve_from_csv(csv, make_algebra("sp4"), tol);
  CHECK(curve.samples.size() == 5);

  const CliResult rh = run_cli(
      "causal --group sl2 --hyperbolic --steps 3 --dt 0.1 --seed 2 --json");
  REQUIRE(rh.status == 0);
  const Json jhm = Json::parse(rh.out);
  CHECK_FALSE(jhm["all_causal"].get<bool>());
  CHECK(jhm["first_violation"].get<int>() == 0);
}

TEST_CASE("CLI selftest honestly reports failures under a broken profile") {
  const std::string prof_path = temp_file("profile");
  spit(prof_path, "{\"unit_circle_tol\": 1e-30}\n");
  const std::string log_path = temp_file("selftest_log");

  const CliResult r = run_cli("selftest --tol-profile " + prof_path +
                              " --log " + log_path + " --json");
  CHECK(r.status == 1);
  const Json log = Json::parse(slurp(log_path));
  std::filesystem::remove(prof_path);
  std::filesystem::remove(log_path);
  CHECK_FALSE(log["all_pass"].get<bool>());
  REQUIRE(log["results"].size() == 10);
  bool some_fail = false;
  for (const auto& item : log["results"]) {
    if (!item["pass"].get<bool>()) some_fail = true;
  }
  CHECK(some_fail);
}

#endif  // ELLIPTICA_CLI_PATH
