#include <fstream>
#include <sstream>

#include "doctest.h"
#include "job.hpp"
#include "support/generators.hpp"
#include "support/tamper.hpp"
#include "toral/errors.hpp"
#include "toral/io.hpp"

using namespace toral;
using io::json;

namespace {

const UnimodularMatrix kCat{{2, 1}, {1, 1}};
const UnimodularMatrix kShear{{1, 1}, {0, 1}};
const UnimodularMatrix kRotation{{0, -1}, {1, 0}};
const UnimodularMatrix kCompanion{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
const UnimodularMatrix kMixed{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};

InputError::Kind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.kind();
  }
  FAIL("no InputError thrown");
  return InputError::Kind::Malformed;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

json job(const std::string& command, const UnimodularMatrix& t) {
  return {{"command", command}, {"matrix", io::to_json(t)}};
}

}  // namespace

TEST_CASE("scalars") {
  CHECK(io::to_json(Integer(-7)) == json(-7));
  const Integer big = Integer(1) << 80;
  CHECK(io::to_json(big) == json("1208925819614629174706176"));
  CHECK(io::integer_from_json(io::to_json(big)) == big);
  CHECK(io::integer_from_json(json("-12")) == -12);
  Rational q(-6, 4);
  q.canonicalize();
  CHECK(io::to_json(q) == json("-3/2"));
  CHECK(io::rational_from_json(json("-3/2")) == q);
  CHECK(io::rational_from_json(json(5)) == 5);
  CHECK(kind_of([] { io::integer_from_json(json("12x")); }) == InputError::Kind::Malformed);
  CHECK(kind_of([] { io::integer_from_json(json(1.5)); }) == InputError::Kind::Malformed);
}

TEST_CASE("subtorus round trip") {
  gen::Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const Subtorus h = gen::random_subtorus(rng, 1 + rng.index(5));
    CHECK(io::subtorus_from_json(io::to_json(h)) == h);
    CHECK(io::subtorus_from_json(io::parse_text(io::dump(io::to_json(h)))) == h);
  }
}

TEST_CASE("non-canonical input is rejected") {
  const json bad = {{"ambient_dim", 2}, {"basis", {{2, 0}, {1, 1}}}};
  CHECK(kind_of([&] { io::subtorus_from_json(bad); }) == InputError::Kind::NonCanonical);
  CHECK(message_of([&] { io::subtorus_from_json(bad); }).find("non-canonical basis") != std::string::npos);
  const json unsaturated = {{"ambient_dim", 2}, {"basis", {{2, 0}}}};
  CHECK(kind_of([&] { io::subtorus_from_json(unsaturated); }) == InputError::Kind::NonCanonical);
  CHECK(kind_of([] { io::covector_from_json(json{-1, 2}); }) == InputError::Kind::NonCanonical);
  CHECK(kind_of([] { io::unimodular_from_json(json{{2, 0}, {0, 1}}); }) == InputError::Kind::NotUnimodular);
  CHECK(kind_of([] { io::unimodular_from_json(json::array({json{1, 0}})); }) == InputError::Kind::DimensionMismatch);
  CHECK(kind_of([] { io::unimodular_from_json(json("x")); }) == InputError::Kind::Malformed);
  CHECK(kind_of([] { io::parse_text("{\"a\": "); }) == InputError::Kind::Malformed);
}

TEST_CASE("format version is enforced") {
  json j = io::to_json(disjoint_hyperplane_orbits(kShear, 3));
  CHECK(j["format_version"] == io::kFormatVersion);
  j["format_version"] = 2;
  CHECK(kind_of([&] { io::certificate_from_json(j); }) == InputError::Kind::UnsupportedVersion);
  j.erase("format_version");
  CHECK(kind_of([&] { io::certificate_from_json(j); }) == InputError::Kind::Malformed);
  json unknown = io::to_json(disjoint_hyperplane_orbits(kShear, 3));
  unknown["type"] = "something_else";
  CHECK(kind_of([&] { io::certificate_from_json(unknown); }) == InputError::Kind::Malformed);
}

TEST_CASE("certificates survive a round trip") {
  for (const auto& t : {kCat, kShear, kCompanion, kMixed, kRotation}) {
    const auto fam = disjoint_hyperplane_orbits(t, 5);
    const json j = io::to_json(fam);
    CHECK(io::family_from_json(io::parse_text(io::dump(j))) == fam);
    const auto cert = io::certificate_from_json(j);
    CHECK(std::holds_alternative<DisjointFamilyCertificate>(cert));
    CHECK(io::verify_certificate(cert).ok);

    const auto ne = non_expansivity_certificate(t);
    const json nj = io::to_json(ne);
    CHECK(io::dump(io::to_json(io::nonexpansivity_from_json(nj))) == io::dump(nj));
    CHECK(io::verify_certificate(io::certificate_from_json(nj)).ok);

    const auto dv = acts_distally_on_subp(t);
    const json dj = io::to_json(dv, t);
    const auto back = io::distality_from_json(dj);
    CHECK(back.verdict == dv);
    CHECK(back.automorphism == t);
    CHECK(io::verify_certificate(io::certificate_from_json(dj)).ok);
  }
}

TEST_CASE("tampered certificates fail after a round trip") {
  const auto fam = disjoint_hyperplane_orbits(kCompanion, 4);
  for (const auto& [name, bad] : tamper::family_variants(fam)) {
    CAPTURE(name);
    CHECK_FALSE(io::verify_certificate(io::certificate_from_json(io::to_json(bad))).ok);
  }
}

TEST_CASE("golden certificate") {
  std::ifstream in(std::string(TORAL_GOLDEN_DIR) + "/rotation_nonexpansivity.json");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(io::dump(io::to_json(non_expansivity_certificate(kRotation))) == ss.str());
}

TEST_CASE("classify job") {
  const auto out = cli::run_document(job("classify", kCat));
  CHECK(out.exit_code == cli::kOk);
  const json& r = out.envelope["result"];
  CHECK(r["order"] == "infinite");
  CHECK(r["distal_on_subp"] == false);
  CHECK(r["ergodic"] == true);
  CHECK(r["witness_covector"] == json{0, 1});
  CHECK(out.envelope["status"] == "ok");
  CHECK(out.envelope["tool"] == "toral");

  const auto rot = cli::run_document(job("classify", kRotation));
  CHECK(rot.envelope["result"]["order"] == 4);
  CHECK(rot.envelope["result"]["distal_on_subp"] == true);
}

TEST_CASE("exit codes") {
  CHECK(cli::run_document({{"command", "classify"}, {"matrix", {{2, 0}, {0, 1}}}}).exit_code == cli::kInvalidInput);
  const auto bad = cli::run_document({{"command", "classify"}, {"matrix", {{2, 0}, {0, 1}}}});
  CHECK(bad.envelope["error"]["kind"] == "not-unimodular");
  CHECK(cli::run_document({{"command", "nonsense"}}).exit_code == cli::kInvalidInput);
  CHECK(cli::run_document({{"command", "classify"}}).exit_code == cli::kInvalidInput);
  json mismatch = job("orbit", kCat);
  mismatch["subtorus"] = {{"covector", {1, 0, 0}}};
  CHECK(cli::run_document(mismatch).exit_code == cli::kInvalidInput);

  json tight = job("disjoint-family", kCompanion);
  tight["budget"] = {{"max_norm", 4}, {"max_window", 2}};
  const auto inc = cli::run_document(tight);
  CHECK(inc.exit_code == cli::kInconclusive);
  CHECK(inc.envelope["status"] == "inconclusive");

  json ne = job("certify-nonexpansive", kCompanion);
  ne["budget"] = {{"max_norm", 4}, {"max_window", 2}};
  CHECK(cli::run_document(ne).exit_code == cli::kInconclusive);

  auto fam = disjoint_hyperplane_orbits(kCat, 4);
  fam.pairs.pop_back();
  const auto failed = cli::run_document({{"command", "verify"}, {"certificate", io::to_json(fam)}});
  CHECK(failed.exit_code == cli::kVerificationFailed);
  CHECK_FALSE(failed.envelope["result"]["failures"].empty());
}

TEST_CASE("every command runs") {
  json orbit = job("orbit", kCat);
  orbit["subtorus"] = {{"covector", {1, 0}}};
  orbit["window_radius"] = 3;
  auto o = cli::run_document(orbit);
  CHECK(o.exit_code == cli::kOk);
  CHECK(o.envelope["result"]["converges_to_full"] == true);

  json dist = job("distance", kCat);
  dist["subtorus"] = {{"covector", {0, 1}}};
  dist["exponent"] = 2;
  dist["resolution"] = 0.005;
  auto d = cli::run_document(dist);
  CHECK(d.exit_code == cli::kOk);
  CHECK(d.envelope["result"]["upper_bound"].get<double>() < 0.1);

  json iso = {{"command", "isolation"}, {"subtorus", {{"covector", {0, 1}}}}, {"dual_norm_bound", 3}};
  auto i = cli::run_document(iso);
  CHECK(i.exit_code == cli::kOk);

  json grp = {{"command", "group-finite"}, {"matrices", {io::to_json(kRotation), json{{0, 1}, {1, 0}}}}};
  auto g = cli::run_document(grp);
  CHECK(g.envelope["result"]["kind"] == "finite");
  CHECK(g.envelope["result"]["order"] == 8);
}

TEST_CASE("reports are deterministic and self-verifying") {
  for (const auto& command : {"classify", "disjoint-family", "certify-nonexpansive"})
    for (const auto& t : {kCat, kShear, kCompanion}) {
      json doc = job(command, t);
      doc["count"] = 5;
      const auto a = cli::run_document(doc);
      const auto b = cli::run_document(doc);
      CHECK(io::dump(cli::without_timing(a.envelope)) == io::dump(cli::without_timing(b.envelope)));
      const json cert = std::string(command) == "classify" ? a.envelope["result"]["certificate"] : a.envelope["result"];
      const auto v = cli::run_document({{"command", "verify"}, {"certificate", cert}});
      CHECK(v.exit_code == cli::kOk);
      // A bare certificate is a verify job too.
      CHECK(cli::run_document(cert).exit_code == cli::kOk);
    }
}

TEST_CASE("seed is recorded but does not change results") {
  json a = job("disjoint-family", kCat);
  json b = a;
  a["seed"] = 1;
  b["seed"] = 99;
  const auto ra = cli::run_document(a), rb = cli::run_document(b);
  CHECK(ra.envelope["result"] == rb.envelope["result"]);
  CHECK(ra.envelope["input"]["seed"] == 1);
}
