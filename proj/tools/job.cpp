#include "job.hpp"

#include <algorithm>
#include <chrono>

#include "toral/errors.hpp"

namespace toral::cli {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw InputError(InputError::Kind::Malformed, what); }

const char* kind_name(InputError::Kind k) {
  switch (k) {
    case InputError::Kind::Malformed: return "malformed-input";
    case InputError::Kind::NotUnimodular: return "not-unimodular";
    case InputError::Kind::DimensionMismatch: return "dimension-mismatch";
    case InputError::Kind::NonCanonical: return "non-canonical";
    case InputError::Kind::UnsupportedVersion: return "unsupported-version";
    case InputError::Kind::Precondition: return "precondition";
  }
  return "invalid-input";
}

Subtorus subtorus_from_doc(const json& j) {
  if (!j.is_object()) malformed("subtorus must be an object");
  if (j.contains("covector")) {
    IntVector v = io::vector_from_json(j["covector"]);
    if (is_zero(v)) malformed("covector must be nonzero");
    return covector_to_hyperplane(PrimitiveCovector::canonical(std::move(v)));
  }
  if (j.contains("generators")) {
    const json& g = j["generators"];
    if (!g.is_array()) malformed("generators must be an array");
    std::size_t n = 0;
    if (j.contains("ambient_dim")) n = static_cast<std::size_t>(io::integer_from_json(j["ambient_dim"]).get_ui());
    std::vector<IntVector> rows;
    for (const auto& r : g) {
      rows.push_back(io::vector_from_json(r));
      if (n == 0) n = rows.back().size();
      if (rows.back().size() != n) throw InputError(InputError::Kind::DimensionMismatch, "generator length mismatch");
    }
    if (n == 0) malformed("generators need ambient_dim when empty");
    return subtorus_from_generators(rows, n);
  }
  return io::subtorus_from_json(j);
}

template <class T>
T positive(const json& j, const char* key) {
  Integer z = io::integer_from_json(j);
  if (z < 1 || !z.fits_slong_p()) throw InputError(InputError::Kind::Precondition, std::string(key) + " must be >= 1");
  return static_cast<T>(z.get_si());
}

json factors_json(const std::vector<Factor>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back({{"poly", f.poly.to_string()}, {"multiplicity", f.multiplicity}});
  return a;
}

const UnimodularMatrix& need_matrix(const JobSpec& job) {
  if (!job.matrix) malformed("command '" + job.command + "' needs a matrix");
  return *job.matrix;
}

const Subtorus& need_subtorus(const JobSpec& job) {
  if (!job.subtorus) malformed("command '" + job.command + "' needs a subtorus");
  return *job.subtorus;
}

struct Payload {
  json result;
  json consumed = json::object();
  int code = kOk;
};

Payload classify(const JobSpec& job) {
  const UnimodularMatrix& t = need_matrix(job);
  const std::size_t n = t.dim();
  Payload p;
  const DistalityVerdict v = acts_distally_on_subp(t);
  const IntPolynomial chi = char_poly(t);
  json& r = p.result;
  r["order"] = v.order ? io::to_json(*v.order) : json("infinite");
  r["distal_on_subp"] = v.distal;
  r["distal_linear"] = is_distal_linear(t);
  r["ergodic"] = is_ergodic(t);
  r["char_poly"] = chi.to_string();
  r["factors"] = factors_json(rational_factors(chi));
  r["witness"] = v.witness ? io::to_json(*v.witness) : json(nullptr);
  r["witness_covector"] = v.witness_covector ? io::to_json(*v.witness_covector) : json(nullptr);
  if (n >= 2) {
    const auto inv = invariant_rational_subspaces(t);
    json w = json::array();
    for (const auto& h : inv.witnesses) w.push_back(io::to_json(h));
    r["invariant_subspaces"] = {{"exists", inv.exists}, {"witnesses", w}};
    r["fixed_hyperplanes"] = io::to_json(fixed_subtori(t, n - 1, job.dual_norm_bound));
  }
  r["certificate"] = io::to_json(v, t);
  return p;
}

Payload orbit_cmd(const JobSpec& job) {
  const UnimodularMatrix& t = need_matrix(job);
  const Subtorus& h = need_subtorus(job);
  Payload p;
  const OrbitReport rep = orbit(t, h, job.window_radius);
  p.result["report"] = io::to_json(rep);
  p.result["periodic"] = rep.status == OrbitStatus::Periodic;
  if (h.dim() + 1 == h.ambient_dim()) {
    p.result["converges_to_full"] = converges_to_full(t, h);
    p.result["convergence_exact"] = true;
  } else {
    p.result["converges_to_full"] = converges_to_full_heuristic(t, h, job.window_radius);
    p.result["convergence_exact"] = false;
  }
  p.consumed["window_radius"] = job.window_radius;
  return p;
}

json family_consumed(const DisjointFamilyCertificate& c) {
  long max_w = 0;
  Integer max_sq = 0;
  for (std::size_t i = 0; i < c.family.size(); ++i) {
    max_w = std::max(max_w, c.reports[i].window_radius);
    max_sq = std::max(max_sq, norm_sq(c.covectors[i].values()));
  }
  return {{"members", c.family.size()}, {"max_window_used", max_w}, {"max_member_norm_sq", io::to_json(max_sq)}};
}

Payload family_cmd(const JobSpec& job) {
  Payload p;
  const auto cert = disjoint_hyperplane_orbits(need_matrix(job), job.count, job.budget);
  p.result = io::to_json(cert);
  p.consumed = family_consumed(cert);
  if (!cert.complete) p.code = kInconclusive;
  return p;
}

Payload nonexpansive_cmd(const JobSpec& job) {
  Payload p;
  NonExpansivityOptions opt;
  opt.orbit_count = job.count;
  opt.budget = job.budget;
  const auto cert = non_expansivity_certificate(need_matrix(job), opt);
  p.result = io::to_json(cert);
  if (cert.family) p.consumed = family_consumed(*cert.family);
  if (cert.branch == NonExpansivityCertificate::Branch::Inconclusive) p.code = kInconclusive;
  return p;
}

Payload distance_cmd(const JobSpec& job) {
  Subtorus a = need_subtorus(job);
  if (job.matrix && job.exponent != 0) a = act(job.matrix->pow(job.exponent), a);
  const Subtorus b = job.other ? *job.other : Subtorus::full(a.ambient_dim());
  Payload p;
  const MetricEstimate e = hausdorff_distance(a, b, job.resolution);
  p.result = io::to_json(e);
  p.result["from"] = io::to_json(a);
  p.result["to"] = io::to_json(b);
  p.result["upper_bound"] = e.value + e.error_bound;
  return p;
}

Payload isolation_cmd(const JobSpec& job) {
  Payload p;
  const IsolationReport r = isolation_radius_lower_bound(need_subtorus(job), job.dual_norm_bound, job.resolution);
  p.result = io::to_json(r);
  p.consumed["compared"] = r.compared;
  return p;
}

Payload group_cmd(const JobSpec& job) {
  std::vector<UnimodularMatrix> gens = job.matrices;
  if (gens.empty() && job.matrix) gens.push_back(*job.matrix);
  if (gens.empty()) malformed("group-finite needs matrices");
  Payload p;
  const GroupFiniteness g = group_is_finite(gens, job.group_cap);
  json& r = p.result;
  switch (g.kind) {
    case GroupFiniteness::Kind::Finite: {
      r["kind"] = "finite";
      r["order"] = g.order;
      json els = json::array();
      for (const auto& e : g.elements) els.push_back(io::to_json(e));
      r["elements"] = els;
      break;
    }
    case GroupFiniteness::Kind::Infinite:
      r["kind"] = "infinite";
      r["witness"] = io::to_json(*g.witness);
      break;
    case GroupFiniteness::Kind::Inconclusive:
      r["kind"] = "inconclusive";
      p.code = kInconclusive;
      break;
  }
  p.consumed["explored"] = g.explored;
  p.consumed["cap"] = job.group_cap;
  return p;
}

Payload verify_cmd(const JobSpec& job) {
  if (!job.certificate) malformed("verify needs a certificate");
  Payload p;
  const io::Certificate cert = io::certificate_from_json(*job.certificate);
  const VerificationResult v = io::verify_certificate(cert);
  p.result = io::to_json(v);
  p.result["certificate_type"] = (*job.certificate)["type"];
  if (!v.ok) p.code = kVerificationFailed;
  return p;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"classify", "orbit",     "disjoint-family", "certify-nonexpansive",
                                          "distance", "isolation", "group-finite",    "verify"};
  return c;
}

JobSpec parse_job(const json& doc) {
  if (!doc.is_object()) malformed("job must be a JSON object");
  JobSpec job;
  job.echo = doc;
  // A bare certificate is a verify job.
  if (!doc.contains("command") && doc.contains("type") && doc.contains("format_version")) {
    job.command = "verify";
    job.certificate = doc;
    return job;
  }
  if (!doc.contains("command") || !doc["command"].is_string()) malformed("missing field 'command'");
  job.command = doc["command"].get<std::string>();
  const auto& cs = commands();
  if (std::find(cs.begin(), cs.end(), job.command) == cs.end()) malformed("unknown command '" + job.command + "'");

  if (doc.contains("matrix")) job.matrix = io::unimodular_from_json(doc["matrix"]);
  if (doc.contains("matrices")) {
    if (!doc["matrices"].is_array()) malformed("matrices must be an array");
    for (const auto& m : doc["matrices"]) job.matrices.push_back(io::unimodular_from_json(m));
    for (const auto& m : job.matrices)
      if (m.dim() != job.matrices.front().dim())
        throw InputError(InputError::Kind::DimensionMismatch, "generators have different dimensions");
  }
  if (doc.contains("subtorus")) job.subtorus = subtorus_from_doc(doc["subtorus"]);
  if (doc.contains("other")) job.other = subtorus_from_doc(doc["other"]);
  if (job.matrix && job.subtorus && job.matrix->dim() != job.subtorus->ambient_dim())
    throw InputError(InputError::Kind::DimensionMismatch, "matrix and subtorus dimensions differ");
  if (job.subtorus && job.other && job.subtorus->ambient_dim() != job.other->ambient_dim())
    throw InputError(InputError::Kind::DimensionMismatch, "subtori live in different tori");
  if (doc.contains("exponent")) {
    Integer e = io::integer_from_json(doc["exponent"]);
    if (!e.fits_slong_p()) malformed("exponent out of range");
    job.exponent = e.get_si();
  }
  if (doc.contains("count")) job.count = positive<std::size_t>(doc["count"], "count");
  if (doc.contains("window_radius")) job.window_radius = positive<long>(doc["window_radius"], "window_radius");
  if (doc.contains("budget")) job.budget = io::budget_from_json(doc["budget"]);
  if (doc.contains("resolution")) {
    if (!doc["resolution"].is_number()) malformed("resolution must be a number");
    job.resolution = doc["resolution"].get<double>();
    if (!(job.resolution > 0)) throw InputError(InputError::Kind::Precondition, "resolution must be positive");
  }
  if (doc.contains("dual_norm_bound")) job.dual_norm_bound = positive<long>(doc["dual_norm_bound"], "dual_norm_bound");
  if (doc.contains("group_cap")) job.group_cap = positive<std::size_t>(doc["group_cap"], "group_cap");
  if (doc.contains("certificate")) job.certificate = doc["certificate"];
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) malformed("seed must be an integer");
    job.seed = doc["seed"].get<long long>();
  }
  return job;
}

RunOutcome run(const JobSpec& job) {
  RunOutcome out;
  json& env = out.envelope;
  env["tool"] = kToolName;
  env["version"] = kToolVersion;
  env["command"] = job.command;
  env["input"] = job.echo;
  env["budget"] = io::to_json(job.budget);
  const auto start = std::chrono::steady_clock::now();
  try {
    Payload p;
    if (job.command == "classify") p = classify(job);
    else if (job.command == "orbit") p = orbit_cmd(job);
    else if (job.command == "disjoint-family") p = family_cmd(job);
    else if (job.command == "certify-nonexpansive") p = nonexpansive_cmd(job);
    else if (job.command == "distance") p = distance_cmd(job);
    else if (job.command == "isolation") p = isolation_cmd(job);
    else if (job.command == "group-finite") p = group_cmd(job);
    else if (job.command == "verify") p = verify_cmd(job);
    else malformed("unknown command '" + job.command + "'");
    env["result"] = std::move(p.result);
    env["budget"]["consumed"] = std::move(p.consumed);
    out.exit_code = p.code;
  } catch (const InputError& e) {
    env["result"] = nullptr;
    env["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}};
    out.exit_code = kInvalidInput;
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  env["timing_ms"] = ms;
  env["status"] = out.exit_code == kOk                   ? "ok"
                  : out.exit_code == kInconclusive       ? "inconclusive"
                  : out.exit_code == kVerificationFailed ? "verification-failed"
                                                         : "invalid-input";
  return out;
}

RunOutcome run_document(const json& doc) {
  try {
    return run(parse_job(doc));
  } catch (const InputError& e) {
    RunOutcome out;
    out.envelope = {{"tool", kToolName},
                    {"version", kToolVersion},
                    {"command", doc.is_object() && doc.contains("command") ? doc["command"] : json(nullptr)},
                    {"input", doc},
                    {"result", nullptr},
                    {"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}}},
                    {"status", "invalid-input"},
                    {"timing_ms", 0.0}};
    out.exit_code = kInvalidInput;
    return out;
  }
}

json without_timing(json envelope) {
  envelope.erase("timing_ms");
  return envelope;
}

}  // namespace toral::cli
