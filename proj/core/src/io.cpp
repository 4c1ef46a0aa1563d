#include "toral/io.hpp"

#include <cmath>
#include <limits>
#include <regex>

#include "toral/errors.hpp"

namespace toral::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw InputError(InputError::Kind::Malformed, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

const json* optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

const json& array_field(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) malformed(std::string("field '") + key + "' must be an array");
  return a;
}

std::string string_field(const json& j, const char* key) {
  const json& s = field(j, key);
  if (!s.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return s.get<std::string>();
}

bool bool_field(const json& j, const char* key) {
  const json& b = field(j, key);
  if (!b.is_boolean()) malformed(std::string("field '") + key + "' must be a boolean");
  return b.get<bool>();
}

long long small_int(const json& j, const char* what) {
  Integer z = integer_from_json(j);
  if (!z.fits_slong_p()) malformed(std::string(what) + " out of range");
  return z.get_si();
}

std::size_t count_field(const json& j, const char* key) {
  long long v = small_int(field(j, key), key);
  if (v < 0) malformed(std::string("field '") + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

double double_or_inf(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) malformed("expected a number");
  return j.get<double>();
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void check_version(const json& j, const char* type) {
  if (string_field(j, "type") != type) malformed(std::string("expected certificate type '") + type + "'");
  const json& v = field(j, "format_version");
  if (!v.is_number_integer() || v.get<long long>() != kFormatVersion)
    throw InputError(InputError::Kind::UnsupportedVersion, "unsupported format_version " + v.dump());
}

void require_dim(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want)
    throw InputError(InputError::Kind::DimensionMismatch,
                     what + " has dimension " + std::to_string(got) + ", expected " + std::to_string(want));
}

const char* status_name(OrbitStatus s) { return s == OrbitStatus::Periodic ? "periodic" : "injective"; }

FamilyBranch branch_from(const std::string& s) {
  for (auto b : {FamilyBranch::FiniteOrder, FamilyBranch::Distal, FamilyBranch::Reducible, FamilyBranch::Irreducible})
    if (s == to_string(b)) return b;
  malformed("unknown family branch '" + s + "'");
}

PairEvidence::Kind kind_from(const std::string& s) {
  using K = PairEvidence::Kind;
  for (auto k : {K::Periodic, K::Invariant, K::Growth, K::WindowOnly})
    if (s == to_string(k)) return k;
  malformed("unknown evidence kind '" + s + "'");
}

NonExpansivityCertificate::Branch ne_branch_from(const std::string& s) {
  using B = NonExpansivityCertificate::Branch;
  for (auto b : {B::FiniteOrder, B::InfinitelyManyOrbits, B::Inconclusive})
    if (s == to_string(b)) return b;
  malformed("unknown branch '" + s + "'");
}

}  // namespace

json to_json(const Integer& z) {
  if (z.fits_slong_p()) return json(static_cast<long long>(z.get_si()));
  return json(z.get_str());
}

json to_json(const Rational& q) { return json(q.get_str()); }

json to_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

json to_json(const IntMatrix& m) {
  json a = json::array();
  for (const auto& r : m.row_vectors()) a.push_back(to_json(r));
  return a;
}

json to_json(const UnimodularMatrix& t) { return to_json(t.matrix()); }

json to_json(const Lattice& l) {
  json basis = json::array();
  for (const auto& r : l.basis()) basis.push_back(to_json(r));
  return {{"ambient_dim", l.ambient_dim()}, {"basis", basis}};
}

json to_json(const Subtorus& h) { return to_json(h.lattice()); }

json to_json(const PrimitiveCovector& g) { return to_json(g.values()); }

json to_json(const GrowthCertificate& c) {
  if (const auto* lin = std::get_if<LinearCertificate>(&c))
    return {{"type", "linear"}, {"functional", to_json(lin->functional)}, {"sign", lin->sign}};
  const auto& ly = std::get<LyapunovCertificate>(c);
  json form = json::array();
  for (const auto& row : ly.form) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_json(x));
    form.push_back(r);
  }
  return {{"type", "cone"},
          {"direction", ly.direction == Direction::Forward ? "forward" : "backward"},
          {"mu", to_json(ly.mu)},
          {"form", form}};
}

json to_json(const OrbitReport& r) {
  json window = json::array();
  for (const auto& e : r.window) window.push_back({{"exponent", e.exponent}, {"subtorus", to_json(e.subtorus)}});
  json growth = json::array();
  for (const auto& g : r.growth) growth.push_back(to_json(g));
  return {{"status", status_name(r.status)},
          {"period", to_json(r.period)},
          {"window_radius", r.window_radius},
          {"window", window},
          {"min_exterior_norm_sq", r.min_exterior_norm_sq ? to_json(*r.min_exterior_norm_sq) : json(nullptr)},
          {"growth", growth}};
}

json to_json(const PairEvidence& e) {
  json j = {{"first", e.first}, {"second", e.second}, {"kind", to_string(e.kind)}};
  if (e.kind == PairEvidence::Kind::Invariant) {
    j["functional"] = to_json(e.functional);
    j["power"] = to_json(e.power);
  }
  return j;
}

json to_json(const Budget& b) {
  return {{"max_norm", to_json(b.max_norm)},
          {"max_window", b.max_window},
          {"max_candidates", b.max_candidates},
          {"allow_unverified", b.allow_unverified}};
}

json to_json(const MetricEstimate& e) {
  return {{"value", e.value}, {"error_bound", e.error_bound}, {"resolution", e.resolution}};
}

json to_json(const IsolationReport& r) {
  return {{"subtorus", to_json(r.subtorus)},
          {"dual_norm_bound", to_json(r.dual_norm_bound)},
          {"resolution", r.resolution},
          {"lower_bound", finite_or_null(r.lower_bound)},
          {"max_error", r.max_error},
          {"compared", r.compared},
          {"nearest", r.nearest ? to_json(*r.nearest) : json(nullptr)}};
}

json to_json(const FixedSubtori& f) {
  json members = json::array();
  for (const auto& h : f.members) members.push_back(to_json(h));
  return {{"members", members}, {"complete", f.complete}, {"infinite", f.infinite}};
}

json to_json(const VerificationResult& v) { return {{"ok", v.ok}, {"failures", v.failures}}; }

json to_json(const DisjointFamilyCertificate& c) {
  json members = json::array();
  for (std::size_t i = 0; i < c.family.size(); ++i)
    members.push_back(
        {{"subtorus", to_json(c.family[i])}, {"covector", to_json(c.covectors[i])}, {"orbit", to_json(c.reports[i])}});
  json pairs = json::array();
  for (const auto& p : c.pairs) pairs.push_back(to_json(p));
  return {{"type", "disjoint_family"},
          {"format_version", kFormatVersion},
          {"automorphism", to_json(c.automorphism)},
          {"requested", c.requested},
          {"branch", to_string(c.branch)},
          {"members", members},
          {"pairs", pairs},
          {"unipotent_power", to_json(c.unipotent_power)},
          {"induction_lattice", c.induction_lattice ? to_json(*c.induction_lattice) : json(nullptr)},
          {"complete", c.complete},
          {"rigorous", c.rigorous},
          {"note", c.note}};
}

json to_json(const NonExpansivityCertificate& c) {
  json fixed = json::array();
  for (const auto& h : c.fixed) fixed.push_back(to_json(h));
  return {{"type", "non_expansivity"},
          {"format_version", kFormatVersion},
          {"automorphism", to_json(c.automorphism)},
          {"branch", to_string(c.branch)},
          {"order", to_json(c.order)},
          {"fixed", fixed},
          {"family", c.family ? to_json(*c.family) : json(nullptr)},
          {"converges", c.converges},
          {"isolation", c.isolation ? to_json(*c.isolation) : json(nullptr)},
          {"refuted_orbit_bound", c.refuted_orbit_bound},
          {"note", c.note}};
}

json to_json(const DistalityVerdict& v, const UnimodularMatrix& t) {
  return {{"type", "distality_verdict"},
          {"format_version", kFormatVersion},
          {"automorphism", to_json(t)},
          {"distal", v.distal},
          {"order", v.order ? to_json(*v.order) : json(nullptr)},
          {"witness", v.witness ? to_json(*v.witness) : json(nullptr)},
          {"witness_covector", v.witness_covector ? to_json(*v.witness_covector) : json(nullptr)},
          {"witness_converges", v.witness_converges}};
}

Integer integer_from_json(const json& j) {
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    static const std::regex re("-?[0-9]+");
    const auto s = j.get<std::string>();
    if (!std::regex_match(s, re)) malformed("'" + s + "' is not an integer");
    return Integer(s);
  }
  malformed("expected an exact integer, got " + j.dump());
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (!j.is_string()) malformed("expected a rational string, got " + j.dump());
  static const std::regex re("-?[0-9]+(/[0-9]+)?");
  const auto s = j.get<std::string>();
  if (!std::regex_match(s, re)) malformed("'" + s + "' is not a rational");
  Rational q(s);
  if (q.get_den() == 0) malformed("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

IntVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) malformed("expected a non-empty integer array");
  IntVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  return v;
}

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) malformed("matrix must be a non-empty array of rows");
  std::vector<IntVector> rows;
  for (const auto& r : j) {
    rows.push_back(vector_from_json(r));
    if (rows.back().size() != rows.front().size())
      throw InputError(InputError::Kind::DimensionMismatch, "matrix rows have different lengths");
  }
  return IntMatrix::from_rows(rows);
}

UnimodularMatrix unimodular_from_json(const json& j) { return UnimodularMatrix(matrix_from_json(j)); }

Lattice lattice_from_json(const json& j) {
  const std::size_t n = count_field(j, "ambient_dim");
  if (n < 1) malformed("ambient_dim must be >= 1");
  std::vector<IntVector> basis;
  for (const auto& r : array_field(j, "basis")) {
    basis.push_back(vector_from_json(r));
    require_dim(basis.back().size(), n, "lattice basis row");
  }
  return Lattice::from_canonical(n, std::move(basis));
}

Subtorus subtorus_from_json(const json& j) { return Subtorus(lattice_from_json(j)); }

PrimitiveCovector covector_from_json(const json& j) {
  IntVector v = vector_from_json(j);
  if (PrimitiveCovector::canonical(v).values() != v)
    throw InputError(InputError::Kind::NonCanonical, "non-canonical covector " + to_string(v));
  return PrimitiveCovector(std::move(v));
}

GrowthCertificate growth_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  if (type == "linear") {
    LinearCertificate c;
    c.functional = vector_from_json(field(j, "functional"));
    c.sign = static_cast<int>(small_int(field(j, "sign"), "sign"));
    return c;
  }
  if (type != "cone") malformed("unknown growth certificate type '" + type + "'");
  LyapunovCertificate c;
  const std::string dir = string_field(j, "direction");
  if (dir != "forward" && dir != "backward") malformed("unknown direction '" + dir + "'");
  c.direction = dir == "forward" ? Direction::Forward : Direction::Backward;
  c.mu = rational_from_json(field(j, "mu"));
  for (const auto& row : array_field(j, "form")) {
    if (!row.is_array()) malformed("cone form rows must be arrays");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    c.form.push_back(std::move(r));
  }
  return c;
}

OrbitReport orbit_report_from_json(const json& j) {
  OrbitReport r;
  const std::string status = string_field(j, "status");
  if (status != "periodic" && status != "injective") malformed("unknown orbit status '" + status + "'");
  r.status = status == "periodic" ? OrbitStatus::Periodic : OrbitStatus::Injective;
  r.period = integer_from_json(field(j, "period"));
  r.window_radius = static_cast<long>(small_int(field(j, "window_radius"), "window_radius"));
  for (const auto& e : array_field(j, "window"))
    r.window.push_back({static_cast<long>(small_int(field(e, "exponent"), "exponent")),
                        subtorus_from_json(field(e, "subtorus"))});
  if (const json* b = optional_field(j, "min_exterior_norm_sq")) r.min_exterior_norm_sq = rational_from_json(*b);
  for (const auto& g : array_field(j, "growth")) r.growth.push_back(growth_from_json(g));
  return r;
}

PairEvidence pair_from_json(const json& j) {
  PairEvidence e;
  e.first = count_field(j, "first");
  e.second = count_field(j, "second");
  e.kind = kind_from(string_field(j, "kind"));
  if (e.kind == PairEvidence::Kind::Invariant) {
    e.functional = vector_from_json(field(j, "functional"));
    e.power = integer_from_json(field(j, "power"));
  }
  return e;
}

Budget budget_from_json(const json& j) {
  Budget b;
  if (!j.is_object()) malformed("budget must be an object");
  if (const json* x = optional_field(j, "max_norm")) b.max_norm = integer_from_json(*x);
  if (const json* x = optional_field(j, "max_window")) b.max_window = static_cast<long>(small_int(*x, "max_window"));
  if (const json* x = optional_field(j, "max_candidates"))
    b.max_candidates = static_cast<std::size_t>(small_int(*x, "max_candidates"));
  if (const json* x = optional_field(j, "allow_unverified")) {
    if (!x->is_boolean()) malformed("allow_unverified must be a boolean");
    b.allow_unverified = x->get<bool>();
  }
  if (b.max_norm < 1 || b.max_window < 1 || b.max_candidates < 1)
    throw InputError(InputError::Kind::Precondition, "budget limits must be positive");
  return b;
}

IsolationReport isolation_from_json(const json& j) {
  IsolationReport r{subtorus_from_json(field(j, "subtorus")), integer_from_json(field(j, "dual_norm_bound")),
                    double_or_inf(field(j, "resolution")), double_or_inf(field(j, "lower_bound")),
                    double_or_inf(field(j, "max_error")), count_field(j, "compared"), std::nullopt};
  if (const json* h = optional_field(j, "nearest")) r.nearest = subtorus_from_json(*h);
  return r;
}

DisjointFamilyCertificate family_from_json(const json& j) {
  check_version(j, "disjoint_family");
  DisjointFamilyCertificate c;
  c.automorphism = unimodular_from_json(field(j, "automorphism"));
  const std::size_t n = c.automorphism.dim();
  c.requested = count_field(j, "requested");
  c.branch = branch_from(string_field(j, "branch"));
  for (const auto& m : array_field(j, "members")) {
    c.family.push_back(subtorus_from_json(field(m, "subtorus")));
    c.covectors.push_back(covector_from_json(field(m, "covector")));
    c.reports.push_back(orbit_report_from_json(field(m, "orbit")));
    require_dim(c.family.back().ambient_dim(), n, "family member");
    require_dim(c.covectors.back().ambient_dim(), n, "member covector");
    for (const auto& e : c.reports.back().window) require_dim(e.subtorus.ambient_dim(), n, "orbit window entry");
  }
  for (const auto& p : array_field(j, "pairs")) {
    c.pairs.push_back(pair_from_json(p));
    if (c.pairs.back().kind == PairEvidence::Kind::Invariant)
      require_dim(c.pairs.back().functional.size(), n, "invariant functional");
  }
  c.unipotent_power = integer_from_json(field(j, "unipotent_power"));
  if (const json* l = optional_field(j, "induction_lattice")) {
    c.induction_lattice = lattice_from_json(*l);
    require_dim(c.induction_lattice->ambient_dim(), n, "induction lattice");
  }
  c.complete = bool_field(j, "complete");
  c.rigorous = bool_field(j, "rigorous");
  c.note = string_field(j, "note");
  return c;
}

NonExpansivityCertificate nonexpansivity_from_json(const json& j) {
  check_version(j, "non_expansivity");
  NonExpansivityCertificate c;
  c.automorphism = unimodular_from_json(field(j, "automorphism"));
  const std::size_t n = c.automorphism.dim();
  c.branch = ne_branch_from(string_field(j, "branch"));
  c.order = integer_from_json(field(j, "order"));
  for (const auto& h : array_field(j, "fixed")) {
    c.fixed.push_back(subtorus_from_json(h));
    require_dim(c.fixed.back().ambient_dim(), n, "fixed subtorus");
  }
  if (const json* f = optional_field(j, "family")) {
    c.family = family_from_json(*f);
    require_dim(c.family->automorphism.dim(), n, "family automorphism");
  }
  for (const auto& b : array_field(j, "converges")) {
    if (!b.is_boolean()) malformed("converges entries must be booleans");
    c.converges.push_back(b.get<bool>());
  }
  if (const json* iso = optional_field(j, "isolation")) c.isolation = isolation_from_json(*iso);
  c.refuted_orbit_bound = count_field(j, "refuted_orbit_bound");
  c.note = string_field(j, "note");
  return c;
}

DistalityCertificate distality_from_json(const json& j) {
  check_version(j, "distality_verdict");
  DistalityCertificate c{unimodular_from_json(field(j, "automorphism")), {}};
  const std::size_t n = c.automorphism.dim();
  c.verdict.distal = bool_field(j, "distal");
  if (const json* o = optional_field(j, "order")) c.verdict.order = integer_from_json(*o);
  if (const json* w = optional_field(j, "witness")) {
    c.verdict.witness = subtorus_from_json(*w);
    require_dim(c.verdict.witness->ambient_dim(), n, "witness");
  }
  if (const json* w = optional_field(j, "witness_covector")) {
    c.verdict.witness_covector = covector_from_json(*w);
    require_dim(c.verdict.witness_covector->ambient_dim(), n, "witness covector");
  }
  c.verdict.witness_converges = bool_field(j, "witness_converges");
  return c;
}

Certificate certificate_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  if (type == "disjoint_family") return family_from_json(j);
  if (type == "non_expansivity") return nonexpansivity_from_json(j);
  if (type == "distality_verdict") return distality_from_json(j);
  malformed("unknown certificate type '" + type + "'");
}

VerificationResult verify_certificate(const Certificate& c) {
  return std::visit(
      [](const auto& x) -> VerificationResult {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, DistalityCertificate>)
          return verify(x.verdict, x.automorphism);
        else
          return verify(x);
      },
      c);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace toral::io
