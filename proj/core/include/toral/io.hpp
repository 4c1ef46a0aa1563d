#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "toral/checker.hpp"
#include "toral/constructions.hpp"

namespace toral::io {

using json = nlohmann::json;

/// Written into every certificate; parse rejects anything else.
inline constexpr int kFormatVersion = 1;

// Integers are JSON numbers when they fit in 64 bits and decimal strings
// otherwise. Rationals are "p/q" strings (or "p" when integral).
json to_json(const Integer& z);
json to_json(const Rational& q);
json to_json(const IntVector& v);
json to_json(const IntMatrix& m);
json to_json(const UnimodularMatrix& t);
json to_json(const Lattice& l);
json to_json(const Subtorus& h);
json to_json(const PrimitiveCovector& g);
json to_json(const GrowthCertificate& c);
json to_json(const OrbitReport& r);
json to_json(const PairEvidence& e);
json to_json(const Budget& b);
json to_json(const IsolationReport& r);
json to_json(const MetricEstimate& e);
json to_json(const FixedSubtori& f);
json to_json(const VerificationResult& v);

json to_json(const DisjointFamilyCertificate& c);
json to_json(const NonExpansivityCertificate& c);
/// A distality verdict packaged with its automorphism as a certificate.
json to_json(const DistalityVerdict& v, const UnimodularMatrix& t);

// Parsers throw InputError: Malformed for shape errors, NotUnimodular,
// NonCanonical ("non-canonical basis") and UnsupportedVersion.
Integer integer_from_json(const json& j);
Rational rational_from_json(const json& j);
IntVector vector_from_json(const json& j);
IntMatrix matrix_from_json(const json& j);
UnimodularMatrix unimodular_from_json(const json& j);
Lattice lattice_from_json(const json& j);
Subtorus subtorus_from_json(const json& j);
PrimitiveCovector covector_from_json(const json& j);
GrowthCertificate growth_from_json(const json& j);
OrbitReport orbit_report_from_json(const json& j);
PairEvidence pair_from_json(const json& j);
Budget budget_from_json(const json& j);
IsolationReport isolation_from_json(const json& j);

DisjointFamilyCertificate family_from_json(const json& j);
NonExpansivityCertificate nonexpansivity_from_json(const json& j);

struct DistalityCertificate {
  UnimodularMatrix automorphism;
  DistalityVerdict verdict;
};
DistalityCertificate distality_from_json(const json& j);

using Certificate = std::variant<DisjointFamilyCertificate, NonExpansivityCertificate, DistalityCertificate>;
/// Dispatches on the "type" tag.
Certificate certificate_from_json(const json& j);
VerificationResult verify_certificate(const Certificate& c);

/// Parses text, mapping JSON syntax errors to InputError(Malformed).
json parse_text(const std::string& text);
/// Stable pretty form: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace toral::io
