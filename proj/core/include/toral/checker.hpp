#pragma once

#include <string>
#include <vector>

#include "toral/constructions.hpp"

namespace toral {

/// Outcome of re-checking a certificate. The checker recomputes every claim
/// from the automorphism and the listed members with its own arithmetic
/// (cofactor inverse, cross-product covectors, direct iteration); it never
/// calls the producers.
struct VerificationResult {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string message) {
    ok = false;
    failures.push_back(std::move(message));
  }
};

VerificationResult verify(const DisjointFamilyCertificate& cert);
VerificationResult verify(const NonExpansivityCertificate& cert);
VerificationResult verify(const DistalityVerdict& verdict, const UnimodularMatrix& t);

}  // namespace toral
