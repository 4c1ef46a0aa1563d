#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toral/io.hpp"

namespace toral::cli {

using io::json;

inline constexpr const char* kToolName = "toral";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kInconclusive = 3, kVerificationFailed = 4 };

const std::vector<std::string>& commands();

/// A validated job. Built from the JSON job document; matrices are checked
/// for unimodularity and dimensions before anything runs.
struct JobSpec {
  std::string command;
  std::optional<UnimodularMatrix> matrix;
  std::vector<UnimodularMatrix> matrices;
  std::optional<Subtorus> subtorus;
  std::optional<Subtorus> other;
  long exponent = 0;
  std::size_t count = 10;
  long window_radius = 10;
  Budget budget;
  double resolution = 0.01;
  Integer dual_norm_bound = 5;
  std::size_t group_cap = 10000;
  std::optional<json> certificate;
  std::optional<long long> seed;
  json echo;  // the job document as given
};

/// Field reference (all optional unless the command needs them):
///   command, matrix, matrices, subtorus, other, exponent, count,
///   window_radius, budget {max_norm, max_window, max_candidates,
///   allow_unverified}, resolution, dual_norm_bound, group_cap,
///   certificate, seed.
/// A subtorus is {"ambient_dim", "basis"} with a canonical basis,
/// {"generators": [...]} to have it canonicalised, or {"covector": [...]}
/// for a hyperplane.
JobSpec parse_job(const json& doc);

struct RunOutcome {
  json envelope;
  int exit_code = kOk;
};

/// Runs a job and wraps the payload in the report envelope. Never throws for
/// bad input: InputError becomes exit code 2 with a diagnostic.
RunOutcome run(const JobSpec& job);
RunOutcome run_document(const json& doc);

/// The envelope without timing, for determinism comparisons.
json without_timing(json envelope);

}  // namespace toral::cli
