#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "job.hpp"
#include "toral/errors.hpp"

using toral::cli::json;

namespace {

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw toral::InputError(toral::InputError::Kind::Malformed, "cannot read input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "2,1;1,1" or "2,1/1,1" -> [[2,1],[1,1]]
json parse_rows(std::string text) {
  std::replace(text.begin(), text.end(), '/', ';');
  json rows = json::array();
  std::stringstream outer(text);
  std::string row;
  while (std::getline(outer, row, ';')) {
    json r = json::array();
    std::stringstream inner(row);
    std::string cell;
    while (std::getline(inner, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      try {
        std::size_t used = 0;
        long long v = std::stoll(cell, &used);
        if (used == cell.size()) {
          r.push_back(v);
          continue;
        }
      } catch (const std::exception&) {
      }
      r.push_back(cell);
    }
    rows.push_back(r);
  }
  return rows;
}

struct Overrides {
  std::string input, output = "-", matrix, covector;
  long long budget_norm = 0, budget_window = 0, count = 0, window = 0, dual_norm = 0, seed = 0;
  double resolution = 0;
  bool has_seed = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toral automorphisms acting on subtori: classification, orbits and certificates"};
  app.require_subcommand(1);
  Overrides o;
  for (const auto& name : toral::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", o.input, "job or certificate JSON file, '-' for stdin");
    sub->add_option("--output", o.output, "where to write the report, '-' for stdout");
    sub->add_option("--matrix", o.matrix, "matrix rows, e.g. \"2,1;1,1\" or \"2,1/1,1\"");
    sub->add_option("--covector", o.covector, "hyperplane given by its covector, e.g. \"0,1\"");
    sub->add_option("--budget-norm", o.budget_norm, "covector norm cap for searches");
    sub->add_option("--budget-window", o.budget_window, "orbit window cap for searches");
    sub->add_option("--count", o.count, "number of family members");
    sub->add_option("--window", o.window, "orbit window radius");
    sub->add_option("--dual-norm-bound", o.dual_norm, "annihilator norm cap");
    sub->add_option("--resolution", o.resolution, "metric sampling resolution");
    sub->add_option("--seed", o.seed, "recorded in the report; results do not depend on it")
        ->each([&](const std::string&) { o.has_seed = true; });
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  toral::cli::RunOutcome outcome;
  try {
    json doc = json::object();
    if (!o.input.empty()) doc = toral::io::parse_text(read_all(o.input));
    if (!doc.is_object()) throw toral::InputError(toral::InputError::Kind::Malformed, "input must be a JSON object");
    // A whole report envelope from an earlier run: check the certificate in it.
    if (doc.contains("tool") && doc.contains("result") && doc["result"].is_object() && doc["result"].contains("type"))
      doc = json(doc["result"]);
    const bool bare_certificate = !doc.contains("command") && doc.contains("type");
    if (bare_certificate) {
      if (command != "verify")
        throw toral::InputError(toral::InputError::Kind::Malformed, "a certificate can only be passed to 'verify'");
      doc = json{{"command", "verify"}, {"certificate", doc}};
    }
    if (!doc.contains("command")) doc["command"] = command;
    if (doc["command"] != command)
      throw toral::InputError(toral::InputError::Kind::Malformed,
                              "input is a " + doc["command"].dump() + " job, not '" + command + "'");
    if (!o.matrix.empty()) doc["matrix"] = parse_rows(o.matrix);
    if (!o.covector.empty()) doc["subtorus"] = {{"covector", parse_rows(o.covector).at(0)}};
    if (o.budget_norm) doc["budget"]["max_norm"] = o.budget_norm;
    if (o.budget_window) doc["budget"]["max_window"] = o.budget_window;
    if (o.count) doc["count"] = o.count;
    if (o.window) doc["window_radius"] = o.window;
    if (o.dual_norm) doc["dual_norm_bound"] = o.dual_norm;
    if (o.resolution > 0) doc["resolution"] = o.resolution;
    if (o.has_seed) doc["seed"] = o.seed;
    outcome = toral::cli::run_document(doc);
  } catch (const toral::InputError& e) {
    std::cerr << "toral: invalid input: " << e.what() << "\n";
    return toral::cli::kInvalidInput;
  }

  const std::string text = toral::io::dump(outcome.envelope);
  if (o.output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) {
      std::cerr << "toral: cannot write '" << o.output << "'\n";
      return toral::cli::kInvalidInput;
    }
    out << text;
  }
  if (outcome.exit_code == toral::cli::kInvalidInput) {
    const auto& err = outcome.envelope["error"];
    std::cerr << "toral: invalid input (" << err["kind"].get<std::string>() << "): " << err["message"].get<std::string>()
              << "\n";
  } else if (outcome.exit_code == toral::cli::kInconclusive) {
    std::cerr << "toral: inconclusive within the given budget\n";
  } else if (outcome.exit_code == toral::cli::kVerificationFailed) {
    std::cerr << "toral: verification failed\n";
    for (const auto& f : outcome.envelope["result"]["failures"]) std::cerr << "  " << f.get<std::string>() << "\n";
  }
  return outcome.exit_code;
}
