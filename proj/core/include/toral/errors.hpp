#pragma once

#include <stdexcept>
#include <string>

namespace toral {

/// Raised for malformed or inconsistent caller input. The kind lets the CLI
/// map each failure to its own diagnostic.
class InputError : public std::runtime_error {
 public:
  enum class Kind { Malformed, NotUnimodular, DimensionMismatch, NonCanonical, UnsupportedVersion, Precondition };

  InputError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace toral
