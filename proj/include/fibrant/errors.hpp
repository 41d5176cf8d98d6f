#pragma once

#include <stdexcept>
#include <string>

namespace fibrant {

/// Malformed data: bad cell references, broken invariants of the encoding.
/// Distinct from a Fails verdict, which is a valid mathematical refutation.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& m) : std::runtime_error(m) {}
};

/// Invalid parameters for a construction (out-of-range horn index etc).
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& m) : std::runtime_error(m) {}
};

/// A computation was refused because the stored truncation cannot support a
/// sound answer. Carries the bound that would be required.
struct RefusalError : std::runtime_error {
  std::string required;
  RefusalError(const std::string& m, std::string req)
      : std::runtime_error(m + " (required bound: " + req + ")"), required(std::move(req)) {}
};

struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace fibrant
