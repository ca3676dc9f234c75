#pragma once

#include <stdexcept>
#include <string>

namespace ftspec {

/// Bad caller input: dimension mismatches, invalid parameters, malformed files.
/// The CLI maps this family to exit code 1.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degenerate numerics: zero denominators, non-finite intermediates.
/// The CLI maps this family to exit code 2.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ftspec
