#pragma once

#include <stdexcept>
#include <string>

namespace hyperorbit {

// Exit codes used by the command line tool. Library code throws the
// exception types below; the tool maps them onto these codes.
enum class ExitCode : int {
  Ok = 0,
  Usage = 1,
  ValidationFailure = 2,
  Unsaturated = 3,
  ResourceCap = 4,
  NumericFailure = 5,
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsaturatedError : std::runtime_error {
  UnsaturatedError(const std::string& what, int radius)
      : std::runtime_error(what), failed_radius(radius) {}
  int failed_radius;
};

}  // namespace hyperorbit
