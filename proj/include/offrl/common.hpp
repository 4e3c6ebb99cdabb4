#pragma once

#include <stdexcept>
#include <string>

namespace offrl {

// Thrown when an input (file, argument, tensor) violates a documented
// invariant. The message names the offending path or entry.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Row-stochasticity slack for single-pass constructions.
constexpr double kProbTol = 1e-12;
// Forward recursions (occupancies) accumulate more rounding.
constexpr double kOccupancyTol = 1e-10;

}  // namespace offrl
