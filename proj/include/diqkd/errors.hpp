#pragma once

#include <stdexcept>
#include <string>

namespace diqkd {

// Argument outside the mathematical domain of an operation (p < 1/2, v > 1, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Party count or table size mismatch.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A correlation model or correlator table is missing a setting vector.
class incomplete_model_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration requested beyond its configured cap.
class enumeration_cap_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root finding failed to bracket or to converge.
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo estimator has no samples for a quantity it needs.
class insufficient_data : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diqkd
