#pragma once

#include <stdexcept>
#include <string>

namespace hgemm {

/// Operand shapes do not conform, or a view would leave its parent.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The output matrix shares storage with an input.
class alias_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid blocking parameters or tuning space.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A complex matrix is not the image of a quaternion matrix.
class structure_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed file or command-line input.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hgemm
