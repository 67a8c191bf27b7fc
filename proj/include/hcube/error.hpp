#pragma once

#include <stdexcept>
#include <string>

namespace hcube {

/// Malformed input: wrong shape, out-of-range parameter, unparsable file.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A ratio was requested whose denominator vanishes.
class degenerate_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stored certificate no longer reproduces its recorded values.
class certificate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw input_error(message);
}

}  // namespace detail
}  // namespace hcube
