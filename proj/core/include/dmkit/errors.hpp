#ifndef DMKIT_ERRORS_HPP
#define DMKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dmkit {

/// Bad arguments or parameters supplied by the caller.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input content that is well-formed but violates the schema or domain.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not follow the expected file structure.
class format_error : public data_error {
 public:
  using data_error::data_error;
};

}  // namespace dmkit

#endif
