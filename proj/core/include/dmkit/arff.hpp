#ifndef DMKIT_ARFF_HPP
#define DMKIT_ARFF_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "dmkit/dataset.hpp"

namespace dmkit {

/// Reads the dense ARFF subset: nominal and numeric/real/integer attributes.
/// Keywords are case-insensitive, '%' lines are comments, '?' is missing.
/// The returned dataset has no target set.
Dataset parse_arff(std::string_view text);
Dataset parse_arff(std::istream& in);

/// Writes `d` so that parse_arff reads it back identically (target aside).
std::string write_arff(const Dataset& d);
void write_arff(const Dataset& d, std::ostream& out);

/// Single-quotes `token` when it would not survive ARFF tokenization bare.
std::string arff_quote(std::string_view token);

}  // namespace dmkit

#endif
