#ifndef DMKIT_CSV_HPP
#define DMKIT_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dmkit/dataset.hpp"

namespace dmkit {

/// Untyped CSV content. Empty cells are stored as empty strings and mean
/// "absent" to every consumer.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t num_columns() const { return header.size(); }
  /// Column position of `name`, or npos.
  std::size_t column(std::string_view name) const;

  bool operator==(const RawTable&) const = default;
};

// Dialect: comma separator, '"' quoting with "" as the escaped quote,
// LF or CRLF line ends, quoted cells may span lines. Blank lines are skipped.
RawTable parse_csv(std::string_view text);
RawTable parse_csv(std::istream& in);

/// Quotes only cells that need it (separator, quote, CR/LF, or edge blanks).
std::string write_csv(const RawTable& table);

/// Generic CSV to dataset conversion: every column becomes nominal with its
/// values in first-appearance order; empty cells become missing. A column
/// with no non-empty cell is a data_error (nominal lists cannot be empty).
Dataset table_to_nominal_dataset(const RawTable& table, std::string relation);

}  // namespace dmkit

#endif
