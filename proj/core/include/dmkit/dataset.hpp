#ifndef DMKIT_DATASET_HPP
#define DMKIT_DATASET_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dmkit {

/// Schema of one column. A nominal attribute owns an ordered value list;
/// the position of a value in that list is its nominal index.
class AttributeSpec {
 public:
  static AttributeSpec nominal(std::string name, std::vector<std::string> values);
  static AttributeSpec numeric(std::string name);

  const std::string& name() const { return name_; }
  bool is_nominal() const { return nominal_; }
  bool is_numeric() const { return !nominal_; }
  const std::vector<std::string>& values() const { return values_; }
  std::size_t num_values() const { return values_.size(); }

  /// Nominal index of `value`, or nullopt when it is not declared.
  std::optional<std::size_t> index_of(std::string_view value) const;

  bool operator==(const AttributeSpec&) const = default;

 private:
  AttributeSpec(std::string name, bool nominal, std::vector<std::string> values);

  std::string name_;
  bool nominal_ = false;
  std::vector<std::string> values_;
};

class CellValue {
 public:
  CellValue() = default;  // missing

  static CellValue missing() { return {}; }
  static CellValue nominal(std::size_t index) { return CellValue(index); }
  static CellValue numeric(double value) { return CellValue(value); }

  bool is_missing() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_nominal() const { return std::holds_alternative<std::size_t>(v_); }
  bool is_numeric() const { return std::holds_alternative<double>(v_); }

  std::size_t index() const { return std::get<std::size_t>(v_); }
  double number() const { return std::get<double>(v_); }

  bool operator==(const CellValue&) const = default;

 private:
  explicit CellValue(std::size_t i) : v_(i) {}
  explicit CellValue(double d) : v_(d) {}

  std::variant<std::monostate, std::size_t, double> v_;
};

using Row = std::vector<CellValue>;

/// Attribute schema plus instance rows. Immutable once constructed; every
/// constructor validates cell/kind compatibility and the target choice.
class Dataset {
 public:
  Dataset(std::string relation, std::vector<AttributeSpec> attributes,
          std::vector<Row> rows = {}, std::optional<std::size_t> target = std::nullopt);

  const std::string& relation_name() const { return relation_; }
  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  const AttributeSpec& attribute(std::size_t i) const { return attributes_.at(i); }
  std::size_t num_attributes() const { return attributes_.size(); }

  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t num_instances() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  std::optional<std::size_t> target_index() const { return target_; }
  /// Target index; throws usage_error when unset.
  std::size_t target() const;
  std::size_t num_classes() const { return attribute(target()).num_values(); }
  std::size_t class_of(std::size_t row) const { return rows_[row][target()].index(); }

  /// Index of the attribute called `name`, or nullopt.
  std::optional<std::size_t> find_attribute(std::string_view name) const;

  Dataset with_target(std::optional<std::size_t> target) const;
  Dataset with_relation(std::string relation) const;
  Dataset with_rows(std::vector<Row> rows) const;
  /// Rows selected by index, in the given order.
  Dataset subset(const std::vector<std::size_t>& indices) const;

  /// Display text of one cell ("?" for missing).
  std::string cell_text(std::size_t row, std::size_t attr) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::string relation_;
  std::vector<AttributeSpec> attributes_;
  std::vector<Row> rows_;
  std::optional<std::size_t> target_;
};

/// 1-based inclusive index range, as used by "Remove-R1,3,6,8" style filters.
struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 1;
  bool operator==(const IndexRange&) const = default;
};

/// Parses "1,3,6-8" (also accepts "first"/"last"). Throws usage_error.
std::vector<IndexRange> parse_ranges(std::string_view text, std::size_t attribute_count);

/// Drops the attributes covered by `ranges` (1-based), keeping order.
Dataset remove_attributes(const Dataset& d, const std::vector<IndexRange>& ranges);

/// Most frequent nominal value (ties to the lowest index), or the mean of a
/// numeric column. Missing cells are ignored; an all-missing column is a
/// data_error.
CellValue column_mode(const Dataset& d, std::size_t attr);

}  // namespace dmkit

#endif
