#include "dmkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "dmkit/errors.hpp"

namespace dmkit {

AttributeSpec::AttributeSpec(std::string name, bool nominal, std::vector<std::string> values)
    : name_(std::move(name)), nominal_(nominal), values_(std::move(values)) {}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> values) {
  if (values.empty()) {
    throw usage_error("nominal attribute '" + name + "' has no values");
  }
  std::set<std::string_view> seen;
  for (const auto& v : values) {
    if (!seen.insert(v).second) {
      throw usage_error("nominal attribute '" + name + "' declares '" + v + "' twice");
    }
  }
  return AttributeSpec(std::move(name), true, std::move(values));
}

AttributeSpec AttributeSpec::numeric(std::string name) {
  return AttributeSpec(std::move(name), false, {});
}

std::optional<std::size_t> AttributeSpec::index_of(std::string_view value) const {
  auto it = std::find(values_.begin(), values_.end(), value);
  if (it == values_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

Dataset::Dataset(std::string relation, std::vector<AttributeSpec> attributes,
                 std::vector<Row> rows, std::optional<std::size_t> target)
    : relation_(std::move(relation)),
      attributes_(std::move(attributes)),
      rows_(std::move(rows)),
      target_(target) {
  if (target_) {
    if (*target_ >= attributes_.size()) {
      throw usage_error("target index " + std::to_string(*target_) + " out of range");
    }
    if (!attributes_[*target_].is_nominal()) {
      throw usage_error("target attribute '" + attributes_[*target_].name() +
                        "' must be nominal");
    }
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Row& row = rows_[r];
    if (row.size() != attributes_.size()) {
      throw data_error("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                       " cells, expected " + std::to_string(attributes_.size()));
    }
    for (std::size_t a = 0; a < row.size(); ++a) {
      const CellValue& c = row[a];
      const AttributeSpec& spec = attributes_[a];
      if (c.is_missing()) continue;
      bool ok = spec.is_nominal() ? (c.is_nominal() && c.index() < spec.num_values())
                                  : c.is_numeric();
      if (!ok) {
        throw data_error("row " + std::to_string(r + 1) + ": cell incompatible with attribute '" +
                         spec.name() + "'");
      }
    }
  }
}

std::size_t Dataset::target() const {
  if (!target_) throw usage_error("dataset has no target attribute");
  return *target_;
}

std::optional<std::size_t> Dataset::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name() == name) return i;
  }
  return std::nullopt;
}

Dataset Dataset::with_target(std::optional<std::size_t> target) const {
  return Dataset(relation_, attributes_, rows_, target);
}

Dataset Dataset::with_relation(std::string relation) const {
  return Dataset(std::move(relation), attributes_, rows_, target_);
}

Dataset Dataset::with_rows(std::vector<Row> rows) const {
  return Dataset(relation_, attributes_, std::move(rows), target_);
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Row> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(rows_.at(i));
  return Dataset(relation_, attributes_, std::move(picked), target_);
}

std::string Dataset::cell_text(std::size_t row, std::size_t attr) const {
  const CellValue& c = rows_.at(row).at(attr);
  if (c.is_missing()) return "?";
  if (c.is_nominal()) return attributes_[attr].values()[c.index()];
  std::ostringstream os;
  os << c.number();
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::size_t parse_index(std::string_view token, std::size_t count) {
  if (token == "first") return 1;
  if (token == "last") return count;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw usage_error("bad attribute index '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::vector<IndexRange> parse_ranges(std::string_view text, std::size_t attribute_count) {
  std::vector<IndexRange> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    auto dash = item.find('-');
    IndexRange r;
    if (dash == std::string_view::npos) {
      r.first = r.last = parse_index(item, attribute_count);
    } else {
      r.first = parse_index(trim(item.substr(0, dash)), attribute_count);
      r.last = parse_index(trim(item.substr(dash + 1)), attribute_count);
    }
    if (r.first < 1 || r.last > attribute_count || r.first > r.last) {
      throw usage_error("attribute range '" + std::string(item) + "' outside 1.." +
                        std::to_string(attribute_count));
    }
    out.push_back(r);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

Dataset remove_attributes(const Dataset& d, const std::vector<IndexRange>& ranges) {
  const std::size_t n = d.num_attributes();
  std::vector<bool> drop(n, false);
  for (const auto& r : ranges) {
    if (r.first < 1 || r.last > n || r.first > r.last) {
      throw usage_error("attribute range " + std::to_string(r.first) + "-" +
                        std::to_string(r.last) + " outside 1.." + std::to_string(n));
    }
    for (std::size_t i = r.first; i <= r.last; ++i) drop[i - 1] = true;
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) keep.push_back(i);
  }

  std::vector<AttributeSpec> attrs;
  std::optional<std::size_t> target;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    attrs.push_back(d.attribute(keep[k]));
    if (d.target_index() == keep[k]) target = k;
  }

  std::vector<Row> rows;
  rows.reserve(d.num_instances());
  for (const Row& row : d.rows()) {
    Row r;
    r.reserve(keep.size());
    for (auto i : keep) r.push_back(row[i]);
    rows.push_back(std::move(r));
  }
  return Dataset(d.relation_name(), std::move(attrs), std::move(rows), target);
}

CellValue column_mode(const Dataset& d, std::size_t attr) {
  const AttributeSpec& spec = d.attribute(attr);
  if (spec.is_numeric()) {
    double sum = 0;
    std::size_t n = 0;
    for (const Row& row : d.rows()) {
      if (row[attr].is_missing()) continue;
      sum += row[attr].number();
      ++n;
    }
    if (n == 0) throw data_error("attribute '" + spec.name() + "' has only missing values");
    return CellValue::numeric(sum / static_cast<double>(n));
  }

  std::vector<std::size_t> counts(spec.num_values(), 0);
  std::size_t n = 0;
  for (const Row& row : d.rows()) {
    if (row[attr].is_missing()) continue;
    ++counts[row[attr].index()];
    ++n;
  }
  if (n == 0) throw data_error("attribute '" + spec.name() + "' has only missing values");
  // max_element returns the first maximum, i.e. the lowest index on ties
  auto best = std::max_element(counts.begin(), counts.end());
  return CellValue::nominal(static_cast<std::size_t>(best - counts.begin()));
}

}  // namespace dmkit
