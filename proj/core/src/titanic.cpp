#include "dmkit/titanic.hpp"

#include <charconv>

#include "dmkit/errors.hpp"

namespace dmkit::titanic {

const NormalizationRecipe& NormalizationRecipe::standard() {
  static const NormalizationRecipe recipe;
  return recipe;
}

std::string_view age_group(std::optional<double> age, const NormalizationRecipe& recipe) {
  if (!age) return recipe.age_unknown;
  if (*age < 0 || *age != *age) {
    throw data_error("invalid age " + std::to_string(*age));
  }
  for (std::size_t i = 0; i < recipe.age_breaks.size(); ++i) {
    if (*age < recipe.age_breaks[i]) return recipe.age_labels[i];
  }
  return recipe.age_labels.back();
}

std::string_view embarked_name(std::optional<std::string_view> code,
                               const NormalizationRecipe& recipe) {
  if (!code) return recipe.embark_unknown;
  for (std::size_t i = 0; i < recipe.embark_codes.size(); ++i) {
    if (*code == recipe.embark_codes[i]) return recipe.embark_names[i];
  }
  throw data_error("unknown embarkation code '" + std::string(*code) + "'");
}

std::string removal_relation_name(std::string_view base, std::string_view ranges) {
  std::string out(base);
  out += "-weka.filters.unsupervised.attribute.Remove-R";
  out += ranges;
  return out;
}

namespace {

template <std::size_t N>
std::vector<std::string> labels(const std::array<std::string_view, N>& xs) {
  return {xs.begin(), xs.end()};
}

template <std::size_t N>
std::vector<std::string> labels(const std::array<std::string_view, N>& xs,
                                std::string_view extra) {
  auto out = labels(xs);
  out.emplace_back(extra);
  return out;
}

std::size_t require_column(const RawTable& raw, std::string_view name) {
  auto c = raw.column(name);
  if (c == std::string_view::npos) {
    throw data_error("input table has no '" + std::string(name) + "' column");
  }
  return c;
}

double to_number(const std::string& cell, std::string_view column, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw data_error("row " + std::to_string(line) + ": " + std::string(column) + " value '" +
                     cell + "' is not a number");
  }
  return v;
}

std::size_t lookup(const std::string& cell, const std::vector<std::string_view>& domain,
                   std::string_view column, std::size_t line) {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (cell == domain[i]) return i;
  }
  throw data_error("row " + std::to_string(line) + ": cannot map " + std::string(column) +
                   " value '" + cell + "'");
}

}  // namespace

Dataset intermediate_table(const RawTable& raw, std::string relation,
                           const NormalizationRecipe& recipe) {
  const std::size_t c_id = require_column(raw, "PassengerId");
  const std::size_t c_survived = require_column(raw, "Survived");
  const std::size_t c_pclass = require_column(raw, "Pclass");
  const std::size_t c_sex = require_column(raw, "Sex");
  const std::size_t c_age = require_column(raw, "Age");
  const std::size_t c_embarked = require_column(raw, "Embarked");

  const auto age_values = labels(recipe.age_labels, recipe.age_unknown);
  const auto port_values = labels(recipe.embark_names, recipe.embark_unknown);

  std::vector<AttributeSpec> attrs{
      AttributeSpec::numeric("PassengerId"),
      AttributeSpec::nominal("Survived", labels(recipe.survived_labels)),
      AttributeSpec::numeric("Pclass"),
      AttributeSpec::nominal("Class", labels(recipe.class_labels)),
      AttributeSpec::nominal("Sex", labels(recipe.sex_labels)),
      AttributeSpec::numeric("Age"),
      AttributeSpec::nominal("AgeGroup", age_values),
      AttributeSpec::nominal("Ecode", labels(recipe.embark_codes)),
      AttributeSpec::nominal("Embarked", port_values),
  };
  const auto& age_spec = attrs[6];
  const auto& port_spec = attrs[8];

  const std::vector<std::string_view> survived_codes{"0", "1"};
  const std::vector<std::string_view> pclass_codes{"1", "2", "3"};
  const std::vector<std::string_view> sex_codes(recipe.sex_labels.begin(),
                                                recipe.sex_labels.end());
  const std::vector<std::string_view> port_codes(recipe.embark_codes.begin(),
                                                 recipe.embark_codes.end());

  std::vector<Row> rows;
  rows.reserve(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& cells = raw.rows[r];
    const std::size_t line = r + 2;  // header is line 1

    std::optional<double> age;
    if (!cells[c_age].empty()) age = to_number(cells[c_age], "Age", line);

    std::optional<std::string_view> code;
    if (!cells[c_embarked].empty()) code = cells[c_embarked];

    const std::size_t pclass = lookup(cells[c_pclass], pclass_codes, "Pclass", line);

    Row row(attrs.size());
    row[0] = CellValue::numeric(to_number(cells[c_id], "PassengerId", line));
    row[1] = CellValue::nominal(lookup(cells[c_survived], survived_codes, "Survived", line));
    row[2] = CellValue::numeric(static_cast<double>(pclass + 1));
    row[3] = CellValue::nominal(pclass);
    row[4] = CellValue::nominal(lookup(cells[c_sex], sex_codes, "Sex", line));
    row[5] = age ? CellValue::numeric(*age) : CellValue::missing();
    try {
      row[6] = CellValue::nominal(*age_spec.index_of(age_group(age, recipe)));
      if (code) row[7] = CellValue::nominal(lookup(cells[c_embarked], port_codes, "Embarked", line));
      row[8] = CellValue::nominal(*port_spec.index_of(embarked_name(code, recipe)));
    } catch (const data_error& e) {
      throw data_error("row " + std::to_string(line) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(relation), std::move(attrs), std::move(rows), 1);
}

Dataset normalize_titanic(const RawTable& raw, std::string base_relation,
                          const NormalizationRecipe& recipe) {
  Dataset wide = intermediate_table(raw, base_relation, recipe);
  Dataset narrow = remove_attributes(wide, parse_ranges(kRemovedColumns, wide.num_attributes()));
  return narrow.with_relation(removal_relation_name(base_relation, kRemovedColumns));
}

}  // namespace dmkit::titanic
