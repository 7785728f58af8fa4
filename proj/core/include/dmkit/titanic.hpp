#ifndef DMKIT_TITANIC_HPP
#define DMKIT_TITANIC_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "dmkit/csv.hpp"
#include "dmkit/dataset.hpp"

namespace dmkit::titanic {

/// Discretization and relabeling rules for the Kaggle passenger table.
/// Value lists below fix the nominal indices used by every downstream model.
struct NormalizationRecipe {
  /// Upper bounds (exclusive) for Child, Adolescent, Adult; anything above is Old.
  std::array<double, 3> age_breaks{10.0, 20.0, 50.0};
  std::array<std::string_view, 4> age_labels{"Child", "Adolescent", "Adult", "Old"};
  std::string_view age_unknown = "Unk";
  std::array<std::string_view, 3> embark_codes{"S", "C", "Q"};
  std::array<std::string_view, 3> embark_names{"Southampton", "Cherbourg", "Queenstown"};
  std::string_view embark_unknown = "Unk";
  std::array<std::string_view, 3> class_labels{"1st", "2nd", "3rd"};
  std::array<std::string_view, 2> survived_labels{"No", "Yes"};
  std::array<std::string_view, 2> sex_labels{"male", "female"};

  static const NormalizationRecipe& standard();
};

/// Age bucket label; nullopt age maps to "Unk". Negative ages are a data_error.
std::string_view age_group(std::optional<double> age,
                           const NormalizationRecipe& recipe = NormalizationRecipe::standard());

/// Port name for an embarkation code (S, C, Q); nullopt maps to "Unk".
std::string_view embarked_name(std::optional<std::string_view> code,
                               const NormalizationRecipe& recipe = NormalizationRecipe::standard());

/// Ranges removed from the 9-column table to reach the analysis dataset.
inline constexpr std::string_view kRemovedColumns = "1,3,6,8";

/// Relation name a Weka-style Remove filter gives its output.
std::string removal_relation_name(std::string_view base, std::string_view ranges);

/// The 9-column intermediate table: PassengerId, Survived, Pclass, Class,
/// Sex, Age, AgeGroup, Ecode, Embarked. Numeric id/pclass/age columns keep
/// their raw values (age may be missing, as may Ecode).
Dataset intermediate_table(const RawTable& raw, std::string relation = "train4",
                           const NormalizationRecipe& recipe = NormalizationRecipe::standard());

/// The 5-attribute analysis dataset (Survived, Class, Sex, AgeGroup, Embarked)
/// with Survived as target. The relation name is `base_relation` with the
/// Remove filter suffix appended.
Dataset normalize_titanic(const RawTable& raw, std::string base_relation = "train4",
                          const NormalizationRecipe& recipe = NormalizationRecipe::standard());

}  // namespace dmkit::titanic

#endif
