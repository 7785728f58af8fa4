#include <gtest/gtest.h>

#include "dmkit/arff.hpp"
#include "dmkit/errors.hpp"
#include "dmkit/titanic.hpp"
#include "test_support.hpp"

namespace dmkit::titanic {
namespace {

TEST(AgeGroup, BreaksBelongToTheUpperBucket) {
  EXPECT_EQ(age_group(0.42), "Child");
  EXPECT_EQ(age_group(9.5), "Child");
  EXPECT_EQ(age_group(10), "Adolescent");
  EXPECT_EQ(age_group(19.99), "Adolescent");
  EXPECT_EQ(age_group(20), "Adult");
  EXPECT_EQ(age_group(49.5), "Adult");
  EXPECT_EQ(age_group(50), "Old");
  EXPECT_EQ(age_group(80), "Old");
  EXPECT_EQ(age_group(std::nullopt), "Unk");
  EXPECT_THROW(age_group(-1), data_error);
}

TEST(EmbarkedName, Codes) {
  EXPECT_EQ(embarked_name("S"), "Southampton");
  EXPECT_EQ(embarked_name("C"), "Cherbourg");
  EXPECT_EQ(embarked_name("Q"), "Queenstown");
  EXPECT_EQ(embarked_name(std::nullopt), "Unk");
  EXPECT_THROW(embarked_name("X"), data_error);
}

TEST(RemovalRelationName, AppendsFilterSuffix) {
  EXPECT_EQ(removal_relation_name("train4", "1,3,6,8"),
            "train4-weka.filters.unsupervised.attribute.Remove-R1,3,6,8");
}

RawTable small_raw() {
  return parse_csv(
      "PassengerId,Survived,Pclass,Name,Sex,Age,SibSp,Parch,Ticket,Fare,Cabin,Embarked\n"
      "6,0,3,\"Moran, Mr. James\",male,,0,0,330877,8.4583,,Q\n"
      "62,1,1,\"Icard, Miss. Amelie\",female,38,0,0,113572,80,B28,\n");
}

TEST(NormalizeTitanic, MissingAgeAndPort) {
  const auto d = normalize_titanic(small_raw());
  ASSERT_EQ(d.num_attributes(), 5u);
  EXPECT_EQ(d.target(), 0u);
  EXPECT_EQ(d.cell_text(0, 3), "Unk");
  EXPECT_EQ(d.cell_text(0, 4), "Queenstown");
  EXPECT_EQ(d.cell_text(1, 4), "Unk");
  EXPECT_EQ(d.cell_text(1, 1), "1st");
}

TEST(NormalizeTitanic, RejectsUnknownCodes) {
  auto raw = small_raw();
  raw.rows[0][2] = "4";
  EXPECT_THROW(normalize_titanic(raw), data_error);
  raw = small_raw();
  raw.rows[0][5] = "old";
  EXPECT_THROW(normalize_titanic(raw), data_error);
}

TEST(NormalizeTitanic, FullTableCounts) {
  const auto& d = dmkit::testing::titanic();
  ASSERT_EQ(d.num_instances(), 891u);
  std::vector<std::size_t> survived(2), age(5), port(4);
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    ++survived[d.row(i)[0].index()];
    ++age[d.row(i)[3].index()];
    ++port[d.row(i)[4].index()];
  }
  EXPECT_EQ(survived, (std::vector<std::size_t>{549, 342}));
  EXPECT_EQ(age[4], 177u);
  EXPECT_EQ(port, (std::vector<std::size_t>{644, 168, 77, 2}));
}

TEST(NormalizeTitanic, InputIsNotMutated) {
  const auto before = dmkit::testing::titanic_raw();
  normalize_titanic(dmkit::testing::titanic_raw());
  EXPECT_EQ(dmkit::testing::titanic_raw(), before);
}

}  // namespace
}  // namespace dmkit::titanic
