#include <gtest/gtest.h>

#include "dmkit/dataset.hpp"
#include "dmkit/errors.hpp"

namespace dmkit {
namespace {

Dataset nine_columns() {
  std::vector<AttributeSpec> attrs;
  for (int i = 1; i <= 9; ++i) attrs.push_back(AttributeSpec::nominal("c" + std::to_string(i), {"x", "y"}));
  Row r;
  for (int i = 0; i < 9; ++i) r.push_back(CellValue::nominal(i % 2));
  return Dataset("base", attrs, {r}, 1);
}

TEST(AttributeSpec, RejectsEmptyAndDuplicateValues) {
  EXPECT_THROW(AttributeSpec::nominal("a", {}), usage_error);
  EXPECT_THROW(AttributeSpec::nominal("a", {"x", "x"}), usage_error);
  EXPECT_EQ(AttributeSpec::nominal("a", {"x", "y"}).index_of("y"), 1u);
  EXPECT_FALSE(AttributeSpec::nominal("a", {"x"}).index_of("z").has_value());
}

TEST(Dataset, ValidatesCells) {
  const auto a = AttributeSpec::nominal("a", {"x"});
  EXPECT_THROW(Dataset("r", {a}, {{CellValue::nominal(1)}}), data_error);
  EXPECT_THROW(Dataset("r", {a}, {{CellValue::numeric(1)}}), data_error);
  EXPECT_THROW(Dataset("r", {a}, {{}}), data_error);
  EXPECT_THROW(Dataset("r", {AttributeSpec::numeric("n")}, {}, 0), usage_error);
  EXPECT_THROW(Dataset("r", {a}).target(), usage_error);
}

TEST(ParseRanges, Forms) {
  EXPECT_EQ(parse_ranges("1,3,6-8", 9),
            (std::vector<IndexRange>{{1, 1}, {3, 3}, {6, 8}}));
  EXPECT_EQ(parse_ranges("first-last", 4), (std::vector<IndexRange>{{1, 4}}));
  EXPECT_TRUE(parse_ranges("", 4).empty());
  EXPECT_THROW(parse_ranges("10", 9), usage_error);
  EXPECT_THROW(parse_ranges("x", 9), usage_error);
}

TEST(RemoveAttributes, TitanicColumns) {
  const auto d = remove_attributes(nine_columns(), parse_ranges("1,3,6,8", 9));
  ASSERT_EQ(d.num_attributes(), 5u);
  EXPECT_EQ(d.attribute(0).name(), "c2");
  EXPECT_EQ(d.attribute(4).name(), "c9");
  EXPECT_EQ(d.target(), 0u);
  EXPECT_EQ(d.relation_name(), "base");
}

TEST(RemoveAttributes, EmptyRangeIsIdentity) {
  const auto d = nine_columns();
  EXPECT_EQ(remove_attributes(d, {}), d);
}

TEST(RemoveAttributes, DroppingTargetClearsIt) {
  const auto d = remove_attributes(nine_columns(), parse_ranges("2", 9));
  EXPECT_FALSE(d.target_index().has_value());
}

TEST(ColumnMode, LowestIndexWinsTiesAndMeanForNumeric) {
  const Dataset d("r", {AttributeSpec::nominal("a", {"x", "y"}), AttributeSpec::numeric("n")},
                  {{CellValue::nominal(1), CellValue::numeric(1)},
                   {CellValue::nominal(0), CellValue::missing()},
                   {CellValue::missing(), CellValue::numeric(4)}});
  EXPECT_EQ(column_mode(d, 0), CellValue::nominal(0));
  EXPECT_EQ(column_mode(d, 1), CellValue::numeric(2.5));
  const Dataset blank("r", {AttributeSpec::nominal("a", {"x"})}, {{CellValue::missing()}});
  EXPECT_THROW(column_mode(blank, 0), data_error);
}

TEST(Dataset, SubsetAndCellText) {
  const auto d = nine_columns().with_rows({{CellValue::nominal(0), CellValue::nominal(1),
                                            CellValue::missing(), CellValue::nominal(0),
                                            CellValue::nominal(0), CellValue::nominal(0),
                                            CellValue::nominal(0), CellValue::nominal(0),
                                            CellValue::nominal(0)}});
  EXPECT_EQ(d.cell_text(0, 1), "y");
  EXPECT_EQ(d.cell_text(0, 2), "?");
  EXPECT_EQ(d.subset({0, 0}).num_instances(), 2u);
}

}  // namespace
}  // namespace dmkit
