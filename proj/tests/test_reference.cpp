#include "oracles.hpp"

#include <hsbc/ions.hpp>
#include <hsbc/reference.hpp>

#include <gtest/gtest.h>

using namespace hsbc;

namespace {
const std::filesystem::path data_dir = HSBC_DEFAULT_DATA_DIR;
const std::string header = std::string(reference_csv_header) + "\n";
} // namespace

TEST(Reference, WaterTableHasNoMissingCells) {
    const auto t = load_reference(data_dir / "reference_W.csv");
    EXPECT_EQ(t.size(), 72u);
    for (const auto &r : t.rows()) EXPECT_FALSE(r.not_reported());
    EXPECT_DOUBLE_EQ(*t.value("Li+", "W", Quantity::dG_msa), -485.0);
    EXPECT_DOUBLE_EQ(*t.value("I-", "W", Quantity::dS_expt), -14.0);
}

TEST(Reference, NotReportedCells) {
    const auto t = load_reference(data_dir / "reference_MeOH.csv");
    EXPECT_EQ(t.size(), 72u);
    const auto *row = t.find("F-", "MeOH", Quantity::dG_expt);
    ASSERT_NE(row, nullptr);
    EXPECT_TRUE(row->not_reported());
    EXPECT_TRUE(t.find("F-", "MeOH", Quantity::dS_expt)->not_reported());
    EXPECT_FALSE(t.value("F-", "MeOH", Quantity::dG_expt).has_value());
    EXPECT_DOUBLE_EQ(*t.value("F-", "MeOH", Quantity::dG_born), -566.0);
}

TEST(Reference, EmbeddedBornColumnMatchesShippedCsv) {
    const auto t = load_reference(data_dir / "reference_W.csv");
    for (const auto &e : water_born_column)
        EXPECT_DOUBLE_EQ(*t.value(e.name, "W", Quantity::dG_born), e.dG_born) << e.name;
}

TEST(Reference, AllShippedTablesMerge) {
    ReferenceTable all;
    for (const char *f : {"reference_W.csv", "reference_MeOH.csv", "reference_F.csv", "reference_AN.csv", "reference_DMF.csv"})
        all.merge(load_reference(data_dir / f));
    EXPECT_EQ(all.size(), 5u * 72u);
    EXPECT_THROW(all.merge(load_reference(data_dir / "reference_W.csv")), ValidationError);
}

TEST(Reference, EmptyFileGivesEmptyTable) {
    const auto dir = oracle::scratch_dir("ref_empty");
    oracle::write_file(dir / "empty.csv", "");
    EXPECT_TRUE(load_reference(dir / "empty.csv").empty());
    oracle::write_file(dir / "header.csv", header);
    EXPECT_TRUE(load_reference(dir / "header.csv").empty());
}

TEST(Reference, MalformedRowsReportLineNumbers) {
    const auto dir = oracle::scratch_dir("ref_bad");
    oracle::write_file(dir / "short.csv", header + "Li+,W,1,2,3,4,5,6,7,8\nNa+,W,1,2,3\n");
    try {
        load_reference(dir / "short.csv");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3u);
    }
    oracle::write_file(dir / "num.csv", header + "Li+,W,1,2,x3,4,5,6,7,8\n");
    EXPECT_THROW(load_reference(dir / "num.csv"), ParseError);
    oracle::write_file(dir / "head.csv", "ion,solvent,dG\nLi+,W,1\n");
    EXPECT_THROW(load_reference(dir / "head.csv"), ParseError);
}

TEST(Reference, UnknownNamesAreValidationErrors) {
    const auto dir = oracle::scratch_dir("ref_unknown");
    oracle::write_file(dir / "ion.csv", header + "Fr+,W,1,2,3,4,5,6,7,8\n");
    EXPECT_THROW(load_reference(dir / "ion.csv"), ValidationError);
    oracle::write_file(dir / "solvent.csv", header + "Li+,Hexane,1,2,3,4,5,6,7,8\n");
    EXPECT_THROW(load_reference(dir / "solvent.csv"), ValidationError);
    oracle::write_file(dir / "dup.csv", header + "Li+,W,1,2,3,4,5,6,7,8\nLi+,W,1,2,3,4,5,6,7,8\n");
    EXPECT_THROW(load_reference(dir / "dup.csv"), ValidationError);
    EXPECT_THROW(load_reference(dir / "absent.csv"), IoError);
}

TEST(Reference, ToleratesBomAndCrlf) {
    const auto dir = oracle::scratch_dir("ref_bom");
    oracle::write_file(dir / "bom.csv", "\xEF\xBB\xBF" + std::string(reference_csv_header) +
                                            "\r\nLi+,W,1,2,3,4,5,6,7,8\r\n");
    const auto t = load_reference(dir / "bom.csv");
    EXPECT_EQ(t.size(), 8u);
    EXPECT_DOUBLE_EQ(*t.value("Li+", "W", Quantity::dS_hsbc), 8.0);
}
