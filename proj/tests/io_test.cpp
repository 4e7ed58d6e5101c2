#include <filesystem>

#include <gtest/gtest.h>

#include <martin/io.hpp>

using namespace martin::io;

TEST(Csv, FieldQuoting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, TableRoundTrip)
{
    CsvTable t({"name", "value"});
    t.add_comment("martinlab test");
    t.add_row({"a,b", "1"});
    t.add_row({"q\"x", "2.5"});
    EXPECT_THROW(t.add_row({"only"}), std::logic_error);
    EXPECT_EQ(t.str(),
              "# martinlab test\nname,value\n\"a,b\",1\n\"q\"\"x\",2.5\n");

    auto const path = std::filesystem::temp_directory_path() / "martin_io_test.csv";
    t.write(path.string());
    auto const rows = read_csv(path.string());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][0], "a,b");
    EXPECT_EQ(rows[2][0], "q\"x");
    EXPECT_EQ(read_file(path.string()), t.str());
    std::filesystem::remove(path);
    EXPECT_THROW(read_csv(path.string()), std::runtime_error);
}

TEST(Csv, NumbersRoundTrip)
{
    for (double v : {0.1, 1.0 / 3, 1e-300, -2.5, 6.02214076e23})
        EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(std::uint64_t{12}), "12");
    EXPECT_EQ(format_point(martin::Point{0.5, -1.0}), "0.5;-1");
}
