#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hyperroles/csv.hpp"
#include "hyperroles/error.hpp"
#include "hyperroles/schemas.hpp"

using namespace hyperroles;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
  std::istringstream in(text);
  csv::Reader r(in);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> f;
  while (r.next(f)) rows.push_back(f);
  return rows;
}

}  // namespace

TEST(CsvReader, QuotingAndLineEndings) {
  const auto rows = read_all("a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"x,y", "say \"hi\""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"", ""}));
}

TEST(CsvReader, MultilineFieldTracksLines) {
  std::istringstream in("h\n\"one\ntwo\"\nnext\n");
  csv::Reader r(in);
  std::vector<std::string> f;
  ASSERT_TRUE(r.next(f));
  ASSERT_TRUE(r.next(f));
  EXPECT_EQ(f[0], "one\ntwo");
  EXPECT_EQ(r.line(), 2u);
  ASSERT_TRUE(r.next(f));
  EXPECT_EQ(r.line(), 4u);
  std::istringstream bad("\"open\n");
  csv::Reader rb(bad);
  EXPECT_THROW(rb.next(f), Error);
}

TEST(CsvEscape, RoundTrip) {
  std::mt19937_64 rng(3);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> row(1 + rng() % 4);
    for (auto& cell : row) {
      for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) cell.push_back(alphabet[rng() % alphabet.size()]);
    }
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) line += (c ? "," : "") + csv::escape(row[c]);
    const auto back = read_all(line + "\n");
    ASSERT_EQ(back.size(), 1u);
    ASSERT_EQ(back[0], row);
  }
}

TEST(CsvNumbers, FormatRoundTrips) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) / (1 + rng() % 1000);
    ASSERT_EQ(csv::parse_double(csv::format_double(x), "x"), x);
  }
  EXPECT_EQ(csv::format_double(0.5), "0.5");
  EXPECT_EQ(csv::format_double(NAN), "");
  EXPECT_EQ(csv::format_optional(std::nullopt), "");
  EXPECT_EQ(csv::parse_double("+2.5", "x"), 2.5);
  EXPECT_THROW(csv::parse_double("2.5x", "x"), Error);
  EXPECT_THROW(csv::parse_double("inf", "x"), Error);
  EXPECT_THROW(csv::parse_double("", "x"), Error);
  EXPECT_EQ(csv::parse_int("-7", "n"), -7);
  EXPECT_THROW(csv::parse_int("7.0", "n"), Error);
}

TEST(CsvTable, ValidatesBeforeWriting) {
  csv::Table t(schemas::kOmegas);
  t.add_row({"h1", "size", "3"});
  t.add_row({"h2", "gini:score", ""});
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "hyperedge_id,omega,value\nh1,size,3\nh2,gini:score,\n");

  csv::Table bad(schemas::kOmegas);
  bad.add_row({"h1", "size", "three"});
  try {
    std::ostringstream sink;
    bad.write(sink);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
    EXPECT_NE(std::string(e.what()).find("value"), std::string::npos);
  }
  csv::Table short_row(schemas::kOmegas);
  short_row.add_row({"h1"});
  EXPECT_THROW(short_row.validate(), Error);
  csv::Table not_null(schemas::kStats);
  not_null.add_row({"1", "2023", "1", "", "1", "1", "1", "1", ""});
  EXPECT_THROW(not_null.validate(), Error);
}
