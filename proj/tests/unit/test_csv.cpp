#include "doctest.h"

#include <sstream>

#include "sentaudit/csv.hpp"
#include "sentaudit/records.hpp"

using namespace sentaudit;

TEST_CASE("reader splits plain and quoted fields") {
  std::istringstream in("a,b,c\r\n\"x, y\",\"say \"\"hi\"\"\",\n\"multi\nline\",2,3\n");
  csv::Reader reader(in);

  auto row = reader.next();
  REQUIRE(row);
  CHECK(row->fields == std::vector<std::string>{"a", "b", "c"});
  CHECK(row->line == 1);

  row = reader.next();
  REQUIRE(row);
  CHECK(row->fields == std::vector<std::string>{"x, y", "say \"hi\"", ""});
  CHECK(row->line == 2);

  row = reader.next();
  REQUIRE(row);
  CHECK(row->fields == std::vector<std::string>{"multi\nline", "2", "3"});
  CHECK(row->line == 3);

  CHECK_FALSE(reader.next());
}

TEST_CASE("malformed rows throw with their line and the reader recovers") {
  std::istringstream in("ok,1\nbad\"quote,2\n\"closed\"junk,3\nfine,4\n");
  csv::Reader reader(in);
  CHECK(reader.next()->fields.size() == 2);
  try {
    reader.next();
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(reader.next(), DataError);
  const auto row = reader.next();
  REQUIRE(row);
  CHECK(row->fields == std::vector<std::string>{"fine", "4"});
  CHECK(row->line == 4);
}

TEST_CASE("unterminated quote is an error") {
  std::istringstream in("\"never closed,1\nmore\n");
  csv::Reader reader(in);
  CHECK_THROWS_AS(reader.next(), DataError);
}

TEST_CASE("escape quotes only when needed and round-trips through the reader") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"x\"") == "\"say \"\"x\"\"\"");

  const std::vector<std::string> fields{"a,b", "q\"q", "n\nl", "", "end"};
  std::ostringstream out;
  csv::write_row(out, fields);
  std::istringstream in(out.str());
  csv::Reader reader(in);
  CHECK(reader.next()->fields == fields);
}
