#include "statgate/formats/print.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace statgate;
using formats::print_value;

TEST_CASE("scalar prints with index bracket") {
  REQUIRE(print_value(Value::number(4)) == "[1] 4");
  REQUIRE(print_value(Value::logical(true)) == "[1] TRUE");
  REQUIRE(print_value(Value::string("a")) == "[1] \"a\"");
  REQUIRE(print_value(Value::null()) == "NULL");
}

TEST_CASE("number vector shares decimals and aligns") {
  VectorData v = number_vector({1, 0, 3.5});
  v.na = {0, 1, 0};
  v.num[1] = 0;
  REQUIRE(print_value(Value::vector(v)) == "[1] 1.0  NA 3.5");
}

TEST_CASE("non-finite rendering") {
  VectorData v = number_vector({std::nan(""), std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()});
  REQUIRE(print_value(Value::vector(v)) == "[1]  NaN  Inf -Inf");
}

TEST_CASE("long vectors wrap at 80 columns with start indices") {
  std::vector<double> xs(30);
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
  std::string out = print_value(Value::vector(number_vector(xs)));
  // widths: elements "1".."30" pad to 2; prefix "[k]" pads to 4
  REQUIRE(out.substr(0, 5) == " [1] ");
  REQUIRE(out.find("\n[26]") != std::string::npos);
  for (auto& line : {out.substr(0, out.find('\n'))})
    REQUIRE(line.size() <= 80);
}

TEST_CASE("dataframe prints header and row numbers") {
  FrameData f;
  f.cols.emplace_back("x", number_vector({1, 2}));
  f.cols.emplace_back("y", string_vector({"a", "b"}));
  REQUIRE(print_value(Value::dataframe(f)) == "  x y\n1 1 a\n2 2 b");
}

TEST_CASE("empty vectors print their type") {
  REQUIRE(print_value(Value::vector(number_vector({}))) == "numeric(0)");
  REQUIRE(print_value(Value::vector(string_vector({}))) == "character(0)");
}

TEST_CASE("string vectors are quoted and left-aligned") {
  REQUIRE(print_value(Value::vector(string_vector({"a", "bb"}))) == "[1] \"a\"  \"bb\"");
  VectorData v = string_vector({"a", ""});
  v.na = {0, 1};
  v.str[1] = "";
  REQUIRE(print_value(Value::vector(v)) == "[1] \"a\" NA");
}

TEST_CASE("lists print named blocks") {
  ListData l;
  l.items.emplace_back("a", Value::number(1));
  l.items.emplace_back("b", Value::string("z"));
  REQUIRE(print_value(Value::list(l)) == "$a\n[1] 1\n\n$b\n[1] \"z\"");
}
