#include "statgate/formats/json_codec.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers/random_values.hpp"

using namespace statgate;
using formats::json_bytes_to_value;
using formats::json_to_value;
using formats::value_to_json;

namespace {

// The documented widening: scalars export as one-element arrays, so the
// round trip compares against the widened original.
Value widen(const Value& v) {
  switch (v.tag()) {
    case Tag::Logical: {
      VectorData one;
      one.type = ElemType::Logical;
      one.na = {v.logical_scalar().na ? uint8_t{1} : uint8_t{0}};
      one.log = {static_cast<uint8_t>(v.logical_scalar().value ? 1 : 0)};
      return Value::vector(one);
    }
    case Tag::Number: {
      VectorData one;
      one.type = ElemType::Number;
      one.na = {v.number_scalar().na ? uint8_t{1} : uint8_t{0}};
      one.num = {v.number_scalar().value};
      return Value::vector(one);
    }
    case Tag::String:
      return Value::vector(string_vector({v.string_scalar()}));
    case Tag::List: {
      ListData l;
      for (const auto& [k, member] : v.list_data().items)
        l.items.emplace_back(k, widen(member));
      return Value::list(std::move(l));
    }
    default:
      return v;
  }
}

}  // namespace

TEST_CASE("NA maps to null and non-finite numbers to sentinel strings") {
  VectorData v = number_vector({1, 0, 2});
  v.na = {0, 1, 0};
  REQUIRE(value_to_json(Value::vector(v)).dump() == "[1,null,2]");

  VectorData nf = number_vector({std::nan(""), std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity(), 1.5});
  REQUIRE(value_to_json(Value::vector(nf)).dump() == "[\"NaN\",\"Inf\",\"-Inf\",1.5]");

  // the inverse on import
  Value back = json_bytes_to_value("[\"NaN\",\"Inf\",\"-Inf\",1.5,null]");
  REQUIRE(back.tag() == Tag::Vector);
  REQUIRE(back.vec().type == ElemType::Number);
  REQUIRE(std::isnan(back.vec().num[0]));
  REQUIRE(back.vec().num[1] == std::numeric_limits<double>::infinity());
  REQUIRE(back.vec().num[2] == -std::numeric_limits<double>::infinity());
  REQUIRE(back.vec().is_na(4));
}

TEST_CASE("integral numbers export without decimal noise") {
  REQUIRE(value_to_json(Value::number(1)).dump() == "[1]");
  REQUIRE(value_to_json(Value::number(1.5)).dump() == "[1.5]");
}

TEST_CASE("scalars import from bare primitives") {
  REQUIRE(json_bytes_to_value("true").tag() == Tag::Logical);
  REQUIRE(json_bytes_to_value("10").tag() == Tag::Number);
  REQUIRE(json_bytes_to_value("\"abc\"").tag() == Tag::String);
  REQUIRE(json_bytes_to_value("null").tag() == Tag::Null);
}

TEST_CASE("objects import as lists, arrays of objects as dataframes") {
  Value v = json_bytes_to_value(R"({"x":[1,2,3],"y":{"a":true}})");
  REQUIRE(v.tag() == Tag::List);
  REQUIRE(v.list_data().items[0].first == "x");
  REQUIRE(v.list_data().items[0].second.tag() == Tag::Vector);
  REQUIRE(v.list_data().items[0].second.vec().num == std::vector<double>{1, 2, 3});
  const Value& y = v.list_data().items[1].second;
  REQUIRE(y.tag() == Tag::List);
  REQUIRE(y.list_data().items[0].first == "a");
  REQUIRE(y.list_data().items[0].second.logical_scalar().value);

  Value df = json_bytes_to_value(R"([{"a":1,"b":"x"},{"a":2,"b":null}])");
  REQUIRE(df.tag() == Tag::Dataframe);
  REQUIRE(df.frame().ncol() == 2);
  REQUIRE(df.frame().cols[1].second.is_na(1));
}

TEST_CASE("nested numeric arrays import as V1..Vp columns") {
  Value v = json_bytes_to_value("[[1,2],[2,4],[3,6]]");
  REQUIRE(v.tag() == Tag::Dataframe);
  REQUIRE(v.frame().ncol() == 2);
  REQUIRE(v.frame().cols[0].first == "V1");
  REQUIRE(v.frame().cols[0].second.num == std::vector<double>{1, 2, 3});
  REQUIRE(v.frame().cols[1].second.num == std::vector<double>{2, 4, 6});

  REQUIRE_THROWS_AS(json_bytes_to_value("[[1,2],[3]]"), Error);
}

TEST_CASE("dataframes export row-wise") {
  FrameData f;
  f.cols.emplace_back("x", number_vector({1, 2}));
  f.cols.emplace_back("s", string_vector({"a", "b"}));
  REQUIRE(value_to_json(Value::dataframe(f)).dump() ==
          R"([{"x":1,"s":"a"},{"x":2,"s":"b"}])");
}

TEST_CASE("malformed shapes are format errors, not crashes") {
  REQUIRE_THROWS_AS(json_bytes_to_value("{ nope"), Error);
  REQUIRE_THROWS_AS(json_bytes_to_value("[1, \"a\"]"), Error);
  REQUIRE_THROWS_AS(json_bytes_to_value("[1, [2]]"), Error);
  REQUIRE_THROWS_AS(json_bytes_to_value(R"([{"a":1},{"b":2}])"), Error);
  REQUIRE_THROWS_AS(json_bytes_to_value(R"({"":1})"), Error);
}

TEST_CASE("json round-trip equals the widened original") {
  std::mt19937_64 rng(20240809);
  testgen::GenOptions opt;
  opt.finite_only = true;        // non-finite covered by the sentinel property
  opt.json_safe_strings = true;  // pure-sentinel string vectors are ambiguous
  opt.allow_empty = false;       // [] re-imports as an empty number vector
  for (int iter = 0; iter < 1000; ++iter) {
    Value v = testgen::random_value(rng, opt);
    std::string bytes = value_to_json(v).dump();
    CAPTURE(bytes);
    Value back = json_bytes_to_value(bytes);
    REQUIRE(deep_equals(back, widen(v)));
  }
}

TEST_CASE("vectors with missing and non-finite elements round-trip") {
  std::mt19937_64 rng(4242);
  testgen::GenOptions opt;
  opt.json_safe_strings = true;
  opt.allow_empty = false;
  for (int iter = 0; iter < 1000; ++iter) {
    VectorData v = testgen::random_vector(rng, opt);
    if (v.size() == 0) continue;
    bool all_na = true;
    for (size_t i = 0; i < v.size(); ++i) all_na = all_na && v.is_na(i);
    if (all_na) v.na[0] = 0;  // an all-null array has no element type
    Value val = Value::vector(v);
    Value back = json_bytes_to_value(value_to_json(val).dump());
    REQUIRE(deep_equals(back, val));
  }
}

TEST_CASE("export is deterministic") {
  std::mt19937_64 rng(5);
  testgen::GenOptions opt;
  for (int iter = 0; iter < 50; ++iter) {
    Value v = testgen::random_value(rng, opt);
    REQUIRE(value_to_json(v).dump() == value_to_json(v).dump());
  }
}
