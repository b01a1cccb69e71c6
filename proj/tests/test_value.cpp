#include "statgate/value.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "statgate/lang/parser.hpp"

#include <cmath>
#include <random>

#include "helpers/random_values.hpp"

using namespace statgate;

static VectorData num_vec_with_na(std::vector<double> xs, std::vector<uint8_t> na) {
  VectorData v = number_vector(std::move(xs));
  v.na = std::move(na);
  return v;
}

TEST_CASE("NA equals NA, NaN equals NaN, and they differ") {
  Value na = Value::number_na();
  Value nan = Value::number(std::nan(""));
  REQUIRE(deep_equals(na, na));
  REQUIRE(deep_equals(nan, nan));
  REQUIRE_FALSE(deep_equals(na, nan));
  REQUIRE_FALSE(deep_equals(nan, na));

  // the same distinction holds inside vectors
  Value v_na = Value::vector(num_vec_with_na({0.0}, {1}));
  Value v_nan = Value::vector(number_vector({std::nan("")}));
  REQUIRE(deep_equals(v_na, v_na));
  REQUIRE(deep_equals(v_nan, v_nan));
  REQUIRE_FALSE(deep_equals(v_na, v_nan));
}

TEST_CASE("negative zero equals positive zero") {
  REQUIRE(deep_equals(Value::number(-0.0), Value::number(0.0)));
}

TEST_CASE("structural equality over dataframes") {
  FrameData a;
  a.cols.emplace_back("x", number_vector({1, 2}));
  FrameData b;
  b.cols.emplace_back("x", number_vector({1, 2}));
  REQUIRE(deep_equals(Value::dataframe(a), Value::dataframe(b)));

  FrameData c;
  c.cols.emplace_back("y", number_vector({1, 2}));
  REQUIRE_FALSE(deep_equals(Value::dataframe(a), Value::dataframe(c)));

  FrameData d;
  d.cols.emplace_back("x", number_vector({1, 3}));
  REQUIRE_FALSE(deep_equals(Value::dataframe(a), Value::dataframe(d)));
}

TEST_CASE("vectors of different element type never compare equal") {
  Value num = Value::vector(number_vector({}));
  Value str = Value::vector(string_vector({}));
  REQUIRE_FALSE(deep_equals(num, str));
}

TEST_CASE("list names must be unique and non-empty") {
  ListData bad;
  bad.items.emplace_back("a", Value::number(1));
  bad.items.emplace_back("a", Value::number(2));
  REQUIRE_THROWS_AS(Value::list(std::move(bad)), Error);

  ListData unnamed;
  unnamed.items.emplace_back("", Value::number(1));
  REQUIRE_THROWS_AS(Value::list(std::move(unnamed)), Error);
}

TEST_CASE("dataframe columns must have identical length") {
  FrameData f;
  f.cols.emplace_back("x", number_vector({1, 2}));
  f.cols.emplace_back("y", number_vector({1}));
  REQUIRE_THROWS_AS(Value::dataframe(std::move(f)), Error);
}

TEST_CASE("deep_equals is reflexive, symmetric, transitive on random values") {
  std::mt19937_64 rng(20240801);
  testgen::GenOptions opt;
  for (int i = 0; i < 300; ++i) {
    Value a = testgen::random_value(rng, opt);
    REQUIRE(deep_equals(a, a));

    Value b = a;  // shared-payload copy
    REQUIRE(deep_equals(a, b));
    REQUIRE(deep_equals(b, a));

    Value c = testgen::random_value(rng, opt);
    if (deep_equals(a, c)) {
      REQUIRE(deep_equals(c, a));
      REQUIRE(deep_equals(b, c));
    }
  }
}

TEST_CASE("functions compare by parameter list and body") {
  auto body1 = lang::parse_single_expression("a + b");
  auto body2 = lang::parse_single_expression("a + b");
  auto body3 = lang::parse_single_expression("a - b");

  FunctionData f1;
  f1.params = {{"a", nullptr}, {"b", nullptr}};
  f1.body = body1;
  FunctionData f2;
  f2.params = {{"a", nullptr}, {"b", nullptr}};
  f2.body = body2;
  FunctionData f3;
  f3.params = {{"a", nullptr}, {"b", nullptr}};
  f3.body = body3;

  REQUIRE(deep_equals(Value::function(f1), Value::function(f2)));
  REQUIRE_FALSE(deep_equals(Value::function(f1), Value::function(f3)));

  FunctionData g = f1;
  g.params = {{"a", nullptr}};
  REQUIRE_FALSE(deep_equals(Value::function(f1), Value::function(g)));
}
