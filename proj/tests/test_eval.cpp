#include "statgate/lang/eval.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers/eval_helpers.hpp"

using namespace statgate;
using testeval::Session;
using testeval::eval1;

namespace {

std::vector<double> nums(const Value& v) {
  REQUIRE(v.tag() == Tag::Vector);
  REQUIRE(v.vec().type == ElemType::Number);
  return v.vec().num;
}

double num(const Value& v) {
  REQUIRE(v.tag() == Tag::Number);
  REQUIRE_FALSE(v.number_scalar().na);
  return v.number_scalar().value;
}

}  // namespace

TEST_CASE("arithmetic basics") {
  REQUIRE(num(eval1("1 + 2")) == 3.0);
  REQUIRE(num(eval1("2 * 3 + 4")) == 10.0);
  REQUIRE(num(eval1("2 ^ 10")) == 1024.0);
  REQUIRE(num(eval1("-2^2")) == 4.0);  // unary minus binds tighter than power
  REQUIRE(num(eval1("sum(c(1, 2, 3))")) == 6.0);
}

TEST_CASE("division follows ieee semantics") {
  REQUIRE(num(eval1("1 / 0")) == std::numeric_limits<double>::infinity());
  REQUIRE(num(eval1("-1 / 0")) == -std::numeric_limits<double>::infinity());
  REQUIRE(std::isnan(num(eval1("0 / 0"))));
}

TEST_CASE("NA propagates through aggregation unless removed") {
  Value na = eval1("mean(c(1, 2, NA))");
  REQUIRE(na.tag() == Tag::Number);
  REQUIRE(na.number_scalar().na);
  REQUIRE(num(eval1("mean(c(1, 2, NA), na_rm = TRUE)")) == 1.5);
}

TEST_CASE("NA and NaN are distinct in evaluation") {
  Value v = eval1("c(NA, NaN)");
  REQUIRE(v.vec().is_na(0));
  REQUIRE_FALSE(v.vec().is_na(1));
  REQUIRE(std::isnan(v.vec().num[1]));

  Value is = eval1("is_na(c(NA, NaN, 1))");
  REQUIRE(is.vec().log == std::vector<uint8_t>{1, 0, 0});
}

TEST_CASE("rnorm reproduces the reference pipeline") {
  // Frozen from tests/oracles/rng_reference.py: splitmix64-seeded
  // xoshiro256++, 53-bit uniforms, one normal per uniform pair.
  Session s;
  s.eval("set_seed(42)");
  auto v = nums(s.eval("rnorm(3)"));
  REQUIRE(v.size() == 3);
  REQUIRE(v[0] == Catch::Approx(-0.7689930538210061).epsilon(1e-15));
  REQUIRE(v[1] == Catch::Approx(-0.8684461074702454).epsilon(1e-15));
  REQUIRE(v[2] == Catch::Approx(-1.5109749830006707).epsilon(1e-15));

  Session s2;
  s2.eval("set_seed(1)");
  auto w = nums(s2.eval("rnorm(2)"));
  REQUIRE(w[0] == Catch::Approx(-0.03323709594059198).epsilon(1e-15));
  REQUIRE(w[1] == Catch::Approx(-0.01091916499162517).epsilon(1e-15));

  Session s3;
  s3.eval("set_seed(7)");
  auto u = nums(s3.eval("runif(3)"));
  REQUIRE(u[0] == Catch::Approx(0.05536043647833311).epsilon(1e-15));
  REQUIRE(u[1] == Catch::Approx(0.17211585444811772).epsilon(1e-15));
  REQUIRE(u[2] == Catch::Approx(0.7175761283586594).epsilon(1e-15));
}

TEST_CASE("rnorm applies mean and sd") {
  Session a, b;
  a.eval("set_seed(5)");
  b.eval("set_seed(5)");
  auto raw = nums(a.eval("rnorm(4)"));
  auto shifted = nums(b.eval("rnorm(4, mean = 10, sd = 2)"));
  for (size_t i = 0; i < raw.size(); ++i)
    REQUIRE(shifted[i] == Catch::Approx(10 + 2 * raw[i]).margin(1e-12));
}

TEST_CASE("NA propagation property over operators") {
  std::mt19937_64 rng(99);
  const char* ops[] = {"+", "-", "*", "/", "^", "<", ">", "<=", ">=", "==", "!="};
  for (int iter = 0; iter < 1000; ++iter) {
    size_t n = 1 + rng() % 6;
    VectorData a = number_vector({}), b = number_vector({});
    for (size_t i = 0; i < n; ++i) {
      a.na.push_back(rng() % 4 == 0 ? 1 : 0);
      a.num.push_back(std::uniform_real_distribution<double>(-5, 5)(rng));
      b.na.push_back(rng() % 4 == 0 ? 1 : 0);
      b.num.push_back(std::uniform_real_distribution<double>(-5, 5)(rng));
    }
    const char* op = ops[iter % std::size(ops)];
    Session s;
    s.ctx.locals()->assign("a", Value::vector(a));
    s.ctx.locals()->assign("b", Value::vector(b));
    Value out = s.eval(std::string("a ") + op + " b");
    REQUIRE(out.tag() == Tag::Vector);
    REQUIRE(out.vec().size() == n);
    for (size_t i = 0; i < n; ++i) {
      CAPTURE(op, i);
      if (a.na[i] || b.na[i]) REQUIRE(out.vec().is_na(i));
    }
  }
}

TEST_CASE("aggregations match a brute-force filter oracle") {
  std::mt19937_64 rng(1234);
  for (int iter = 0; iter < 400; ++iter) {
    size_t n = 1 + rng() % 10;
    VectorData v = number_vector({});
    bool any_na = false;
    std::vector<double> kept;
    for (size_t i = 0; i < n; ++i) {
      bool na = rng() % 4 == 0;
      any_na = any_na || na;
      double x = std::uniform_real_distribution<double>(-100, 100)(rng);
      v.na.push_back(na ? 1 : 0);
      v.num.push_back(na ? 0 : x);
      if (!na) kept.push_back(x);
    }
    Session s;
    s.ctx.locals()->assign("v", Value::vector(v));

    const char* aggs[] = {"sum", "mean", "sd", "min", "max"};
    for (const char* agg : aggs) {
      CAPTURE(agg, iter);
      Value with_na = s.eval(std::string(agg) + "(v)");
      if (any_na) {
        REQUIRE(with_na.number_scalar().na);
      } else {
        REQUIRE_FALSE(with_na.number_scalar().na);
      }
      Value rm = s.eval(std::string(agg) + "(v, na_rm = TRUE)");
      REQUIRE_FALSE(rm.number_scalar().na);
      double got = rm.number_scalar().value;

      // oracle: aggregate the kept subset directly
      if (kept.empty()) {
        if (std::string(agg) == "sum") REQUIRE(got == 0.0);
        if (std::string(agg) == "mean" || std::string(agg) == "sd")
          REQUIRE(std::isnan(got));
        if (std::string(agg) == "min")
          REQUIRE(got == std::numeric_limits<double>::infinity());
        if (std::string(agg) == "max")
          REQUIRE(got == -std::numeric_limits<double>::infinity());
        continue;
      }
      double osum = 0;
      for (double d : kept) osum += d;
      double omean = osum / static_cast<double>(kept.size());
      double omin = kept[0], omax = kept[0];
      for (double d : kept) {
        omin = std::min(omin, d);
        omax = std::max(omax, d);
      }
      if (std::string(agg) == "sum") REQUIRE(got == Catch::Approx(osum).margin(1e-9));
      if (std::string(agg) == "mean") REQUIRE(got == Catch::Approx(omean).margin(1e-9));
      if (std::string(agg) == "min") REQUIRE(got == omin);
      if (std::string(agg) == "max") REQUIRE(got == omax);
      if (std::string(agg) == "sd") {
        if (kept.size() == 1) {
          REQUIRE(std::isnan(got));
        } else {
          double ss = 0;
          for (double d : kept) ss += (d - omean) * (d - omean);
          double osd = std::sqrt(ss / (static_cast<double>(kept.size()) - 1));
          REQUIRE(got == Catch::Approx(osd).margin(1e-9));
        }
      }
    }
  }
}

// Independent route: solve the normal equations with Cramer's rule for
// p <= 3 unknowns.
namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

std::vector<double> cramer_solve(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b) {
  size_t p = A.size();
  if (p == 1) return {b[0] / A[0][0]};
  if (p == 2) {
    double d = det2(A[0][0], A[0][1], A[1][0], A[1][1]);
    return {det2(b[0], A[0][1], b[1], A[1][1]) / d,
            det2(A[0][0], b[0], A[1][0], b[1]) / d};
  }
  auto det3 = [](const std::vector<std::vector<double>>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double d = det3(A);
  std::vector<double> out(3);
  for (size_t c = 0; c < 3; ++c) {
    auto m = A;
    for (size_t r = 0; r < 3; ++r) m[r][c] = b[r];
    out[c] = det3(m) / d;
  }
  return out;
}

}  // namespace

TEST_CASE("lsfit matches the normal-equations oracle on full-rank inputs") {
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 100; ++iter) {
    size_t ncols = 1 + rng() % 2;  // p = 2 or 3 with intercept
    size_t n = ncols + 2 + rng() % 8;
    std::vector<std::vector<double>> xcols(ncols, std::vector<double>(n));
    std::vector<double> y(n);
    for (size_t r = 0; r < n; ++r) {
      for (auto& col : xcols)
        col[r] = std::uniform_real_distribution<double>(-10, 10)(rng);
      y[r] = std::uniform_real_distribution<double>(-10, 10)(rng);
    }

    Session s;
    FrameData xframe;
    for (size_t c = 0; c < ncols; ++c)
      xframe.cols.emplace_back("V" + std::to_string(c + 1), number_vector(xcols[c]));
    s.ctx.locals()->assign("x", Value::dataframe(xframe));
    s.ctx.locals()->assign("y", Value::vector(number_vector(y)));
    Value fit = s.eval("lsfit(x, y)");
    REQUIRE(fit.tag() == Tag::List);
    const Value* coef = nullptr;
    for (const auto& [k, v] : fit.list_data().items)
      if (k == "coefficients") coef = &v;
    REQUIRE(coef != nullptr);
    auto got = coef->vec().num;

    // oracle: X'X t = X'y with an explicit intercept column, by Cramer
    size_t p = ncols + 1;
    std::vector<std::vector<double>> design(p, std::vector<double>(n, 1.0));
    for (size_t c = 0; c < ncols; ++c) design[c + 1] = xcols[c];
    std::vector<std::vector<double>> A(p, std::vector<double>(p, 0));
    std::vector<double> b(p, 0);
    for (size_t i = 0; i < p; ++i) {
      for (size_t j = 0; j < p; ++j)
        for (size_t r = 0; r < n; ++r) A[i][j] += design[i][r] * design[j][r];
      for (size_t r = 0; r < n; ++r) b[i] += design[i][r] * y[r];
    }
    auto expected = cramer_solve(A, b);
    REQUIRE(got.size() == expected.size());
    for (size_t i = 0; i < p; ++i) {
      CAPTURE(iter, i);
      REQUIRE(got[i] == Catch::Approx(expected[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("lsfit reports rank deficiency on collinear columns") {
  Session s;
  // two perfectly collinear columns
  FrameData x;
  x.cols.emplace_back("a", number_vector({1, 2, 3}));
  x.cols.emplace_back("b", number_vector({2, 4, 6}));
  s.ctx.locals()->assign("x", Value::dataframe(x));
  s.ctx.locals()->assign("y", Value::vector(number_vector({1, 2, 3})));
  try {
    s.eval("lsfit(x, y)");
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Numeric);
    REQUIRE(e.message().find("rank deficient") != std::string::npos);
  }
}

TEST_CASE("oversized allocations hit the cell budget, not host memory") {
  Session s(0, 10'000'000);
  try {
    s.eval("rep(0, 10^12)");
    FAIL("expected a resource error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Resource);
    REQUIRE(e.message().find("cell limit") != std::string::npos);
  }
  // the context stays usable state-wise, and no giant vector exists
  REQUIRE(s.ctx.budget().cells_used >= 1'000'000'000'000ull);
}

TEST_CASE("deadline is enforced during long evaluations") {
  Session s(0, 1'000'000'000, std::chrono::milliseconds(60));
  try {
    // enough draws to take well over the deadline
    for (int i = 0; i < 1000; ++i) s.eval("sum(rnorm(400000))");
    FAIL("expected a resource error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Resource);
    REQUIRE(e.message().find("time limit") != std::string::npos);
  }
}

TEST_CASE("scripts evaluate in order and export assignments") {
  Session s;
  auto r = s.run("x <- 1\ny <- x + 1");
  REQUIRE(r.delta.size() == 2);
  REQUIRE(r.delta[0].first == "x");
  REQUIRE(num(r.delta[0].second) == 1.0);
  REQUIRE(r.delta[1].first == "y");
  REQUIRE(num(r.delta[1].second) == 2.0);
  REQUIRE(s.ctx.stdout_buf().empty());
}

TEST_CASE("print echoes once and the value lands in .val") {
  Session s;
  auto r = s.run("print(2+2)");
  REQUIRE(s.ctx.stdout_buf() == "[1] 4\n");
  REQUIRE(r.delta.size() == 1);
  REQUIRE(r.delta[0].first == ".val");
  REQUIRE(num(r.delta[0].second) == 4.0);
}

TEST_CASE("visible expression statements echo to stdout") {
  Session s;
  auto r = s.run("x <- 2\nx + 1");
  REQUIRE(s.ctx.stdout_buf() == "[1] 3\n");
  REQUIRE(r.delta.back().first == ".val");
}

TEST_CASE("a trailing assignment leaves no .val") {
  Session s;
  auto r = s.run("1 + 1\nx <- 5");
  for (const auto& [k, v] : r.delta) REQUIRE(k != ".val");
}

TEST_CASE("errors abort the script") {
  Session s;
  REQUIRE_THROWS_AS(s.run("x <- 1\nstopifnot(1)\ny <- 2"), Error);
  // the caller discards the partial state; nothing was exported
}

TEST_CASE("call_function matches positional then named with defaults") {
  Session s;
  const Value* rnorm = s.ctx.base()->find("rnorm");
  REQUIRE(rnorm);
  s.eval("set_seed(5)");
  Value a = s.interp.call_function(*rnorm, {{"", Value::number(2)}}, "rnorm");
  REQUIRE(a.vec().size() == 2);

  // user function with a default
  FunctionData f;
  f.params = {{"a", nullptr}, {"b", lang::parse_single_expression("10")}};
  f.body = lang::parse_single_expression("a + b");
  Value fv = Value::function(f);
  Value r = s.interp.call_function(fv, {{"", Value::number(5)}}, "f");
  REQUIRE(num(r) == 15.0);
  Value r2 = s.interp.call_function(
      fv, {{"b", Value::number(1)}, {"", Value::number(5)}}, "f");
  REQUIRE(num(r2) == 6.0);

  REQUIRE_THROWS_AS(s.interp.call_function(fv, {}, "f"), Error);
  REQUIRE_THROWS_AS(
      s.interp.call_function(fv, {{"zz", Value::number(1)}}, "f"), Error);
}

TEST_CASE("determinism: equal seeds give deep-equal results and identical stdout") {
  const std::string script =
      "set_seed(99)\n"
      "x <- rnorm(20)\n"
      "y <- runif(20)\n"
      "print(mean(x))\n"
      "plot(x, y)\n"
      "sort(x)";
  Session a(123), b(123);
  auto ra = a.run(script);
  auto rb = b.run(script);
  REQUIRE(ra.delta.size() == rb.delta.size());
  for (size_t i = 0; i < ra.delta.size(); ++i) {
    REQUIRE(ra.delta[i].first == rb.delta[i].first);
    REQUIRE(deep_equals(ra.delta[i].second, rb.delta[i].second));
  }
  REQUIRE(a.ctx.stdout_buf() == b.ctx.stdout_buf());
  auto ga = a.ctx.device().take();
  auto gb = b.ctx.device().take();
  REQUIRE(ga.size() == 1);
  REQUIRE(ga == gb);
}

TEST_CASE("misc builtins") {
  REQUIRE(num(eval1("length(c(1, 2, 3))")) == 3.0);
  REQUIRE(num(eval1("length(NULL)")) == 0.0);
  REQUIRE(nums(eval1("rev(c(1, 2, 3))")) == std::vector<double>{3, 2, 1});
  REQUIRE(nums(eval1("head(seq(1, 100), n = 3)")) == std::vector<double>{1, 2, 3});
  REQUIRE(nums(eval1("seq(4)")) == std::vector<double>{1, 2, 3, 4});
  REQUIRE(nums(eval1("seq(1, 2, 0.5)")) == std::vector<double>{1, 1.5, 2});
  REQUIRE(nums(eval1("sort(c(3, 1, NA, 2))")) == std::vector<double>{1, 2, 3});
  REQUIRE(nums(eval1("sort(c(1, 3, 2), decreasing = TRUE)")) ==
          std::vector<double>{3, 2, 1});
  REQUIRE(eval1("paste(\"a\", 1, sep = \"-\")").vec().str ==
          std::vector<std::string>{"a-1"});
  REQUIRE(eval1("paste(c(\"x\", \"y\"), c(1, 2), collapse = \"+\")").string_scalar() ==
          "x 1+y 2");
  REQUIRE(num(eval1("nrow(data_frame(a = c(1, 2)))")) == 2.0);
  REQUIRE(num(eval1("ncol(data_frame(a = c(1, 2), b = c(3, 4)))")) == 2.0);
  REQUIRE(eval1("names(data_frame(a = 1, b = 2))").vec().str ==
          std::vector<std::string>{"a", "b"});
  REQUIRE(eval1("nrow(c(1, 2))").is_null());

  Value cmp = eval1("c(1, 5) < c(2, 2)");
  REQUIRE(cmp.vec().log == std::vector<uint8_t>{1, 0});
  Value se = eval1("\"a\" == \"a\"");
  REQUIRE(se.logical_scalar().value);
}

TEST_CASE("errors carry useful kinds") {
  REQUIRE_THROWS_AS(eval1("unknown_fn(1)"), Error);
  try {
    eval1("unknown_fn(1)");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Eval);
  }
  try {
    eval1("sum(\"a\")");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Eval);
  }
  try {
    testeval::Session s;
    s.run("f(");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("scalar and vector shapes through operators") {
  REQUIRE(num(eval1("1 + 2")) == 3.0);  // scalar op scalar stays scalar
  Value v = eval1("c(1, 2) + 1");
  REQUIRE(v.tag() == Tag::Vector);
  REQUIRE(v.vec().num == std::vector<double>{2, 3});
  REQUIRE_THROWS_AS(eval1("c(1, 2) + c(1, 2, 3)"), Error);
}
