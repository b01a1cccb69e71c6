#include "statgate/lang/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "statgate/lang/deparse.hpp"

using namespace statgate;
using namespace statgate::lang;

static ExprPtr parse1(const std::string& s) {
  auto stmts = parse(s);
  REQUIRE(stmts.size() == 1);
  return stmts[0];
}

TEST_CASE("binary operators desugar to calls") {
  auto e = parse1("1 + 2");
  REQUIRE(e->kind == Expr::Kind::Call);
  REQUIRE(e->callee->kind == Expr::Kind::Ident);
  REQUIRE(e->callee->text == "+");
  REQUIRE(e->args.size() == 2);
  REQUIRE(e->args[0].value->number == 1.0);
  REQUIRE(e->args[1].value->number == 2.0);
}

TEST_CASE("assignment only at top level") {
  auto e = parse1("x <- c(1, NA, 3)");
  REQUIRE(e->kind == Expr::Kind::Assign);
  REQUIRE(e->assign_name == "x");
  REQUIRE(e->assign_value->kind == Expr::Kind::Call);
  REQUIRE(e->assign_value->callee->text == "c");
  REQUIRE(e->assign_value->args.size() == 3);
  REQUIRE(e->assign_value->args[1].value->kind == Expr::Kind::Na);

  REQUIRE_THROWS_AS(parse("f(x <- 1)"), Error);
}

TEST_CASE("unbalanced delimiters report line numbers") {
  try {
    parse("f(");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Parse);
    REQUIRE(e.line() == 1);
  }
  try {
    parse("x <- 1\ny <- (2 +\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Parse);
    REQUIRE(e.line() >= 2);
  }
}

TEST_CASE("precedence: comparison < addition < multiplication < power < unary") {
  REQUIRE(deparse(*parse1("1 + 2 * 3")) == "1 + 2 * 3");
  REQUIRE(deparse(*parse1("(1 + 2) * 3")) == "(1 + 2) * 3");
  REQUIRE(deparse(*parse1("1 + 2 < 3 * 4")) == "1 + 2 < 3 * 4");

  // unary minus binds tighter than power
  auto e = parse1("-2^2");
  REQUIRE(e->callee->text == "^");
  REQUIRE(e->args[0].value->callee->text == "-");

  // power is right-associative
  REQUIRE(deparse(*parse1("2^3^2")) == "2^3^2");
  auto p = parse1("2^3^2");
  REQUIRE(p->args[1].value->kind == Expr::Kind::Call);
}

TEST_CASE("named arguments") {
  auto e = parse1("rnorm(n = 3, sd = 2)");
  REQUIRE(e->args.size() == 2);
  REQUIRE(e->args[0].name == "n");
  REQUIRE(e->args[1].name == "sd");
}

TEST_CASE("newlines inside calls continue the statement") {
  auto stmts = parse("c(1,\n   2,\n   3)");
  REQUIRE(stmts.size() == 1);
  REQUIRE(stmts[0]->args.size() == 3);
}

TEST_CASE("comments and semicolons") {
  auto stmts = parse("x <- 1  # a comment\ny <- 2; z <- 3");
  REQUIRE(stmts.size() == 3);
}

TEST_CASE("literals") {
  REQUIRE(parse1("NA")->kind == Expr::Kind::Na);
  REQUIRE(parse1("NaN")->kind == Expr::Kind::Nan);
  REQUIRE(parse1("Inf")->kind == Expr::Kind::Inf);
  REQUIRE(parse1("NULL")->kind == Expr::Kind::Null);
  REQUIRE(parse1("TRUE")->logical == true);
  REQUIRE(parse1("\"a\\\"b\\n\"")->text == "a\"b\n");
  REQUIRE(parse1(".5")->number == 0.5);
  REQUIRE(parse1("1e+12")->number == 1e12);
  REQUIRE(parse1(".val")->kind == Expr::Kind::Ident);
}

TEST_CASE("statement spans cover the source text") {
  std::string src = "x <- 1\nprint(x +\n  2)";
  auto stmts = parse(src);
  REQUIRE(stmts.size() == 2);
  REQUIRE(src.substr(stmts[0]->src_begin, stmts[0]->src_end - stmts[0]->src_begin) ==
          "x <- 1");
  REQUIRE(src.substr(stmts[1]->src_begin, stmts[1]->src_end - stmts[1]->src_begin) ==
          "print(x +\n  2)");
}

TEST_CASE("deparse round-trips a golden corpus") {
  const char* corpus[] = {
      "1 + 2",
      "x <- c(1, NA, 3)",
      "mean(c(1, 2, NA), na_rm = TRUE)",
      "rnorm(n = 3)",
      "-2^2",
      "2^-3",
      "(1 + 2) * (3 - 4) / 5",
      "sort(c(\"b\", \"a\"), decreasing = TRUE)",
      "f(g(h(1)), 2)",
      "x <- 1 - -2",
      "paste(\"a\", \"b\", sep = \"-\")",
      "seq(1, 10, 0.5)",
      "c(TRUE, FALSE, NA)",
      "1 / 0 == Inf",
      "x <- NULL",
      "lsfit(x = data_frame(a = c(1, 2)), y = c(3, 4))",
      "head(rev(sort(c(3.25, 1e+06, 0.125))), n = 2)",
  };
  for (const char* src : corpus) {
    CAPTURE(src);
    auto first = parse(src);
    REQUIRE(first.size() == 1);
    std::string printed = deparse(*first[0]);
    auto second = parse(printed);
    REQUIRE(second.size() == 1);
    REQUIRE(expr_equals(*first[0], *second[0]));
    // deparse is a fixed point after one round
    REQUIRE(deparse(*second[0]) == printed);
  }
}
