#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/lang/ast.hpp"
#include "statgate/lang/lexer.hpp"

namespace statgate::lang {

// Recursive-descent parser. Assignment is a statement form, not an
// expression, so `<-` can only appear at script top level. Operators
// desugar into calls on the builtin operator functions.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(Lexer(src).tokens()) {}

  std::vector<ExprPtr> statements() {
    std::vector<ExprPtr> out;
    skip_separators();
    while (!at(Token::Kind::End)) {
      out.push_back(statement());
      if (!at(Token::Kind::End) && !at(Token::Kind::Newline) && !at(Token::Kind::Semicolon))
        throw unexpected("end of statement");
      skip_separators();
    }
    return out;
  }

 private:
  ExprPtr statement() {
    size_t begin_off = peek().offset;
    ExprPtr node;
    if (at(Token::Kind::Ident) && toks_[pos_ + 1].kind == Token::Kind::Arrow) {
      Token name = advance();
      advance();  // <-
      Expr e;
      e.kind = Expr::Kind::Assign;
      e.assign_name = name.text;
      e.assign_value = expression(0);
      e.line = name.line;
      e.col = name.col;
      node = make_expr(std::move(e));
    } else {
      node = expression(0);
    }
    size_t end_off = pos_ > 0 ? toks_[pos_ - 1].end_offset : begin_off;
    Expr spanned = *node;
    spanned.src_begin = begin_off;
    spanned.src_end = end_off;
    return make_expr(std::move(spanned));
  }

  // precedence: comparison < addition < multiplication < power < unary < call
  ExprPtr expression(int depth) { return comparison(depth); }

  ExprPtr comparison(int depth) {
    guard(depth);
    ExprPtr lhs = addition(depth + 1);
    while (true) {
      const char* op = nullptr;
      switch (peek().kind) {
        case Token::Kind::Lt: op = "<"; break;
        case Token::Kind::Gt: op = ">"; break;
        case Token::Kind::Le: op = "<="; break;
        case Token::Kind::Ge: op = ">="; break;
        case Token::Kind::EqEq: op = "=="; break;
        case Token::Kind::Ne: op = "!="; break;
        default: return lhs;
      }
      Token t = advance();
      lhs = binary_call(op, std::move(lhs), addition(depth + 1), t);
    }
  }

  ExprPtr addition(int depth) {
    guard(depth);
    ExprPtr lhs = multiplication(depth + 1);
    while (at(Token::Kind::Plus) || at(Token::Kind::Minus)) {
      Token t = advance();
      const char* op = t.kind == Token::Kind::Plus ? "+" : "-";
      lhs = binary_call(op, std::move(lhs), multiplication(depth + 1), t);
    }
    return lhs;
  }

  ExprPtr multiplication(int depth) {
    guard(depth);
    ExprPtr lhs = power(depth + 1);
    while (at(Token::Kind::Star) || at(Token::Kind::Slash)) {
      Token t = advance();
      const char* op = t.kind == Token::Kind::Star ? "*" : "/";
      lhs = binary_call(op, std::move(lhs), power(depth + 1), t);
    }
    return lhs;
  }

  ExprPtr power(int depth) {
    guard(depth);
    ExprPtr lhs = unary(depth + 1);
    if (at(Token::Kind::Caret)) {
      Token t = advance();
      return binary_call("^", std::move(lhs), power(depth + 1), t);  // right assoc
    }
    return lhs;
  }

  ExprPtr unary(int depth) {
    guard(depth);
    if (at(Token::Kind::Minus)) {
      Token t = advance();
      Expr call;
      call.kind = Expr::Kind::Call;
      call.callee = ident_expr("-", t);
      call.args.push_back({"", unary(depth + 1)});
      call.line = t.line;
      call.col = t.col;
      return make_expr(std::move(call));
    }
    return postfix(depth + 1);
  }

  ExprPtr postfix(int depth) {
    guard(depth);
    ExprPtr e = atom(depth + 1);
    while (at(Token::Kind::LParen)) {
      Token open = advance();
      Expr call;
      call.kind = Expr::Kind::Call;
      call.callee = e;
      call.line = open.line;
      call.col = open.col;
      if (!at(Token::Kind::RParen)) {
        while (true) {
          call.args.push_back(argument(depth + 1));
          if (at(Token::Kind::Comma)) {
            advance();
            continue;
          }
          break;
        }
      }
      expect(Token::Kind::RParen, "')'");
      e = make_expr(std::move(call));
    }
    return e;
  }

  Expr::Arg argument(int depth) {
    if (at(Token::Kind::Ident) && toks_[pos_ + 1].kind == Token::Kind::Eq) {
      Token name = advance();
      advance();  // =
      return {name.text, expression(depth)};
    }
    return {"", expression(depth)};
  }

  ExprPtr atom(int depth) {
    guard(depth);
    Token t = peek();
    switch (t.kind) {
      case Token::Kind::Number: {
        advance();
        Expr e;
        e.kind = Expr::Kind::Number;
        e.number = t.number;
        e.line = t.line;
        e.col = t.col;
        return make_expr(std::move(e));
      }
      case Token::Kind::String: {
        advance();
        Expr e;
        e.kind = Expr::Kind::String;
        e.text = t.text;
        e.line = t.line;
        e.col = t.col;
        return make_expr(std::move(e));
      }
      case Token::Kind::True:
      case Token::Kind::False: {
        advance();
        Expr e;
        e.kind = Expr::Kind::Logical;
        e.logical = t.kind == Token::Kind::True;
        e.line = t.line;
        e.col = t.col;
        return make_expr(std::move(e));
      }
      case Token::Kind::Na: return literal(Expr::Kind::Na, t);
      case Token::Kind::NaN: return literal(Expr::Kind::Nan, t);
      case Token::Kind::Inf: return literal(Expr::Kind::Inf, t);
      case Token::Kind::Null: return literal(Expr::Kind::Null, t);
      case Token::Kind::Ident: {
        advance();
        return ident_expr(t.text, t);
      }
      case Token::Kind::LParen: {
        advance();
        ExprPtr inner = expression(depth);
        expect(Token::Kind::RParen, "')'");
        return inner;
      }
      default:
        throw unexpected("an expression");
    }
  }

  ExprPtr literal(Expr::Kind kind, const Token& t) {
    advance();
    Expr e;
    e.kind = kind;
    e.line = t.line;
    e.col = t.col;
    return make_expr(std::move(e));
  }

  static ExprPtr ident_expr(std::string name, const Token& t) {
    Expr e;
    e.kind = Expr::Kind::Ident;
    e.text = std::move(name);
    e.line = t.line;
    e.col = t.col;
    return make_expr(std::move(e));
  }

  static ExprPtr binary_call(const char* op, ExprPtr lhs, ExprPtr rhs, const Token& t) {
    Expr call;
    call.kind = Expr::Kind::Call;
    call.callee = ident_expr(op, t);
    call.args.push_back({"", std::move(lhs)});
    call.args.push_back({"", std::move(rhs)});
    call.line = t.line;
    call.col = t.col;
    return make_expr(std::move(call));
  }

  void guard(int depth) const {
    if (depth > 400) throw parse_error("expression too deeply nested", peek().line, peek().col);
  }

  void skip_separators() {
    while (at(Token::Kind::Newline) || at(Token::Kind::Semicolon)) advance();
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at(Token::Kind k) const { return toks_[pos_].kind == k; }

  Token advance() {
    Token t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }

  void expect(Token::Kind k, const char* what) {
    if (!at(k)) throw unexpected(what);
    advance();
  }

  Error unexpected(const char* expected) const {
    const Token& t = peek();
    std::string got;
    switch (t.kind) {
      case Token::Kind::End: got = "end of input"; break;
      case Token::Kind::Newline: got = "end of line"; break;
      default: got = t.text.empty() ? "token" : "'" + t.text + "'"; break;
    }
    return parse_error("expected " + std::string(expected) + ", got " + got, t.line, t.col);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// One expression per top-level statement, in source order.
inline std::vector<ExprPtr> parse(std::string_view source) {
  return Parser(source).statements();
}

// Parses exactly one expression (no assignment); used for code-valued
// request arguments.
inline ExprPtr parse_single_expression(std::string_view source) {
  auto stmts = Parser(source).statements();
  if (stmts.size() != 1) throw parse_error("expected a single expression");
  if (stmts[0]->kind == Expr::Kind::Assign)
    throw parse_error("assignment is not allowed here");
  return stmts[0];
}

}  // namespace statgate::lang
