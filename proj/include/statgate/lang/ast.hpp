#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace statgate::lang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// AST of the embedded language. Operators are desugared by the parser
// into calls on the builtin operator functions ("+", "<", unary "-" as a
// one-argument "-" call), so evaluation only ever sees literals,
// identifiers, calls, and top-level assignments.
struct Expr {
  enum class Kind {
    Number,
    String,
    Logical,
    Na,
    Nan,
    Inf,
    Null,
    Ident,
    Call,
    Assign,
  };

  struct Arg {
    std::string name;  // empty for positional
    ExprPtr value;
  };

  Kind kind = Kind::Null;
  double number = 0.0;
  bool logical = false;
  std::string text;  // string literal or identifier name
  ExprPtr callee;
  std::vector<Arg> args;
  std::string assign_name;
  ExprPtr assign_value;

  int line = 0;
  int col = 0;
  // Byte span in the source the statement was parsed from; used to echo
  // script lines verbatim in the console view.
  size_t src_begin = 0;
  size_t src_end = 0;
};

inline ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

inline bool expr_equals(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: {
      if (std::isnan(a.number) && std::isnan(b.number)) return true;
      return a.number == b.number;
    }
    case Expr::Kind::String:
    case Expr::Kind::Ident:
      return a.text == b.text;
    case Expr::Kind::Logical:
      return a.logical == b.logical;
    case Expr::Kind::Na:
    case Expr::Kind::Nan:
    case Expr::Kind::Inf:
    case Expr::Kind::Null:
      return true;
    case Expr::Kind::Call: {
      if (!expr_equals(*a.callee, *b.callee)) return false;
      if (a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i].name != b.args[i].name) return false;
        if (!expr_equals(*a.args[i].value, *b.args[i].value)) return false;
      }
      return true;
    }
    case Expr::Kind::Assign:
      return a.assign_name == b.assign_name &&
             expr_equals(*a.assign_value, *b.assign_value);
  }
  return false;
}

inline bool expr_equals(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equals(*a, *b);
}

}  // namespace statgate::lang
