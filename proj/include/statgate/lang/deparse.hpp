#pragma once

#include <string>

#include "statgate/formats/number_format.hpp"
#include "statgate/lang/ast.hpp"
#include "statgate/value.hpp"

namespace statgate::lang {

namespace detail {

inline int binary_op_prec(const std::string& op) {
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" || op == "!=") return 1;
  if (op == "+" || op == "-") return 2;
  if (op == "*" || op == "/") return 3;
  if (op == "^") return 4;
  return -1;
}

constexpr int kUnaryPrec = 5;
constexpr int kCallPrec = 6;
constexpr int kAtomPrec = 7;

inline std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string render(const Expr& e, int context_prec);

inline std::string render_call(const Expr& e, int context_prec) {
  if (e.callee->kind == Expr::Kind::Ident) {
    const std::string& op = e.callee->text;
    int prec = binary_op_prec(op);
    bool unnamed = true;
    for (const auto& a : e.args) unnamed = unnamed && a.name.empty();
    if (prec > 0 && e.args.size() == 2 && unnamed) {
      bool right_assoc = op == "^";
      std::string lhs = render(*e.args[0].value, prec + (right_assoc ? 1 : 0));
      std::string rhs = render(*e.args[1].value, prec + (right_assoc ? 0 : 1));
      std::string text = op == "^" ? lhs + "^" + rhs : lhs + " " + op + " " + rhs;
      if (prec < context_prec) return "(" + text + ")";
      return text;
    }
    if (op == "-" && e.args.size() == 1 && unnamed) {
      std::string text = "-" + render(*e.args[0].value, kUnaryPrec);
      if (kUnaryPrec < context_prec) return "(" + text + ")";
      return text;
    }
  }
  std::string out = render(*e.callee, kCallPrec) + "(";
  for (size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ", ";
    if (!e.args[i].name.empty()) out += e.args[i].name + " = ";
    out += render(*e.args[i].value, 0);
  }
  out += ")";
  return out;
}

inline std::string render(const Expr& e, int context_prec) {
  switch (e.kind) {
    case Expr::Kind::Number: return formats::format_number_roundtrip(e.number);
    case Expr::Kind::String: return quote_string(e.text);
    case Expr::Kind::Logical: return e.logical ? "TRUE" : "FALSE";
    case Expr::Kind::Na: return "NA";
    case Expr::Kind::Nan: return "NaN";
    case Expr::Kind::Inf: return "Inf";
    case Expr::Kind::Null: return "NULL";
    case Expr::Kind::Ident: return e.text;
    case Expr::Kind::Call: return render_call(e, context_prec);
    case Expr::Kind::Assign:
      return e.assign_name + " <- " + render(*e.assign_value, 0);
  }
  return "";
}

}  // namespace detail

// Canonical source text; reparsing it yields a structurally equal AST.
inline std::string deparse(const Expr& e) { return detail::render(e, 0); }

// Renders a value as (pseudo-)source. Atomic values and dataframes are
// valid language text; lists have no literal syntax and render through a
// descriptive list(...) form.
inline std::string deparse_value(const Value& v) {
  switch (v.tag()) {
    case Tag::Null: return "NULL";
    case Tag::Logical: {
      const auto& s = v.logical_scalar();
      return s.na ? "NA" : (s.value ? "TRUE" : "FALSE");
    }
    case Tag::Number: {
      const auto& s = v.number_scalar();
      return s.na ? "NA" : formats::format_number_roundtrip(s.value);
    }
    case Tag::String: return detail::quote_string(v.string_scalar());
    case Tag::Vector: {
      const auto& vec = v.vec();
      std::string out = "c(";
      for (size_t i = 0; i < vec.size(); ++i) {
        if (i) out += ", ";
        if (vec.is_na(i)) {
          out += "NA";
        } else {
          switch (vec.type) {
            case ElemType::Logical: out += vec.log[i] ? "TRUE" : "FALSE"; break;
            case ElemType::Number: out += formats::format_number_roundtrip(vec.num[i]); break;
            case ElemType::String: out += detail::quote_string(vec.str[i]); break;
          }
        }
      }
      return out + ")";
    }
    case Tag::List: {
      std::string out = "list(";
      const auto& items = v.list_data().items;
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].first + " = " + deparse_value(items[i].second);
      }
      return out + ")";
    }
    case Tag::Dataframe: {
      std::string out = "data_frame(";
      const auto& cols = v.frame().cols;
      for (size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ", ";
        out += cols[i].first + " = " +
               deparse_value(Value::vector(VectorData(cols[i].second)));
      }
      return out + ")";
    }
    case Tag::Function: {
      const auto& f = v.func();
      if (f.is_builtin()) return f.builtin;
      std::string out = "function(";
      for (size_t i = 0; i < f.params.size(); ++i) {
        if (i) out += ", ";
        out += f.params[i].name;
        if (f.params[i].default_expr)
          out += " = " + deparse(*f.params[i].default_expr);
      }
      out += ") ";
      out += f.body ? deparse(*f.body) : "NULL";
      return out;
    }
    case Tag::Graphic: return "<graphic>";
  }
  return "";
}

}  // namespace statgate::lang
