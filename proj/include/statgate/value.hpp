#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/lang/ast.hpp"
#include "statgate/lang/graphics.hpp"

namespace statgate {

namespace lang {
class Env;
}

enum class Tag {
  Null,
  Logical,
  Number,
  String,
  Vector,
  List,
  Dataframe,
  Function,
  Graphic,
};

inline const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Null: return "null";
    case Tag::Logical: return "logical";
    case Tag::Number: return "number";
    case Tag::String: return "string";
    case Tag::Vector: return "vector";
    case Tag::List: return "list";
    case Tag::Dataframe: return "dataframe";
    case Tag::Function: return "function";
    case Tag::Graphic: return "graphic";
  }
  return "?";
}

enum class ElemType { Logical, Number, String };

inline const char* elem_type_name(ElemType t) {
  switch (t) {
    case ElemType::Logical: return "logical";
    case ElemType::Number: return "number";
    case ElemType::String: return "string";
  }
  return "?";
}

struct LogicalScalar {
  bool na = false;
  bool value = false;
};

struct NumberScalar {
  bool na = false;
  double value = 0.0;
};

class Value;

// Homogeneous vector. `na` is a parallel missing-element mask, so NA is
// representable in logical, number, and string vectors and stays distinct
// from NaN payloads stored in `num`.
struct VectorData {
  ElemType type = ElemType::Number;
  std::vector<uint8_t> na;
  std::vector<uint8_t> log;         // ElemType::Logical
  std::vector<double> num;          // ElemType::Number
  std::vector<std::string> str;     // ElemType::String

  size_t size() const {
    switch (type) {
      case ElemType::Logical: return log.size();
      case ElemType::Number: return num.size();
      case ElemType::String: return str.size();
    }
    return 0;
  }
  bool is_na(size_t i) const { return na[i] != 0; }
};

struct ListData;
struct FrameData;
struct FunctionData;

class Value {
 public:
  Value() : data_(std::monostate{}) {}

  static Value null() { return Value(); }
  static Value logical(bool b) { return Value(LogicalScalar{false, b}); }
  static Value logical_na() { return Value(LogicalScalar{true, false}); }
  static Value number(double d) { return Value(NumberScalar{false, d}); }
  static Value number_na() { return Value(NumberScalar{true, 0.0}); }
  static Value string(std::string s) { return Value(std::move(s)); }
  static Value vector(VectorData v);
  static Value list(ListData l);
  static Value dataframe(FrameData f);
  static Value function(FunctionData f);
  static Value graphic(lang::GraphicsRecording rec);

  Tag tag() const { return static_cast<Tag>(data_.index()); }
  bool is_null() const { return tag() == Tag::Null; }

  const LogicalScalar& logical_scalar() const { return std::get<LogicalScalar>(data_); }
  const NumberScalar& number_scalar() const { return std::get<NumberScalar>(data_); }
  const std::string& string_scalar() const { return std::get<std::string>(data_); }
  const VectorData& vec() const { return *std::get<std::shared_ptr<const VectorData>>(data_); }
  const ListData& list_data() const;
  const FrameData& frame() const;
  const FunctionData& func() const;
  const lang::GraphicsRecording& graphic_rec() const {
    return *std::get<std::shared_ptr<const lang::GraphicsRecording>>(data_);
  }

  // Total number of value cells this value occupies, the unit of the
  // evaluation budget.
  uint64_t cell_count() const;

 private:
  explicit Value(LogicalScalar s) : data_(s) {}
  explicit Value(NumberScalar s) : data_(s) {}
  explicit Value(std::string s) : data_(std::move(s)) {}
  template <typename T>
  explicit Value(std::shared_ptr<const T> p) : data_(std::move(p)) {}

  std::variant<std::monostate, LogicalScalar, NumberScalar, std::string,
               std::shared_ptr<const VectorData>, std::shared_ptr<const ListData>,
               std::shared_ptr<const FrameData>, std::shared_ptr<const FunctionData>,
               std::shared_ptr<const lang::GraphicsRecording>>
      data_;
};

// Ordered name -> value pairs; names unique and non-empty.
struct ListData {
  std::vector<std::pair<std::string, Value>> items;
};

// Ordered name -> column pairs; all columns have identical length.
struct FrameData {
  std::vector<std::pair<std::string, VectorData>> cols;

  size_t nrow() const { return cols.empty() ? 0 : cols.front().second.size(); }
  size_t ncol() const { return cols.size(); }
  const VectorData* find(const std::string& name) const {
    for (const auto& [n, c] : cols)
      if (n == name) return &c;
    return nullptr;
  }
};

struct FunctionData {
  struct Param {
    std::string name;
    lang::ExprPtr default_expr;  // null when the parameter is required
  };

  std::vector<Param> params;
  lang::ExprPtr body;                       // user functions
  std::string builtin;                      // non-empty for builtins
  bool variadic = false;                    // extra arguments are collected
  bool visible = true;                      // console echo of the result
  std::shared_ptr<const lang::Env> env;     // defining namespace (user fns)

  bool is_builtin() const { return !builtin.empty(); }
};

inline Value Value::vector(VectorData v) {
  return Value(std::make_shared<const VectorData>(std::move(v)));
}
inline Value Value::list(ListData l) {
  for (size_t i = 0; i < l.items.size(); ++i) {
    if (l.items[i].first.empty()) throw eval_error("list names must be non-empty");
    for (size_t j = i + 1; j < l.items.size(); ++j)
      if (l.items[i].first == l.items[j].first)
        throw eval_error("duplicate list name '" + l.items[i].first + "'");
  }
  return Value(std::make_shared<const ListData>(std::move(l)));
}
inline Value Value::dataframe(FrameData f) {
  size_t nrow = f.cols.empty() ? 0 : f.cols.front().second.size();
  for (size_t i = 0; i < f.cols.size(); ++i) {
    if (f.cols[i].first.empty()) throw eval_error("dataframe names must be non-empty");
    if (f.cols[i].second.size() != nrow)
      throw eval_error("dataframe columns must have identical length");
    for (size_t j = i + 1; j < f.cols.size(); ++j)
      if (f.cols[i].first == f.cols[j].first)
        throw eval_error("duplicate dataframe column '" + f.cols[i].first + "'");
  }
  return Value(std::make_shared<const FrameData>(std::move(f)));
}
inline Value Value::function(FunctionData f) {
  return Value(std::make_shared<const FunctionData>(std::move(f)));
}
inline Value Value::graphic(lang::GraphicsRecording rec) {
  return Value(std::make_shared<const lang::GraphicsRecording>(std::move(rec)));
}

inline const ListData& Value::list_data() const {
  return *std::get<std::shared_ptr<const ListData>>(data_);
}
inline const FrameData& Value::frame() const {
  return *std::get<std::shared_ptr<const FrameData>>(data_);
}
inline const FunctionData& Value::func() const {
  return *std::get<std::shared_ptr<const FunctionData>>(data_);
}

inline uint64_t Value::cell_count() const {
  switch (tag()) {
    case Tag::Null: return 1;
    case Tag::Logical:
    case Tag::Number:
    case Tag::String: return 1;
    case Tag::Vector: return vec().size();
    case Tag::List: {
      uint64_t n = 1;
      for (const auto& [name, v] : list_data().items) n += v.cell_count();
      return n;
    }
    case Tag::Dataframe: {
      const auto& f = frame();
      return 1 + static_cast<uint64_t>(f.ncol()) * f.nrow();
    }
    case Tag::Function: return 1;
    case Tag::Graphic: return 1;
  }
  return 1;
}

// --- deep structural equality -----------------------------------------

// NA equals NA and NaN equals NaN (storage identity, not the language's
// comparison semantics); -0 equals +0; functions compare by parameter
// list and body, ignoring the defining namespace.
inline bool deep_equals(const Value& a, const Value& b);

namespace detail {

inline bool num_equals(bool na_a, double a, bool na_b, double b) {
  if (na_a || na_b) return na_a == na_b;
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b;
}

inline bool vec_equals(const VectorData& a, const VectorData& b) {
  if (a.type != b.type || a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    switch (a.type) {
      case ElemType::Logical:
        if (a.is_na(i) != b.is_na(i)) return false;
        if (!a.is_na(i) && a.log[i] != b.log[i]) return false;
        break;
      case ElemType::Number:
        if (!num_equals(a.is_na(i), a.num[i], b.is_na(i), b.num[i])) return false;
        break;
      case ElemType::String:
        if (a.is_na(i) != b.is_na(i)) return false;
        if (!a.is_na(i) && a.str[i] != b.str[i]) return false;
        break;
    }
  }
  return true;
}

inline bool func_equals(const FunctionData& a, const FunctionData& b) {
  if (a.builtin != b.builtin) return false;
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name) return false;
    if (!lang::expr_equals(a.params[i].default_expr, b.params[i].default_expr))
      return false;
  }
  return lang::expr_equals(a.body, b.body);
}

}  // namespace detail

inline bool deep_equals(const Value& a, const Value& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Tag::Null: return true;
    case Tag::Logical: {
      const auto& x = a.logical_scalar();
      const auto& y = b.logical_scalar();
      if (x.na || y.na) return x.na == y.na;
      return x.value == y.value;
    }
    case Tag::Number: {
      const auto& x = a.number_scalar();
      const auto& y = b.number_scalar();
      return detail::num_equals(x.na, x.value, y.na, y.value);
    }
    case Tag::String: return a.string_scalar() == b.string_scalar();
    case Tag::Vector: return detail::vec_equals(a.vec(), b.vec());
    case Tag::List: {
      const auto& x = a.list_data().items;
      const auto& y = b.list_data().items;
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].first != y[i].first) return false;
        if (!deep_equals(x[i].second, y[i].second)) return false;
      }
      return true;
    }
    case Tag::Dataframe: {
      const auto& x = a.frame().cols;
      const auto& y = b.frame().cols;
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].first != y[i].first) return false;
        if (!detail::vec_equals(x[i].second, y[i].second)) return false;
      }
      return true;
    }
    case Tag::Function: return detail::func_equals(a.func(), b.func());
    case Tag::Graphic: return a.graphic_rec() == b.graphic_rec();
  }
  return false;
}

// --- small construction helpers ----------------------------------------

inline VectorData number_vector(std::vector<double> xs) {
  VectorData v;
  v.type = ElemType::Number;
  v.na.assign(xs.size(), 0);
  v.num = std::move(xs);
  return v;
}

inline VectorData logical_vector(std::vector<uint8_t> xs) {
  VectorData v;
  v.type = ElemType::Logical;
  v.na.assign(xs.size(), 0);
  v.log = std::move(xs);
  return v;
}

inline VectorData string_vector(std::vector<std::string> xs) {
  VectorData v;
  v.type = ElemType::String;
  v.na.assign(xs.size(), 0);
  v.str = std::move(xs);
  return v;
}

}  // namespace statgate
