#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/formats/csv.hpp"
#include "statgate/formats/number_format.hpp"
#include "statgate/formats/print.hpp"
#include "statgate/lang/context.hpp"
#include "statgate/lang/parser.hpp"
#include "statgate/value.hpp"

namespace statgate::lang {

// Arguments after positional/named matching. `bound` holds the matched
// parameters (defaults included); `extra` is the variadic bucket with the
// caller's names preserved where given.
struct CallArgs {
  std::vector<std::pair<std::string, Value>> bound;
  std::vector<std::pair<std::string, Value>> extra;
  std::vector<std::string> defaulted;  // params filled from their default

  const Value* find(const std::string& name) const {
    for (const auto& [k, v] : bound)
      if (k == name) return &v;
    return nullptr;
  }
  const Value& req(const std::string& name) const {
    const Value* v = find(name);
    if (!v) throw eval_error("internal: parameter '" + name + "' not bound");
    return *v;
  }
  bool was_defaulted(const std::string& name) const {
    for (const auto& d : defaulted)
      if (d == name) return true;
    return false;
  }
};

using BuiltinImpl = Value (*)(EvalContext&, CallArgs&);

struct BuiltinSpec {
  FunctionData decl;
  BuiltinImpl impl;
};

namespace detail {

// ---- coercion views ----------------------------------------------------

struct Nums {
  std::vector<double> v;
  std::vector<uint8_t> na;
  bool scalar = false;
  size_t size() const { return v.size(); }
};

inline Nums to_nums(const Value& val, const std::string& fn) {
  Nums out;
  switch (val.tag()) {
    case Tag::Number:
      out.scalar = true;
      out.v = {val.number_scalar().value};
      out.na = {val.number_scalar().na ? uint8_t{1} : uint8_t{0}};
      return out;
    case Tag::Logical:
      out.scalar = true;
      out.v = {val.logical_scalar().value ? 1.0 : 0.0};
      out.na = {val.logical_scalar().na ? uint8_t{1} : uint8_t{0}};
      return out;
    case Tag::Vector: {
      const VectorData& vec = val.vec();
      out.na = vec.na;
      if (vec.type == ElemType::Number) {
        out.v = vec.num;
        return out;
      }
      if (vec.type == ElemType::Logical) {
        out.v.reserve(vec.log.size());
        for (auto b : vec.log) out.v.push_back(b ? 1.0 : 0.0);
        return out;
      }
      break;
    }
    default:
      break;
  }
  throw eval_error(fn + ": expected a numeric argument, got " +
                   tag_name(val.tag()));
}

struct Strs {
  std::vector<std::string> v;
  std::vector<uint8_t> na;
  bool scalar = false;
  size_t size() const { return v.size(); }
};

inline Strs to_strs(const Value& val, const std::string& fn) {
  Strs out;
  switch (val.tag()) {
    case Tag::String:
      out.scalar = true;
      out.v = {val.string_scalar()};
      out.na = {0};
      return out;
    case Tag::Vector:
      if (val.vec().type == ElemType::String) {
        out.v = val.vec().str;
        out.na = val.vec().na;
        return out;
      }
      break;
    default:
      break;
  }
  throw eval_error(fn + ": expected a string argument, got " + tag_name(val.tag()));
}

inline bool numeric_family(const Value& v) {
  return v.tag() == Tag::Number || v.tag() == Tag::Logical ||
         (v.tag() == Tag::Vector && v.vec().type != ElemType::String);
}
inline bool string_family(const Value& v) {
  return v.tag() == Tag::String ||
         (v.tag() == Tag::Vector && v.vec().type == ElemType::String);
}

inline Value nums_result(EvalContext& ctx, std::vector<double> v, std::vector<uint8_t> na,
                         bool as_scalar) {
  if (as_scalar) {
    if (na[0]) return Value::number_na();
    return Value::number(v[0]);
  }
  ctx.charge(v.size());
  VectorData out;
  out.type = ElemType::Number;
  out.num = std::move(v);
  out.na = std::move(na);
  return Value::vector(std::move(out));
}

inline Value logicals_result(EvalContext& ctx, std::vector<uint8_t> v,
                             std::vector<uint8_t> na, bool as_scalar) {
  if (as_scalar) {
    if (na[0]) return Value::logical_na();
    return Value::logical(v[0] != 0);
  }
  ctx.charge(v.size());
  VectorData out;
  out.type = ElemType::Logical;
  out.log = std::move(v);
  out.na = std::move(na);
  return Value::vector(std::move(out));
}

inline double scalar_number(const Value& v, const std::string& fn, const char* param) {
  Nums n = to_nums(v, fn);
  if (n.size() != 1 || n.na[0])
    throw eval_error(fn + ": '" + param + "' must be a single non-missing number");
  return n.v[0];
}

inline int64_t scalar_count(const Value& v, const std::string& fn, const char* param) {
  double d = scalar_number(v, fn, param);
  if (!std::isfinite(d) || std::nearbyint(d) != d || d < 0)
    throw eval_error(fn + ": '" + param + "' must be a non-negative integer");
  // counts beyond any plausible budget still reach charge(), which is
  // where oversized requests are rejected
  return static_cast<int64_t>(std::min(d, 9e18));
}

inline bool scalar_flag(const Value& v, const std::string& fn, const char* param) {
  if (v.tag() == Tag::Logical && !v.logical_scalar().na) return v.logical_scalar().value;
  if (v.tag() == Tag::Vector && v.vec().type == ElemType::Logical &&
      v.vec().size() == 1 && !v.vec().is_na(0))
    return v.vec().log[0] != 0;
  throw eval_error(fn + ": '" + param + "' must be TRUE or FALSE");
}

// ---- vectorized operators ----------------------------------------------

template <typename F>
Value arith_op(EvalContext& ctx, const std::string& op, const Value& a, const Value& b,
               F f) {
  Nums x = to_nums(a, "'" + op + "'");
  Nums y = to_nums(b, "'" + op + "'");
  size_t n = std::max(x.size(), y.size());
  if (x.size() != y.size() && x.size() != 1 && y.size() != 1)
    throw eval_error("'" + op + "': operand lengths " + std::to_string(x.size()) +
                     " and " + std::to_string(y.size()) + " do not match");
  std::vector<double> out(n);
  std::vector<uint8_t> na(n, 0);
  for (size_t i = 0; i < n; ++i) {
    size_t ix = x.size() == 1 ? 0 : i;
    size_t iy = y.size() == 1 ? 0 : i;
    if (x.na[ix] || y.na[iy]) {
      na[i] = 1;
      out[i] = 0.0;
    } else {
      out[i] = f(x.v[ix], y.v[iy]);
    }
  }
  return nums_result(ctx, std::move(out), std::move(na), x.scalar && y.scalar);
}

template <typename FN, typename FS>
Value compare_op(EvalContext& ctx, const std::string& op, const Value& a, const Value& b,
                 FN fnum, FS fstr) {
  if (numeric_family(a) && numeric_family(b)) {
    Nums x = to_nums(a, "'" + op + "'");
    Nums y = to_nums(b, "'" + op + "'");
    size_t n = std::max(x.size(), y.size());
    if (x.size() != y.size() && x.size() != 1 && y.size() != 1)
      throw eval_error("'" + op + "': operand lengths do not match");
    std::vector<uint8_t> out(n, 0), na(n, 0);
    for (size_t i = 0; i < n; ++i) {
      size_t ix = x.size() == 1 ? 0 : i;
      size_t iy = y.size() == 1 ? 0 : i;
      if (x.na[ix] || y.na[iy] || std::isnan(x.v[ix]) || std::isnan(y.v[iy]))
        na[i] = 1;
      else
        out[i] = fnum(x.v[ix], y.v[iy]) ? 1 : 0;
    }
    return logicals_result(ctx, std::move(out), std::move(na), x.scalar && y.scalar);
  }
  if (string_family(a) && string_family(b)) {
    Strs x = to_strs(a, "'" + op + "'");
    Strs y = to_strs(b, "'" + op + "'");
    size_t n = std::max(x.size(), y.size());
    if (x.size() != y.size() && x.size() != 1 && y.size() != 1)
      throw eval_error("'" + op + "': operand lengths do not match");
    std::vector<uint8_t> out(n, 0), na(n, 0);
    for (size_t i = 0; i < n; ++i) {
      size_t ix = x.size() == 1 ? 0 : i;
      size_t iy = y.size() == 1 ? 0 : i;
      if (x.na[ix] || y.na[iy])
        na[i] = 1;
      else
        out[i] = fstr(x.v[ix], y.v[iy]) ? 1 : 0;
    }
    return logicals_result(ctx, std::move(out), std::move(na), x.scalar && y.scalar);
  }
  throw eval_error("'" + op + "': cannot compare " + std::string(tag_name(a.tag())) +
                   " with " + tag_name(b.tag()));
}

// ---- aggregation helpers -----------------------------------------------

struct AggInput {
  std::vector<double> v;  // NA removed when na_rm, otherwise any NA reported
  bool has_na = false;
};

inline AggInput agg_input(const Value& x, bool na_rm, const std::string& fn) {
  Nums n = to_nums(x, fn);
  AggInput out;
  for (size_t i = 0; i < n.size(); ++i) {
    if (n.na[i]) {
      out.has_na = true;
      if (!na_rm) return out;
      continue;
    }
    out.v.push_back(n.v[i]);
  }
  return out;
}

// ---- graphics helpers ----------------------------------------------------

inline void nice_ticks(double lo, double hi, std::vector<double>& ticks,
                       std::vector<std::string>& labels) {
  ticks.clear();
  labels.clear();
  if (!(hi > lo)) {
    ticks.push_back(lo);
    labels.push_back(formats::format_number_print(lo));
    return;
  }
  double raw = (hi - lo) / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = mag * (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0);
  double start = std::ceil(lo / step) * step;
  for (double t = start; t <= hi + step * 1e-9; t += step) {
    double v = std::fabs(t) < step * 1e-9 ? 0.0 : t;
    ticks.push_back(v);
    labels.push_back(formats::format_number_print(v));
    if (ticks.size() > 50) break;
  }
}

struct Padded {
  double lo, hi;
};

inline Padded pad_range(double lo, double hi) {
  if (!(hi > lo)) return {lo - 1.0, hi + 1.0};
  double pad = (hi - lo) * 0.04;
  return {lo - pad, hi + pad};
}

inline GraphicsRecording start_recording(double data_xlo, double data_xhi,
                                         double data_ylo, double data_yhi) {
  GraphicsRecording rec;
  Padded px = pad_range(data_xlo, data_xhi);
  Padded py = pad_range(data_ylo, data_yhi);
  rec.xmin = px.lo;
  rec.xmax = px.hi;
  rec.ymin = py.lo;
  rec.ymax = py.hi;

  DrawCmd canvas;
  canvas.kind = DrawCmd::Kind::Canvas;
  canvas.w = 640;
  canvas.h = 480;
  rec.cmds.push_back(std::move(canvas));

  DrawCmd xaxis;
  xaxis.kind = DrawCmd::Kind::Axis;
  xaxis.side = 1;
  nice_ticks(data_xlo, data_xhi, xaxis.ticks, xaxis.labels);
  rec.cmds.push_back(std::move(xaxis));

  DrawCmd yaxis;
  yaxis.kind = DrawCmd::Kind::Axis;
  yaxis.side = 2;
  nice_ticks(data_ylo, data_yhi, yaxis.ticks, yaxis.labels);
  rec.cmds.push_back(std::move(yaxis));
  return rec;
}

// ---- builtin implementations ---------------------------------------------

inline Value bi_c(EvalContext& ctx, CallArgs& args) {
  // names are accepted and dropped: vectors have no element names
  bool any = false;
  ElemType type = ElemType::Logical;
  size_t total = 0;
  for (const auto& [name, v] : args.extra) {
    switch (v.tag()) {
      case Tag::Null: continue;
      case Tag::Logical: total += 1; break;
      case Tag::Number:
        total += 1;
        if (type == ElemType::Logical) type = ElemType::Number;
        break;
      case Tag::String:
        total += 1;
        type = ElemType::String;
        break;
      case Tag::Vector: {
        total += v.vec().size();
        ElemType t = v.vec().type;
        if (t == ElemType::String) type = ElemType::String;
        else if (t == ElemType::Number && type == ElemType::Logical) type = ElemType::Number;
        break;
      }
      default:
        throw eval_error(std::string("c: cannot combine values of type ") +
                         tag_name(v.tag()));
    }
    any = true;
  }
  if (!any) return Value::null();
  ctx.charge(total);

  VectorData out;
  out.type = type;
  auto push_na = [&] {
    out.na.push_back(1);
    switch (type) {
      case ElemType::Logical: out.log.push_back(0); break;
      case ElemType::Number: out.num.push_back(0.0); break;
      case ElemType::String: out.str.push_back(""); break;
    }
  };
  auto push_log = [&](bool b) {
    out.na.push_back(0);
    switch (type) {
      case ElemType::Logical: out.log.push_back(b ? 1 : 0); break;
      case ElemType::Number: out.num.push_back(b ? 1.0 : 0.0); break;
      case ElemType::String: out.str.push_back(b ? "TRUE" : "FALSE"); break;
    }
  };
  auto push_num = [&](double d) {
    out.na.push_back(0);
    if (type == ElemType::Number) out.num.push_back(d);
    else out.str.push_back(formats::format_number_roundtrip(d));
  };
  auto push_str = [&](const std::string& s) {
    out.na.push_back(0);
    out.str.push_back(s);
  };

  for (const auto& [name, v] : args.extra) {
    switch (v.tag()) {
      case Tag::Null: break;
      case Tag::Logical:
        if (v.logical_scalar().na) push_na();
        else push_log(v.logical_scalar().value);
        break;
      case Tag::Number:
        if (v.number_scalar().na) push_na();
        else push_num(v.number_scalar().value);
        break;
      case Tag::String: push_str(v.string_scalar()); break;
      case Tag::Vector: {
        const VectorData& vec = v.vec();
        for (size_t i = 0; i < vec.size(); ++i) {
          if (vec.is_na(i)) {
            push_na();
          } else {
            switch (vec.type) {
              case ElemType::Logical: push_log(vec.log[i] != 0); break;
              case ElemType::Number: push_num(vec.num[i]); break;
              case ElemType::String: push_str(vec.str[i]); break;
            }
          }
        }
        break;
      }
      default: break;
    }
  }
  return Value::vector(std::move(out));
}

inline Value bi_length(EvalContext&, CallArgs& args) {
  const Value& x = args.req("x");
  switch (x.tag()) {
    case Tag::Null: return Value::number(0);
    case Tag::Vector: return Value::number(static_cast<double>(x.vec().size()));
    case Tag::List: return Value::number(static_cast<double>(x.list_data().items.size()));
    case Tag::Dataframe: return Value::number(static_cast<double>(x.frame().ncol()));
    default: return Value::number(1);
  }
}

inline Value bi_sum(EvalContext& ctx, CallArgs& args) {
  bool na_rm = scalar_flag(args.req("na_rm"), "sum", "na_rm");
  AggInput in = agg_input(args.req("x"), na_rm, "sum");
  if (!na_rm && in.has_na) return Value::number_na();
  double s = 0;
  for (double d : in.v) s += d;
  (void)ctx;
  return Value::number(s);
}

inline Value bi_mean(EvalContext& ctx, CallArgs& args) {
  bool na_rm = scalar_flag(args.req("na_rm"), "mean", "na_rm");
  AggInput in = agg_input(args.req("x"), na_rm, "mean");
  if (!na_rm && in.has_na) return Value::number_na();
  if (in.v.empty()) {
    ctx.warn("mean", "no non-missing values; returning NaN");
    return Value::number(std::numeric_limits<double>::quiet_NaN());
  }
  double s = 0;
  for (double d : in.v) s += d;
  return Value::number(s / static_cast<double>(in.v.size()));
}

inline Value bi_sd(EvalContext& ctx, CallArgs& args) {
  bool na_rm = scalar_flag(args.req("na_rm"), "sd", "na_rm");
  AggInput in = agg_input(args.req("x"), na_rm, "sd");
  if (!na_rm && in.has_na) return Value::number_na();
  if (in.v.empty()) {
    ctx.warn("sd", "no non-missing values; returning NaN");
    return Value::number(std::numeric_limits<double>::quiet_NaN());
  }
  double n = static_cast<double>(in.v.size());
  double mean = 0;
  for (double d : in.v) mean += d;
  mean /= n;
  double ss = 0;
  for (double d : in.v) ss += (d - mean) * (d - mean);
  return Value::number(std::sqrt(ss / (n - 1.0)));
}

inline Value bi_min(EvalContext& ctx, CallArgs& args) {
  bool na_rm = scalar_flag(args.req("na_rm"), "min", "na_rm");
  AggInput in = agg_input(args.req("x"), na_rm, "min");
  if (!na_rm && in.has_na) return Value::number_na();
  if (in.v.empty()) {
    ctx.warn("min", "no non-missing arguments; returning Inf");
    return Value::number(std::numeric_limits<double>::infinity());
  }
  double m = in.v[0];
  for (double d : in.v) {
    if (std::isnan(d)) return Value::number(d);
    if (d < m) m = d;
  }
  return Value::number(m);
}

inline Value bi_max(EvalContext& ctx, CallArgs& args) {
  bool na_rm = scalar_flag(args.req("na_rm"), "max", "na_rm");
  AggInput in = agg_input(args.req("x"), na_rm, "max");
  if (!na_rm && in.has_na) return Value::number_na();
  if (in.v.empty()) {
    ctx.warn("max", "no non-missing arguments; returning -Inf");
    return Value::number(-std::numeric_limits<double>::infinity());
  }
  double m = in.v[0];
  for (double d : in.v) {
    if (std::isnan(d)) return Value::number(d);
    if (d > m) m = d;
  }
  return Value::number(m);
}

inline Value bi_sort(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  bool decreasing = scalar_flag(args.req("decreasing"), "sort", "decreasing");
  if (!numeric_family(x) && !string_family(x))
    throw eval_error("sort: expected an atomic vector");

  if (string_family(x)) {
    Strs s = to_strs(x, "sort");
    std::vector<std::string> kept;
    for (size_t i = 0; i < s.size(); ++i)
      if (!s.na[i]) kept.push_back(s.v[i]);
    std::sort(kept.begin(), kept.end());
    if (decreasing) std::reverse(kept.begin(), kept.end());
    ctx.charge(kept.size());
    return Value::vector(string_vector(std::move(kept)));
  }
  bool logical_in = x.tag() == Tag::Logical ||
                    (x.tag() == Tag::Vector && x.vec().type == ElemType::Logical);
  Nums n = to_nums(x, "sort");
  std::vector<double> kept;
  for (size_t i = 0; i < n.size(); ++i)
    if (!n.na[i] && !std::isnan(n.v[i])) kept.push_back(n.v[i]);
  std::sort(kept.begin(), kept.end());
  if (decreasing) std::reverse(kept.begin(), kept.end());
  ctx.charge(kept.size());
  if (logical_in) {
    std::vector<uint8_t> l(kept.size());
    for (size_t i = 0; i < kept.size(); ++i) l[i] = kept[i] != 0.0 ? 1 : 0;
    return Value::vector(logical_vector(std::move(l)));
  }
  return Value::vector(number_vector(std::move(kept)));
}

inline Value bi_rev(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  if (x.tag() == Tag::Null) return x;
  if (x.tag() != Tag::Vector) {
    if (numeric_family(x) || string_family(x)) return x;  // scalars
    throw eval_error("rev: expected an atomic vector");
  }
  VectorData v = x.vec();
  std::reverse(v.na.begin(), v.na.end());
  std::reverse(v.log.begin(), v.log.end());
  std::reverse(v.num.begin(), v.num.end());
  std::reverse(v.str.begin(), v.str.end());
  ctx.charge(v.size());
  return Value::vector(std::move(v));
}

inline Value bi_head(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  double nd = scalar_number(args.req("n"), "head", "n");
  if (std::nearbyint(nd) != nd) throw eval_error("head: 'n' must be an integer");

  auto keep_count = [&](size_t total) -> size_t {
    if (nd >= 0) return std::min<size_t>(total, static_cast<size_t>(nd));
    size_t drop = static_cast<size_t>(-nd);
    return drop >= total ? 0 : total - drop;
  };

  if (x.tag() == Tag::Dataframe) {
    const FrameData& f = x.frame();
    size_t k = keep_count(f.nrow());
    FrameData out;
    for (const auto& [name, col] : f.cols) {
      VectorData c;
      c.type = col.type;
      c.na.assign(col.na.begin(), col.na.begin() + k);
      switch (col.type) {
        case ElemType::Logical: c.log.assign(col.log.begin(), col.log.begin() + k); break;
        case ElemType::Number: c.num.assign(col.num.begin(), col.num.begin() + k); break;
        case ElemType::String: c.str.assign(col.str.begin(), col.str.begin() + k); break;
      }
      out.cols.emplace_back(name, std::move(c));
    }
    ctx.charge(k * f.ncol() + 1);
    return Value::dataframe(std::move(out));
  }
  if (numeric_family(x) || string_family(x)) {
    if (x.tag() != Tag::Vector) {
      if (keep_count(1) == 1) return x;
      VectorData empty;
      empty.type = x.tag() == Tag::String ? ElemType::String
                   : x.tag() == Tag::Logical ? ElemType::Logical
                                             : ElemType::Number;
      return Value::vector(std::move(empty));
    }
    const VectorData& v = x.vec();
    size_t k = keep_count(v.size());
    VectorData out;
    out.type = v.type;
    out.na.assign(v.na.begin(), v.na.begin() + k);
    switch (v.type) {
      case ElemType::Logical: out.log.assign(v.log.begin(), v.log.begin() + k); break;
      case ElemType::Number: out.num.assign(v.num.begin(), v.num.begin() + k); break;
      case ElemType::String: out.str.assign(v.str.begin(), v.str.begin() + k); break;
    }
    ctx.charge(k);
    return Value::vector(std::move(out));
  }
  throw eval_error("head: expected a vector or dataframe");
}

inline Value bi_seq(EvalContext& ctx, CallArgs& args) {
  double from = scalar_number(args.req("from"), "seq", "from");
  const Value& to_v = args.req("to");
  const Value& by_v = args.req("by");

  double from_x, to_x, by_x;
  if (to_v.is_null()) {
    // seq(n): 1..n
    if (std::nearbyint(from) != from) throw eval_error("seq: 'from' must be an integer");
    if (from < 1) {
      ctx.charge(0);
      return Value::vector(number_vector({}));
    }
    from_x = 1;
    to_x = from;
    by_x = 1;
  } else {
    from_x = from;
    to_x = scalar_number(to_v, "seq", "to");
    by_x = by_v.is_null() ? (to_x >= from_x ? 1.0 : -1.0)
                          : scalar_number(by_v, "seq", "by");
  }
  if (by_x == 0) throw eval_error("seq: 'by' must be non-zero");
  if ((to_x - from_x) * by_x < 0) throw eval_error("seq: wrong sign in 'by'");

  double len_d = std::floor((to_x - from_x) / by_x + 1e-10) + 1;
  if (!(len_d >= 0)) len_d = 0;
  uint64_t n = len_d > 1e18 ? static_cast<uint64_t>(1e18) : static_cast<uint64_t>(len_d);
  ctx.charge(n);
  std::vector<double> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) out.push_back(from_x + static_cast<double>(i) * by_x);
  return Value::vector(number_vector(std::move(out)));
}

inline Value bi_rep(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  int64_t times = scalar_count(args.req("times"), "rep", "times");
  Nums nums;
  Strs strs;
  bool is_str = string_family(x);
  bool is_log = x.tag() == Tag::Logical ||
                (x.tag() == Tag::Vector && x.vec().type == ElemType::Logical);
  size_t base_len;
  if (is_str) {
    strs = to_strs(x, "rep");
    base_len = strs.size();
  } else {
    nums = to_nums(x, "rep");
    base_len = nums.size();
  }
  // charge before any allocation: this is the budget's main guard
  double total_d = static_cast<double>(base_len) * static_cast<double>(times);
  uint64_t total = total_d > 1e18 ? static_cast<uint64_t>(1e18)
                                  : static_cast<uint64_t>(total_d);
  ctx.charge(total);

  VectorData out;
  out.type = is_str ? ElemType::String : (is_log ? ElemType::Logical : ElemType::Number);
  out.na.reserve(total);
  for (int64_t t = 0; t < times; ++t) {
    if (t % 64 == 0) ctx.check_deadline();
    for (size_t i = 0; i < base_len; ++i) {
      if (is_str) {
        out.na.push_back(strs.na[i]);
        out.str.push_back(strs.v[i]);
      } else if (is_log) {
        out.na.push_back(nums.na[i]);
        out.log.push_back(nums.v[i] != 0.0 ? 1 : 0);
      } else {
        out.na.push_back(nums.na[i]);
        out.num.push_back(nums.v[i]);
      }
    }
  }
  return Value::vector(std::move(out));
}

inline Value bi_names(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  std::vector<std::string> names;
  if (x.tag() == Tag::List)
    for (const auto& [k, v] : x.list_data().items) names.push_back(k);
  else if (x.tag() == Tag::Dataframe)
    for (const auto& [k, v] : x.frame().cols) names.push_back(k);
  else
    return Value::null();
  ctx.charge(names.size());
  return Value::vector(string_vector(std::move(names)));
}

inline Value bi_nrow(EvalContext&, CallArgs& args) {
  const Value& x = args.req("x");
  if (x.tag() != Tag::Dataframe) return Value::null();
  return Value::number(static_cast<double>(x.frame().nrow()));
}

inline Value bi_ncol(EvalContext&, CallArgs& args) {
  const Value& x = args.req("x");
  if (x.tag() != Tag::Dataframe) return Value::null();
  return Value::number(static_cast<double>(x.frame().ncol()));
}

inline Value bi_paste(EvalContext& ctx, CallArgs& args) {
  std::string sep;
  {
    const Value& s = args.req("sep");
    if (s.tag() != Tag::String) throw eval_error("paste: 'sep' must be a string");
    sep = s.string_scalar();
  }
  const Value& collapse_v = args.req("collapse");
  if (!collapse_v.is_null() && collapse_v.tag() != Tag::String)
    throw eval_error("paste: 'collapse' must be a string or NULL");

  auto piece_strings = [&](const Value& v) -> std::vector<std::string> {
    std::vector<std::string> out;
    switch (v.tag()) {
      case Tag::Null: return out;
      case Tag::Logical:
        out.push_back(v.logical_scalar().na ? "NA"
                      : v.logical_scalar().value ? "TRUE" : "FALSE");
        return out;
      case Tag::Number:
        out.push_back(v.number_scalar().na
                          ? "NA"
                          : formats::format_number_roundtrip(v.number_scalar().value));
        return out;
      case Tag::String: out.push_back(v.string_scalar()); return out;
      case Tag::Vector: {
        const VectorData& vec = v.vec();
        for (size_t i = 0; i < vec.size(); ++i) {
          if (vec.is_na(i)) {
            out.push_back("NA");
            continue;
          }
          switch (vec.type) {
            case ElemType::Logical: out.push_back(vec.log[i] ? "TRUE" : "FALSE"); break;
            case ElemType::Number:
              out.push_back(formats::format_number_roundtrip(vec.num[i]));
              break;
            case ElemType::String: out.push_back(vec.str[i]); break;
          }
        }
        return out;
      }
      default:
        throw eval_error(std::string("paste: cannot coerce ") + tag_name(v.tag()) +
                         " to strings");
    }
  };

  std::vector<std::vector<std::string>> pieces;
  size_t n = 0;
  for (const auto& [name, v] : args.extra) {
    auto p = piece_strings(v);
    if (p.empty()) continue;
    n = std::max(n, p.size());
    pieces.push_back(std::move(p));
  }
  for (const auto& p : pieces)
    if (p.size() != n && p.size() != 1)
      throw eval_error("paste: argument lengths do not match");

  std::vector<std::string> joined(n);
  for (size_t i = 0; i < n; ++i) {
    std::string s;
    for (size_t a = 0; a < pieces.size(); ++a) {
      if (a) s += sep;
      s += pieces[a][pieces[a].size() == 1 ? 0 : i];
    }
    joined[i] = std::move(s);
  }
  ctx.charge(n);
  if (!collapse_v.is_null()) {
    std::string all;
    for (size_t i = 0; i < joined.size(); ++i) {
      if (i) all += collapse_v.string_scalar();
      all += joined[i];
    }
    return Value::string(std::move(all));
  }
  return Value::vector(string_vector(std::move(joined)));
}

inline Value bi_print(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  ctx.print_line(formats::print_value(x));
  return x;
}

inline Value bi_identity(EvalContext&, CallArgs& args) { return args.req("x"); }

inline Value bi_is_na(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  switch (x.tag()) {
    case Tag::Null: return Value::vector(logical_vector({}));
    case Tag::Logical: return Value::logical(x.logical_scalar().na);
    case Tag::Number: return Value::logical(x.number_scalar().na);
    case Tag::String: return Value::logical(false);
    case Tag::Vector: {
      const VectorData& v = x.vec();
      std::vector<uint8_t> out(v.size());
      for (size_t i = 0; i < v.size(); ++i) out[i] = v.is_na(i) ? 1 : 0;
      ctx.charge(out.size());
      return Value::vector(logical_vector(std::move(out)));
    }
    default:
      throw eval_error(std::string("is_na: expected an atomic value, got ") +
                       tag_name(x.tag()));
  }
}

inline VectorData column_from_value(const Value& v, const std::string& fn) {
  switch (v.tag()) {
    case Tag::Logical: {
      VectorData c;
      c.type = ElemType::Logical;
      c.na = {v.logical_scalar().na ? uint8_t{1} : uint8_t{0}};
      c.log = {static_cast<uint8_t>(v.logical_scalar().value ? 1 : 0)};
      return c;
    }
    case Tag::Number: {
      VectorData c;
      c.type = ElemType::Number;
      c.na = {v.number_scalar().na ? uint8_t{1} : uint8_t{0}};
      c.num = {v.number_scalar().value};
      return c;
    }
    case Tag::String: {
      VectorData c = string_vector({v.string_scalar()});
      return c;
    }
    case Tag::Vector: return v.vec();
    default:
      throw eval_error(fn + ": columns must be atomic vectors, got " +
                       tag_name(v.tag()));
  }
}

inline VectorData recycle_column(VectorData c, size_t nrow, const std::string& fn) {
  if (c.size() == nrow) return c;
  if (c.size() != 1) throw eval_error(fn + ": column lengths do not match");
  VectorData out;
  out.type = c.type;
  out.na.assign(nrow, c.na[0]);
  switch (c.type) {
    case ElemType::Logical: out.log.assign(nrow, c.log[0]); break;
    case ElemType::Number: out.num.assign(nrow, c.num[0]); break;
    case ElemType::String: out.str.assign(nrow, c.str[0]); break;
  }
  return out;
}

inline Value bi_data_frame(EvalContext& ctx, CallArgs& args) {
  FrameData f;
  size_t nrow = 0;
  std::vector<std::pair<std::string, VectorData>> cols;
  for (const auto& [name, v] : args.extra) {
    if (name.empty()) throw eval_error("data_frame: every column must be named");
    VectorData c = column_from_value(v, "data_frame");
    nrow = std::max(nrow, c.size());
    cols.emplace_back(name, std::move(c));
  }
  for (auto& [name, c] : cols)
    f.cols.emplace_back(name, recycle_column(std::move(c), nrow, "data_frame"));
  ctx.charge(nrow * f.ncol() + 1);
  return Value::dataframe(std::move(f));
}

inline std::filesystem::path workdir_file(EvalContext& ctx, const std::string& name,
                                          const std::string& fn) {
  if (name.empty() || name.find('/') != std::string::npos ||
      name.find('\\') != std::string::npos || name == "." || name == ".." ||
      name.find("..") == 0)
    throw eval_error(fn + ": invalid file name '" + name + "'");
  if (ctx.workdir().empty()) throw eval_error(fn + ": no working directory");
  return ctx.workdir() / name;
}

inline Value bi_read_csv(EvalContext& ctx, CallArgs& args) {
  const Value& fv = args.req("file");
  if (fv.tag() != Tag::String) throw eval_error("read_csv: 'file' must be a string");
  auto path = workdir_file(ctx, fv.string_scalar(), "read_csv");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw eval_error("read_csv: cannot open file '" + fv.string_scalar() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  FrameData f = formats::csv_to_frame(bytes);
  ctx.charge(f.ncol() * f.nrow() + 1);
  return Value::dataframe(std::move(f));
}

inline Value bi_write_csv(EvalContext& ctx, CallArgs& args) {
  const Value& x = args.req("x");
  const Value& fv = args.req("file");
  if (x.tag() != Tag::Dataframe) throw eval_error("write_csv: 'x' must be a dataframe");
  if (fv.tag() != Tag::String) throw eval_error("write_csv: 'file' must be a string");
  auto path = workdir_file(ctx, fv.string_scalar(), "write_csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw eval_error("write_csv: cannot open file for writing");
  out << formats::frame_to_csv(x.frame());
  return Value::null();
}

inline Value bi_set_seed(EvalContext& ctx, CallArgs& args) {
  double d = scalar_number(args.req("seed"), "set_seed", "seed");
  if (!std::isfinite(d) || std::nearbyint(d) != d)
    throw eval_error("set_seed: 'seed' must be an integer");
  ctx.rng().seed_with(static_cast<uint64_t>(static_cast<int64_t>(d)));
  return Value::null();
}

inline Value bi_rnorm(EvalContext& ctx, CallArgs& args) {
  int64_t n = scalar_count(args.req("n"), "rnorm", "n");
  double mean = scalar_number(args.req("mean"), "rnorm", "mean");
  double sd = scalar_number(args.req("sd"), "rnorm", "sd");
  ctx.charge(static_cast<uint64_t>(n));
  std::vector<double> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    if (i % 4096 == 0) ctx.check_deadline();
    out[static_cast<size_t>(i)] = mean + sd * ctx.rng().normal();
  }
  return Value::vector(number_vector(std::move(out)));
}

inline Value bi_runif(EvalContext& ctx, CallArgs& args) {
  int64_t n = scalar_count(args.req("n"), "runif", "n");
  double lo = scalar_number(args.req("min"), "runif", "min");
  double hi = scalar_number(args.req("max"), "runif", "max");
  ctx.charge(static_cast<uint64_t>(n));
  std::vector<double> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    if (i % 4096 == 0) ctx.check_deadline();
    out[static_cast<size_t>(i)] = lo + (hi - lo) * ctx.rng().uniform();
  }
  return Value::vector(number_vector(std::move(out)));
}

// Predictor columns for lsfit: a numeric vector, a dataframe of numeric
// columns, or a list of equal-length numeric vectors.
inline std::vector<std::vector<double>> lsfit_columns(const Value& x) {
  std::vector<std::vector<double>> cols;
  auto add = [&](const Value& v) {
    Nums n = to_nums(v, "lsfit");
    for (auto flag : n.na)
      if (flag) throw eval_error("lsfit: missing values in 'x'");
    for (double d : n.v)
      if (!std::isfinite(d)) throw eval_error("lsfit: non-finite values in 'x'");
    cols.push_back(std::move(n.v));
  };
  switch (x.tag()) {
    case Tag::Number:
    case Tag::Logical:
    case Tag::Vector: add(x); break;
    case Tag::Dataframe:
      for (const auto& [name, col] : x.frame().cols) {
        VectorData copy = col;
        add(Value::vector(std::move(copy)));
      }
      break;
    case Tag::List:
      for (const auto& [name, v] : x.list_data().items) add(v);
      break;
    default:
      throw eval_error("lsfit: 'x' must be numeric columns");
  }
  if (cols.empty()) throw eval_error("lsfit: 'x' has no columns");
  for (const auto& c : cols)
    if (c.size() != cols[0].size()) throw eval_error("lsfit: column lengths differ");
  return cols;
}

// Solves A t = b by Gaussian elimination with partial pivoting; a pivot
// below tol relative to the largest entry of A reports rank deficiency.
inline std::vector<double> solve_normal_equations(std::vector<std::vector<double>> A,
                                                  std::vector<double> b) {
  const size_t p = A.size();
  double max_a = 0;
  for (const auto& row : A)
    for (double v : row) max_a = std::max(max_a, std::fabs(v));
  const double tol = 1e-10 * (max_a > 0 ? max_a : 1.0);

  for (size_t k = 0; k < p; ++k) {
    size_t piv = k;
    for (size_t r = k + 1; r < p; ++r)
      if (std::fabs(A[r][k]) > std::fabs(A[piv][k])) piv = r;
    if (std::fabs(A[piv][k]) <= tol)
      throw numeric_error("lsfit: system is rank deficient");
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (size_t r = k + 1; r < p; ++r) {
      double m = A[r][k] / A[k][k];
      for (size_t cc = k; cc < p; ++cc) A[r][cc] -= m * A[k][cc];
      b[r] -= m * b[k];
    }
  }
  std::vector<double> t(p);
  for (size_t k = p; k-- > 0;) {
    double s = b[k];
    for (size_t cc = k + 1; cc < p; ++cc) s -= A[k][cc] * t[cc];
    t[k] = s / A[k][k];
  }
  return t;
}

inline Value bi_lsfit(EvalContext& ctx, CallArgs& args) {
  bool intercept = scalar_flag(args.req("intercept"), "lsfit", "intercept");
  std::vector<std::vector<double>> xcols = lsfit_columns(args.req("x"));
  Nums y = to_nums(args.req("y"), "lsfit");
  for (auto flag : y.na)
    if (flag) throw eval_error("lsfit: missing values in 'y'");
  const size_t n = y.size();
  if (xcols[0].size() != n) throw eval_error("lsfit: 'x' and 'y' lengths differ");

  std::vector<std::vector<double>> design;
  if (intercept) design.push_back(std::vector<double>(n, 1.0));
  for (auto& c : xcols) design.push_back(std::move(c));
  const size_t p = design.size();

  std::vector<std::vector<double>> A(p, std::vector<double>(p, 0.0));
  std::vector<double> b(p, 0.0);
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j < p; ++j) {
      double s = 0;
      for (size_t r = 0; r < n; ++r) s += design[i][r] * design[j][r];
      A[i][j] = s;
    }
    double s = 0;
    for (size_t r = 0; r < n; ++r) s += design[i][r] * y.v[r];
    b[i] = s;
  }
  std::vector<double> coef = solve_normal_equations(std::move(A), std::move(b));

  std::vector<double> resid(n);
  for (size_t r = 0; r < n; ++r) {
    double fit = 0;
    for (size_t j = 0; j < p; ++j) fit += coef[j] * design[j][r];
    resid[r] = y.v[r] - fit;
  }
  ctx.charge(p + n + 1);
  ListData out;
  out.items.emplace_back("coefficients", Value::vector(number_vector(std::move(coef))));
  out.items.emplace_back("residuals", Value::vector(number_vector(std::move(resid))));
  return Value::list(std::move(out));
}

inline Value bi_plot(EvalContext& ctx, CallArgs& args) {
  Nums x = to_nums(args.req("x"), "plot");
  std::vector<double> xs, ys;
  const Value& yv = args.req("y");
  if (yv.is_null()) {
    for (size_t i = 0; i < x.size(); ++i) {
      if (x.na[i] || !std::isfinite(x.v[i])) continue;
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(x.v[i]);
    }
  } else {
    Nums y = to_nums(yv, "plot");
    if (y.size() != x.size()) throw eval_error("plot: 'x' and 'y' lengths differ");
    for (size_t i = 0; i < x.size(); ++i) {
      if (x.na[i] || y.na[i] || !std::isfinite(x.v[i]) || !std::isfinite(y.v[i])) continue;
      xs.push_back(x.v[i]);
      ys.push_back(y.v[i]);
    }
  }
  ctx.charge(2 * xs.size() + 8);

  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (!xs.empty()) {
    xlo = *std::min_element(xs.begin(), xs.end());
    xhi = *std::max_element(xs.begin(), xs.end());
    ylo = *std::min_element(ys.begin(), ys.end());
    yhi = *std::max_element(ys.begin(), ys.end());
  }
  GraphicsRecording rec = start_recording(xlo, xhi, ylo, yhi);
  DrawCmd pts;
  pts.kind = DrawCmd::Kind::Points;
  pts.xs = std::move(xs);
  pts.ys = std::move(ys);
  pts.radius = 3;
  pts.color = "black";
  rec.cmds.push_back(std::move(pts));
  ctx.device().open_page(std::move(rec));
  return Value::null();
}

inline Value bi_hist(EvalContext& ctx, CallArgs& args) {
  Nums x = to_nums(args.req("x"), "hist");
  std::vector<double> v;
  for (size_t i = 0; i < x.size(); ++i)
    if (!x.na[i] && std::isfinite(x.v[i])) v.push_back(x.v[i]);
  if (v.empty()) throw eval_error("hist: no finite values to bin");

  size_t nbins;
  const Value& breaks = args.req("breaks");
  if (breaks.is_null()) {
    // Sturges' rule
    nbins = static_cast<size_t>(
        std::ceil(std::log2(static_cast<double>(v.size()))) + 1);
    if (nbins < 1) nbins = 1;
  } else {
    int64_t b = scalar_count(breaks, "hist", "breaks");
    if (b < 1) throw eval_error("hist: 'breaks' must be at least 1");
    nbins = static_cast<size_t>(b);
  }
  ctx.charge(v.size() + nbins + 8);

  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> counts(nbins, 0.0);
  double width = (hi - lo) / static_cast<double>(nbins);
  for (double d : v) {
    size_t bin = d >= hi ? nbins - 1
                         : static_cast<size_t>((d - lo) / width);
    if (bin >= nbins) bin = nbins - 1;
    counts[bin] += 1.0;
  }
  double cmax = *std::max_element(counts.begin(), counts.end());

  GraphicsRecording rec = start_recording(lo, hi, 0.0, cmax);
  rec.ymin = 0.0;  // bars sit on the baseline
  for (size_t i = 0; i < nbins; ++i) {
    DrawCmd r;
    r.kind = DrawCmd::Kind::Rect;
    r.x0 = lo + width * static_cast<double>(i);
    r.x1 = lo + width * static_cast<double>(i + 1);
    r.y0 = 0.0;
    r.y1 = counts[i];
    r.fill = "gray";
    rec.cmds.push_back(std::move(r));
  }
  ctx.device().open_page(std::move(rec));
  return Value::null();
}

inline Value bi_title(EvalContext& ctx, CallArgs& args) {
  const Value& main = args.req("main");
  if (main.tag() != Tag::String) throw eval_error("title: 'main' must be a string");
  DrawCmd t;
  t.kind = DrawCmd::Kind::Title;
  t.text = main.string_scalar();
  ctx.device().append(std::move(t));
  return Value::null();
}

// ---- operator implementations -------------------------------------------

inline Value bi_op_add(EvalContext& ctx, CallArgs& a) {
  return arith_op(ctx, "+", a.req("e1"), a.req("e2"), [](double x, double y) { return x + y; });
}
inline Value bi_op_sub(EvalContext& ctx, CallArgs& a) {
  if (a.was_defaulted("e2")) {
    // unary minus
    Nums x = to_nums(a.req("e1"), "'-'");
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x.na[i] ? 0.0 : -x.v[i];
    return nums_result(ctx, std::move(out), std::move(x.na), x.scalar);
  }
  return arith_op(ctx, "-", a.req("e1"), a.req("e2"),
                  [](double x, double y) { return x - y; });
}
inline Value bi_op_mul(EvalContext& ctx, CallArgs& a) {
  return arith_op(ctx, "*", a.req("e1"), a.req("e2"), [](double x, double y) { return x * y; });
}
inline Value bi_op_div(EvalContext& ctx, CallArgs& a) {
  return arith_op(ctx, "/", a.req("e1"), a.req("e2"), [](double x, double y) { return x / y; });
}
inline Value bi_op_pow(EvalContext& ctx, CallArgs& a) {
  return arith_op(ctx, "^", a.req("e1"), a.req("e2"),
                  [](double x, double y) { return std::pow(x, y); });
}
inline Value bi_op_lt(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, "<", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x < y; },
                    [](const std::string& x, const std::string& y) { return x < y; });
}
inline Value bi_op_gt(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, ">", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x > y; },
                    [](const std::string& x, const std::string& y) { return x > y; });
}
inline Value bi_op_le(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, "<=", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x <= y; },
                    [](const std::string& x, const std::string& y) { return x <= y; });
}
inline Value bi_op_ge(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, ">=", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x >= y; },
                    [](const std::string& x, const std::string& y) { return x >= y; });
}
inline Value bi_op_eq(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, "==", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x == y; },
                    [](const std::string& x, const std::string& y) { return x == y; });
}
inline Value bi_op_ne(EvalContext& ctx, CallArgs& a) {
  return compare_op(ctx, "!=", a.req("e1"), a.req("e2"),
                    [](double x, double y) { return x != y; },
                    [](const std::string& x, const std::string& y) { return x != y; });
}

}  // namespace detail

// ---- registry -------------------------------------------------------------

inline const std::map<std::string, BuiltinSpec>& builtin_registry() {
  static const std::map<std::string, BuiltinSpec> registry = [] {
    std::map<std::string, BuiltinSpec> reg;

    auto def = [](const char* src) -> ExprPtr { return parse_single_expression(src); };

    auto add = [&reg](const std::string& name,
                      std::vector<FunctionData::Param> params, bool variadic,
                      bool visible, BuiltinImpl impl) {
      BuiltinSpec spec;
      spec.decl.builtin = name;
      spec.decl.params = std::move(params);
      spec.decl.variadic = variadic;
      spec.decl.visible = visible;
      spec.impl = impl;
      reg.emplace(name, std::move(spec));
    };

    using P = FunctionData::Param;
    ExprPtr d0 = def("0"), d1 = def("1"), dnull = def("NULL"), dfalse = def("FALSE"),
            dtrue = def("TRUE"), d6 = def("6"), dspace = def("\" \"");

    add("+", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_add);
    add("-", {P{"e1", nullptr}, P{"e2", dnull}}, false, true, detail::bi_op_sub);
    add("*", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_mul);
    add("/", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_div);
    add("^", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_pow);
    add("<", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_lt);
    add(">", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_gt);
    add("<=", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_le);
    add(">=", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_ge);
    add("==", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_eq);
    add("!=", {P{"e1", nullptr}, P{"e2", nullptr}}, false, true, detail::bi_op_ne);

    add("c", {}, true, true, detail::bi_c);
    add("length", {P{"x", nullptr}}, false, true, detail::bi_length);
    add("sum", {P{"x", nullptr}, P{"na_rm", dfalse}}, false, true, detail::bi_sum);
    add("mean", {P{"x", nullptr}, P{"na_rm", dfalse}}, false, true, detail::bi_mean);
    add("sd", {P{"x", nullptr}, P{"na_rm", dfalse}}, false, true, detail::bi_sd);
    add("min", {P{"x", nullptr}, P{"na_rm", dfalse}}, false, true, detail::bi_min);
    add("max", {P{"x", nullptr}, P{"na_rm", dfalse}}, false, true, detail::bi_max);
    add("sort", {P{"x", nullptr}, P{"decreasing", dfalse}}, false, true, detail::bi_sort);
    add("rev", {P{"x", nullptr}}, false, true, detail::bi_rev);
    add("head", {P{"x", nullptr}, P{"n", d6}}, false, true, detail::bi_head);
    add("seq", {P{"from", nullptr}, P{"to", dnull}, P{"by", dnull}}, false, true,
        detail::bi_seq);
    add("rep", {P{"x", nullptr}, P{"times", nullptr}}, false, true, detail::bi_rep);
    add("names", {P{"x", nullptr}}, false, true, detail::bi_names);
    add("nrow", {P{"x", nullptr}}, false, true, detail::bi_nrow);
    add("ncol", {P{"x", nullptr}}, false, true, detail::bi_ncol);
    add("paste", {P{"sep", dspace}, P{"collapse", dnull}}, true, true, detail::bi_paste);
    add("print", {P{"x", nullptr}}, false, false, detail::bi_print);
    add("identity", {P{"x", nullptr}}, false, true, detail::bi_identity);
    add("is_na", {P{"x", nullptr}}, false, true, detail::bi_is_na);
    add("data_frame", {}, true, true, detail::bi_data_frame);
    add("read_csv", {P{"file", nullptr}}, false, true, detail::bi_read_csv);
    add("write_csv", {P{"x", nullptr}, P{"file", nullptr}}, false, false,
        detail::bi_write_csv);
    add("set_seed", {P{"seed", nullptr}}, false, false, detail::bi_set_seed);
    add("rnorm", {P{"n", nullptr}, P{"mean", d0}, P{"sd", d1}}, false, true,
        detail::bi_rnorm);
    add("runif", {P{"n", nullptr}, P{"min", d0}, P{"max", d1}}, false, true,
        detail::bi_runif);
    add("lsfit", {P{"x", nullptr}, P{"y", nullptr}, P{"intercept", dtrue}}, false, true,
        detail::bi_lsfit);
    add("plot", {P{"x", nullptr}, P{"y", dnull}}, false, false, detail::bi_plot);
    add("hist", {P{"x", nullptr}, P{"breaks", dnull}}, false, false, detail::bi_hist);
    add("title", {P{"main", nullptr}}, false, false, detail::bi_title);
    return reg;
  }();
  return registry;
}

// The base namespace: every builtin bound as a function value.
inline std::shared_ptr<const Env> base_environment() {
  static const std::shared_ptr<const Env> base = [] {
    auto env = std::make_shared<Env>();
    for (const auto& [name, spec] : builtin_registry())
      env->assign(name, Value::function(spec.decl));
    return std::shared_ptr<const Env>(env);
  }();
  return base;
}

}  // namespace statgate::lang
