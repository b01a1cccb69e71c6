#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "statgate/error.hpp"
#include "statgate/formats/number_format.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

using ordered_json = nlohmann::ordered_json;

namespace detail {

// Scalar cell mapping shared by vectors and dataframe cells: NA -> null,
// non-finite numbers -> their names as strings (JSON has no non-finite
// numbers), integral doubles -> JSON integers for clean text.
inline ordered_json number_cell_to_json(bool na, double x) {
  if (na) return nullptr;
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  if (is_integral_double(x)) return static_cast<int64_t>(x);
  return x;
}

inline ordered_json elem_to_json(const VectorData& v, size_t i) {
  if (v.is_na(i)) return nullptr;
  switch (v.type) {
    case ElemType::Logical: return v.log[i] != 0;
    case ElemType::Number: return number_cell_to_json(false, v.num[i]);
    case ElemType::String: return v.str[i];
  }
  return nullptr;
}

inline ordered_json cmds_to_json(const lang::GraphicsRecording& rec);

}  // namespace detail

// Value -> JSON. Scalars widen to one-element arrays (vectors always
// export as arrays, never auto-unboxed), lists become objects, and
// dataframes export row-wise as an array of row objects.
inline ordered_json value_to_json(const Value& v) {
  switch (v.tag()) {
    case Tag::Null:
      return nullptr;
    case Tag::Logical: {
      ordered_json arr = ordered_json::array();
      arr.push_back(v.logical_scalar().na ? ordered_json(nullptr)
                                          : ordered_json(v.logical_scalar().value));
      return arr;
    }
    case Tag::Number: {
      ordered_json arr = ordered_json::array();
      arr.push_back(detail::number_cell_to_json(v.number_scalar().na,
                                                v.number_scalar().value));
      return arr;
    }
    case Tag::String: {
      ordered_json arr = ordered_json::array();
      arr.push_back(v.string_scalar());
      return arr;
    }
    case Tag::Vector: {
      ordered_json arr = ordered_json::array();
      const VectorData& vec = v.vec();
      for (size_t i = 0; i < vec.size(); ++i) arr.push_back(detail::elem_to_json(vec, i));
      return arr;
    }
    case Tag::List: {
      ordered_json obj = ordered_json::object();
      for (const auto& [name, member] : v.list_data().items)
        obj[name] = value_to_json(member);
      return obj;
    }
    case Tag::Dataframe: {
      ordered_json rows = ordered_json::array();
      const FrameData& f = v.frame();
      for (size_t r = 0; r < f.nrow(); ++r) {
        ordered_json row = ordered_json::object();
        for (const auto& [name, col] : f.cols) row[name] = detail::elem_to_json(col, r);
        rows.push_back(std::move(row));
      }
      return rows;
    }
    case Tag::Function:
      throw format_error("functions cannot be exported as json");
    case Tag::Graphic:
      return detail::cmds_to_json(v.graphic_rec());
  }
  return nullptr;
}

namespace detail {

enum class CellKind { Null, Bool, Number, SentinelString, String, Other };

inline CellKind classify(const ordered_json& j) {
  if (j.is_null()) return CellKind::Null;
  if (j.is_boolean()) return CellKind::Bool;
  if (j.is_number()) return CellKind::Number;
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "NaN" || s == "Inf" || s == "-Inf") return CellKind::SentinelString;
    return CellKind::String;
  }
  return CellKind::Other;
}

inline double sentinel_value(const std::string& s) {
  if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (s == "Inf") return std::numeric_limits<double>::infinity();
  return -std::numeric_limits<double>::infinity();
}

// Element type for a run of scalar cells: logicals need all bool/null;
// numbers admit the non-finite sentinel strings; otherwise strings.
template <typename Cells>
ElemType detect_elem_type(const Cells& cells) {
  bool any_bool = false, any_num = false, any_sentinel = false, any_str = false;
  for (const auto& c : cells) {
    switch (classify(c)) {
      case CellKind::Null: break;
      case CellKind::Bool: any_bool = true; break;
      case CellKind::Number: any_num = true; break;
      case CellKind::SentinelString: any_sentinel = true; break;
      case CellKind::String: any_str = true; break;
      case CellKind::Other:
        throw format_error("json: nested arrays are not a supported element");
    }
  }
  if (any_str) {
    if (any_bool || any_num)
      throw format_error("json: mixed element types in array");
    return ElemType::String;
  }
  if (any_bool) {
    if (any_num || any_sentinel) throw format_error("json: mixed element types in array");
    return ElemType::Logical;
  }
  if (any_num || any_sentinel) return ElemType::Number;
  // all null
  return ElemType::Logical;
}

template <typename Cells>
VectorData cells_to_vector(const Cells& cells) {
  VectorData v;
  v.type = detect_elem_type(cells);
  for (const auto& c : cells) {
    CellKind k = classify(c);
    bool na = k == CellKind::Null;
    v.na.push_back(na ? 1 : 0);
    switch (v.type) {
      case ElemType::Logical:
        v.log.push_back(!na && c.template get<bool>() ? 1 : 0);
        break;
      case ElemType::Number:
        if (na)
          v.num.push_back(0.0);
        else if (k == CellKind::SentinelString)
          v.num.push_back(sentinel_value(c.template get_ref<const std::string&>()));
        else
          v.num.push_back(c.template get<double>());
        break;
      case ElemType::String:
        v.str.push_back(na ? "" : (k == CellKind::SentinelString
                                       ? c.template get_ref<const std::string&>()
                                       : c.template get<std::string>()));
        break;
    }
  }
  return v;
}

}  // namespace detail

// JSON -> Value. Bare primitives import as scalars; arrays of primitives
// as vectors (null -> NA, sentinel strings -> non-finite numbers);
// objects as lists; arrays of identically-keyed objects as dataframes;
// arrays of equal-length arrays as dataframes with columns V1..Vp.
inline Value json_to_value(const ordered_json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_boolean()) return Value::logical(j.get<bool>());
  if (j.is_number()) return Value::number(j.get<double>());
  if (j.is_string()) return Value::string(j.get<std::string>());
  if (j.is_object()) {
    ListData l;
    for (const auto& [key, member] : j.items()) {
      if (key.empty()) throw format_error("json: object keys must be non-empty");
      l.items.emplace_back(key, json_to_value(member));
    }
    try {
      return Value::list(std::move(l));
    } catch (const Error& e) {
      throw format_error(std::string("json: ") + e.message());
    }
  }
  if (!j.is_array()) throw format_error("json: unsupported value");

  if (j.empty()) return Value::vector(number_vector({}));

  bool all_objects = true, all_arrays = true;
  for (const auto& item : j) {
    if (!item.is_object()) all_objects = false;
    if (!item.is_array()) all_arrays = false;
  }

  if (all_objects) {
    // rows must agree on the ordered key list
    std::vector<std::string> keys;
    for (const auto& [key, member] : j[0].items()) keys.push_back(key);
    if (keys.empty()) throw format_error("json: dataframe rows need at least one field");
    for (const auto& row : j) {
      std::vector<std::string> k2;
      for (const auto& [key, member] : row.items()) k2.push_back(key);
      if (k2 != keys) throw format_error("json: inconsistent keys across row objects");
    }
    FrameData f;
    for (const auto& key : keys) {
      std::vector<ordered_json> cells;
      for (const auto& row : j) cells.push_back(row.at(key));
      f.cols.emplace_back(key, detail::cells_to_vector(cells));
    }
    try {
      return Value::dataframe(std::move(f));
    } catch (const Error& e) {
      throw format_error(std::string("json: ") + e.message());
    }
  }

  if (all_arrays) {
    // matrix shape: each inner array is one row
    size_t ncol = j[0].size();
    if (ncol == 0) throw format_error("json: rows need at least one column");
    for (const auto& row : j)
      if (row.size() != ncol) throw format_error("json: ragged rows in nested array");
    FrameData f;
    for (size_t c = 0; c < ncol; ++c) {
      std::vector<ordered_json> cells;
      for (const auto& row : j) cells.push_back(row[c]);
      f.cols.emplace_back("V" + std::to_string(c + 1), detail::cells_to_vector(cells));
    }
    return Value::dataframe(std::move(f));
  }

  if (!all_objects && !all_arrays) {
    for (const auto& item : j)
      if (item.is_object() || item.is_array())
        throw format_error("json: arrays may not mix scalars with containers");
  }
  return Value::vector(detail::cells_to_vector(j));
}

inline Value json_bytes_to_value(const std::string& bytes) {
  ordered_json j = ordered_json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw format_error("invalid json");
  return json_to_value(j);
}

namespace detail {

inline ordered_json cmds_to_json(const lang::GraphicsRecording& rec) {
  ordered_json out = ordered_json::object();
  out["xmin"] = rec.xmin;
  out["xmax"] = rec.xmax;
  out["ymin"] = rec.ymin;
  out["ymax"] = rec.ymax;
  ordered_json cmds = ordered_json::array();
  for (const auto& c : rec.cmds) {
    ordered_json e = ordered_json::object();
    switch (c.kind) {
      case lang::DrawCmd::Kind::Canvas:
        e["cmd"] = "canvas";
        e["w"] = c.w;
        e["h"] = c.h;
        break;
      case lang::DrawCmd::Kind::Points:
        e["cmd"] = "points";
        e["x"] = c.xs;
        e["y"] = c.ys;
        e["radius"] = c.radius;
        e["color"] = c.color;
        break;
      case lang::DrawCmd::Kind::Polyline:
        e["cmd"] = "polyline";
        e["x"] = c.xs;
        e["y"] = c.ys;
        e["width"] = c.width;
        e["color"] = c.color;
        break;
      case lang::DrawCmd::Kind::Rect:
        e["cmd"] = "rect";
        e["x0"] = c.x0;
        e["y0"] = c.y0;
        e["x1"] = c.x1;
        e["y1"] = c.y1;
        e["fill"] = c.fill;
        break;
      case lang::DrawCmd::Kind::Axis:
        e["cmd"] = "axis";
        e["side"] = c.side;
        e["ticks"] = c.ticks;
        e["labels"] = c.labels;
        break;
      case lang::DrawCmd::Kind::Text:
        e["cmd"] = "text";
        e["x"] = c.x;
        e["y"] = c.y;
        e["text"] = c.text;
        e["size"] = c.size;
        e["anchor"] = c.anchor;
        break;
      case lang::DrawCmd::Kind::Title:
        e["cmd"] = "title";
        e["text"] = c.text;
        break;
    }
    cmds.push_back(std::move(e));
  }
  out["commands"] = std::move(cmds);
  return out;
}

}  // namespace detail

}  // namespace statgate::formats
