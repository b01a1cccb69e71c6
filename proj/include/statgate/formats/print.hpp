#pragma once

#include <string>
#include <vector>

#include "statgate/formats/number_format.hpp"
#include "statgate/lang/deparse.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

namespace detail {

constexpr size_t kConsoleWidth = 80;

inline std::string pad_left(const std::string& s, size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}
inline std::string pad_right(const std::string& s, size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

// Per-element display strings. Strings are quoted (NA excepted); numbers
// share a common decimal count within the vector.
inline std::vector<std::string> vector_cells(const VectorData& v, bool quote_strings) {
  std::vector<std::string> out(v.size());
  switch (v.type) {
    case ElemType::Number:
      return format_number_column(v.num, v.na);
    case ElemType::Logical:
      for (size_t i = 0; i < v.size(); ++i)
        out[i] = v.is_na(i) ? "NA" : (v.log[i] ? "TRUE" : "FALSE");
      return out;
    case ElemType::String:
      for (size_t i = 0; i < v.size(); ++i)
        out[i] = v.is_na(i) ? "NA"
                            : (quote_strings ? lang::detail::quote_string(v.str[i]) : v.str[i]);
      return out;
  }
  return out;
}

inline std::string print_vector(const VectorData& v) {
  if (v.size() == 0) {
    switch (v.type) {
      case ElemType::Logical: return "logical(0)";
      case ElemType::Number: return "numeric(0)";
      case ElemType::String: return "character(0)";
    }
  }
  std::vector<std::string> cells = vector_cells(v, true);
  size_t elem_w = 0;
  for (const auto& s : cells) elem_w = std::max(elem_w, s.size());
  size_t prefix_w = std::to_string(v.size()).size() + 2;  // "[k]"
  size_t per_line = (kConsoleWidth - prefix_w) / (elem_w + 1);
  if (per_line == 0) per_line = 1;

  bool left = v.type == ElemType::String;
  std::string out;
  for (size_t start = 0; start < cells.size(); start += per_line) {
    if (start) out += '\n';
    out += pad_left("[" + std::to_string(start + 1) + "]", prefix_w);
    size_t end = std::min(start + per_line, cells.size());
    for (size_t i = start; i < end; ++i) {
      out += ' ';
      std::string cell = left ? pad_right(cells[i], elem_w) : pad_left(cells[i], elem_w);
      if (left && i == end - 1) {
        while (!cell.empty() && cell.back() == ' ') cell.pop_back();
      }
      out += cell;
    }
  }
  return out;
}

inline std::string print_dataframe(const FrameData& f) {
  if (f.ncol() == 0) return "data frame with 0 columns and 0 rows";
  size_t nrow = f.nrow();
  std::vector<std::string> row_labels(nrow);
  size_t label_w = 0;
  for (size_t r = 0; r < nrow; ++r) {
    row_labels[r] = std::to_string(r + 1);
    label_w = std::max(label_w, row_labels[r].size());
  }
  struct Col {
    std::string name;
    std::vector<std::string> cells;
    size_t width;
  };
  std::vector<Col> cols;
  for (const auto& [name, v] : f.cols) {
    Col c;
    c.name = name;
    c.cells = vector_cells(v, false);
    c.width = name.size();
    for (const auto& s : c.cells) c.width = std::max(c.width, s.size());
    cols.push_back(std::move(c));
  }
  std::string out(label_w, ' ');
  for (const auto& c : cols) out += " " + pad_left(c.name, c.width);
  for (size_t r = 0; r < nrow; ++r) {
    out += '\n';
    out += pad_left(row_labels[r], label_w);
    for (const auto& c : cols) out += " " + pad_left(c.cells[r], c.width);
  }
  return out;
}

}  // namespace detail

// Console rendering: atomic vectors as 80-column wrapped lines with
// 1-based "[k]" start indices, dataframes as aligned columns with a
// header and row numbers. NA prints as NA, NaN as NaN, infinities as
// Inf/-Inf; numbers use up to 7 significant digits.
inline std::string print_value(const Value& v) {
  switch (v.tag()) {
    case Tag::Null:
      return "NULL";
    case Tag::Logical: {
      VectorData one;
      one.type = ElemType::Logical;
      one.na = {v.logical_scalar().na};
      one.log = {static_cast<uint8_t>(v.logical_scalar().value)};
      return detail::print_vector(one);
    }
    case Tag::Number: {
      VectorData one;
      one.type = ElemType::Number;
      one.na = {v.number_scalar().na};
      one.num = {v.number_scalar().value};
      return detail::print_vector(one);
    }
    case Tag::String: {
      VectorData one = string_vector({v.string_scalar()});
      return detail::print_vector(one);
    }
    case Tag::Vector:
      return detail::print_vector(v.vec());
    case Tag::List: {
      const auto& items = v.list_data().items;
      if (items.empty()) return "list()";
      std::string out;
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += "\n\n";
        out += "$" + items[i].first + "\n" + print_value(items[i].second);
      }
      return out;
    }
    case Tag::Dataframe:
      return detail::print_dataframe(v.frame());
    case Tag::Function:
      return lang::deparse_value(v);
    case Tag::Graphic:
      return "<graphics recording (" + std::to_string(v.graphic_rec().cmds.size()) +
             " commands)>";
  }
  return "";
}

}  // namespace statgate::formats
