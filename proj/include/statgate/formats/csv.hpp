#pragma once

#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/formats/number_format.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

namespace detail {

inline void append_quoted(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

inline std::string number_cell(double x, char dec) {
  std::string s = format_number_roundtrip(x);
  if (dec != '.') {
    for (char& c : s)
      if (c == '.') c = dec;
  }
  return s;
}

struct RawCell {
  std::string text;
  bool quoted = false;
};

// RFC 4180 field splitting; CRLF and LF both end records.
inline std::vector<std::vector<RawCell>> split_csv(std::string_view in, char sep) {
  std::vector<std::vector<RawCell>> rows;
  std::vector<RawCell> row;
  RawCell cell;
  bool in_quotes = false;
  bool cell_started = false;
  size_t i = 0;
  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell = RawCell{};
    cell_started = false;
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < in.size()) {
    char c = in[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < in.size() && in[i + 1] == '"') {
          cell.text += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      cell.text += c;
      ++i;
      continue;
    }
    if (c == '"' && !cell_started) {
      in_quotes = true;
      cell.quoted = true;
      cell_started = true;
      ++i;
      continue;
    }
    if (c == sep) {
      end_cell();
      ++i;
      continue;
    }
    if (c == '\r') {
      if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
      end_row();
      ++i;
      continue;
    }
    if (c == '\n') {
      end_row();
      ++i;
      continue;
    }
    cell.text += c;
    cell_started = true;
    ++i;
  }
  if (in_quotes) throw format_error("csv: unterminated quoted field");
  if (cell_started || !row.empty()) end_row();
  return rows;
}

inline bool parse_number_cell(const std::string& s, double& out) {
  if (s == "NaN") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (s == "Inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "-Inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace detail

// Writes a dataframe as delimited text: a header line of column names,
// then one line per row. String cells and column names are always
// quoted; NA cells are empty fields. The defaults are RFC 4180 csv; tab
// export passes its sep/eol/dec parameters through.
inline std::string frame_to_csv(const FrameData& f, char sep = ',',
                                const std::string& eol = "\n", char dec = '.') {
  std::string out;
  for (size_t c = 0; c < f.cols.size(); ++c) {
    if (c) out += sep;
    detail::append_quoted(out, f.cols[c].first);
  }
  out += eol;
  size_t nrow = f.nrow();
  for (size_t r = 0; r < nrow; ++r) {
    for (size_t c = 0; c < f.cols.size(); ++c) {
      if (c) out += sep;
      const VectorData& col = f.cols[c].second;
      if (col.is_na(r)) continue;  // empty field
      switch (col.type) {
        case ElemType::Logical: out += col.log[r] ? "TRUE" : "FALSE"; break;
        case ElemType::Number: out += detail::number_cell(col.num[r], dec); break;
        case ElemType::String: detail::append_quoted(out, col.str[r]); break;
      }
    }
    out += eol;
  }
  return out;
}

// Parses RFC 4180 csv into a dataframe. Column types are detected per
// column: any quoted cell makes it a string column; otherwise all-number
// cells (including NaN/Inf/-Inf) make numbers and all-TRUE/FALSE cells
// make logicals. Empty unquoted cells are NA; quoted empty cells are
// empty strings.
inline FrameData csv_to_frame(std::string_view bytes) {
  auto rows = detail::split_csv(bytes, ',');
  if (rows.empty()) throw format_error("csv: missing header line");
  const auto& header = rows[0];
  size_t ncol = header.size();
  if (ncol == 0) throw format_error("csv: empty header line");
  for (size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != ncol)
      throw format_error("csv: row " + std::to_string(r + 1) + " has " +
                         std::to_string(rows[r].size()) + " fields, expected " +
                         std::to_string(ncol));

  size_t nrow = rows.size() - 1;
  FrameData f;
  for (size_t c = 0; c < ncol; ++c) {
    bool any_quoted = false;
    bool all_number = true;
    bool all_logical = true;
    bool any_present = false;
    for (size_t r = 1; r <= nrow; ++r) {
      const auto& cell = rows[r][c];
      if (cell.quoted) any_quoted = true;
      if (!cell.quoted && cell.text.empty()) continue;  // NA
      any_present = true;
      double d;
      if (!detail::parse_number_cell(cell.text, d)) all_number = false;
      if (cell.text != "TRUE" && cell.text != "FALSE") all_logical = false;
    }
    VectorData col;
    if (any_quoted || !any_present) {
      col.type = any_present || any_quoted ? ElemType::String : ElemType::Number;
    } else if (all_logical) {
      col.type = ElemType::Logical;
    } else if (all_number) {
      col.type = ElemType::Number;
    } else {
      col.type = ElemType::String;
    }
    // a quoted cell anywhere forces strings even if unquoted cells look numeric
    if (any_quoted) col.type = ElemType::String;

    for (size_t r = 1; r <= nrow; ++r) {
      const auto& cell = rows[r][c];
      bool na = !cell.quoted && cell.text.empty();
      col.na.push_back(na ? 1 : 0);
      switch (col.type) {
        case ElemType::Logical:
          col.log.push_back(!na && cell.text == "TRUE" ? 1 : 0);
          break;
        case ElemType::Number: {
          double d = 0;
          if (!na) detail::parse_number_cell(cell.text, d);
          col.num.push_back(d);
          break;
        }
        case ElemType::String:
          col.str.push_back(na ? "" : cell.text);
          break;
      }
    }
    std::string name = header[c].text;
    if (name.empty()) name = "V" + std::to_string(c + 1);
    f.cols.emplace_back(std::move(name), std::move(col));
  }
  // reject duplicate column names the same way the value model would
  try {
    Value::dataframe(f);
  } catch (const Error& e) {
    throw format_error(std::string("csv: ") + e.message());
  }
  return f;
}

}  // namespace statgate::formats
