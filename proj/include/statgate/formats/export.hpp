#pragma once

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "statgate/container.hpp"
#include "statgate/error.hpp"
#include "statgate/formats/bin_codec.hpp"
#include "statgate/formats/csv.hpp"
#include "statgate/formats/json_codec.hpp"
#include "statgate/formats/png.hpp"
#include "statgate/formats/print.hpp"
#include "statgate/formats/svg.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

// A client-chosen representation: format id plus formatting parameters.
struct ExportFormat {
  std::string id;
  std::vector<std::pair<std::string, std::string>> params;

  const std::string* param(const std::string& name) const {
    for (const auto& [k, v] : params)
      if (k == name) return &v;
    return nullptr;
  }
};

struct Exported {
  std::string bytes;
  std::string media_type;
};

inline bool known_format_id(const std::string& id) {
  return id == "print" || id == "json" || id == "csv" || id == "tab" || id == "bin" ||
         id == "svg" || id == "png";
}

// Table rows this server intentionally does not implement: recognized so
// requests for them fail with a format error instead of a missing route.
inline bool reserved_format_id(const std::string& id) {
  return id == "pb" || id == "pdf" || id == "rda" || id == "rds";
}

inline bool manual_format_id(const std::string& id) {
  return id == "text" || id == "html";
}

namespace detail {

inline void reject_unknown_params(const ExportFormat& f,
                                  std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : f.params) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok)
      throw format_error("format '" + f.id + "' accepts no parameter '" + k + "'");
  }
}

inline int dimension_param(const ExportFormat& f, const char* name, int fallback) {
  const std::string* s = f.param(name);
  if (!s) return fallback;
  char* end = nullptr;
  long v = std::strtol(s->c_str(), &end, 10);
  if (end != s->c_str() + s->size() || v < 1 || v > 5000)
    throw format_error("format '" + f.id + "': parameter '" + std::string(name) +
                       "' must be an integer between 1 and 5000");
  return static_cast<int>(v);
}

struct TabParams {
  char sep = '\t';
  std::string eol = "\n";
  char dec = '.';
};

inline TabParams tab_params(const ExportFormat& f) {
  reject_unknown_params(f, {"sep", "eol", "dec"});
  TabParams p;
  if (const std::string* s = f.param("sep")) {
    if (s->size() != 1) throw format_error("format 'tab': 'sep' must be one character");
    p.sep = (*s)[0];
  }
  if (const std::string* s = f.param("eol")) {
    if (*s != "\n" && *s != "\r\n")
      throw format_error("format 'tab': 'eol' must be LF or CRLF");
    p.eol = *s;
  }
  if (const std::string* s = f.param("dec")) {
    if (*s != "." && *s != ",")
      throw format_error("format 'tab': 'dec' must be '.' or ','");
    p.dec = (*s)[0];
  }
  return p;
}

}  // namespace detail

inline Exported export_graphic(const lang::GraphicsRecording& rec,
                               const ExportFormat& f) {
  if (f.id == "svg" || f.id == "png") {
    detail::reject_unknown_params(f, {"width", "height"});
    int w = detail::dimension_param(f, "width", 640);
    int h = detail::dimension_param(f, "height", 480);
    if (f.id == "svg") return {render_svg(rec, w, h), "image/svg+xml"};
    return {render_png(rec, w, h), "image/png"};
  }
  if (f.id == "print") {
    detail::reject_unknown_params(f, {});
    return {print_value(Value::graphic(rec)) + "\n", "text/plain"};
  }
  if (f.id == "bin") {
    detail::reject_unknown_params(f, {});
    return {encode_bin(Value::graphic(rec)), "application/octet-stream"};
  }
  if (f.id == "json") {
    detail::reject_unknown_params(f, {});
    return {value_to_json(Value::graphic(rec)).dump(), "application/json"};
  }
  if (reserved_format_id(f.id))
    throw format_error("format '" + f.id + "' is not supported by this server");
  throw format_error("format '" + f.id + "' is not applicable to graphics");
}

// Export any value per the applicability matrix: print applies to
// everything, json/bin to any non-function value, csv/tab to dataframes,
// svg/png to graphics. Everything else is a format error.
inline Exported export_value(const Value& v, const ExportFormat& f) {
  if (f.id == "print") {
    detail::reject_unknown_params(f, {});
    return {print_value(v) + "\n", "text/plain"};
  }
  if (f.id == "json") {
    detail::reject_unknown_params(f, {});
    if (v.tag() == Tag::Function)
      throw format_error("format 'json' is not applicable to functions");
    return {value_to_json(v).dump(), "application/json"};
  }
  if (f.id == "bin") {
    detail::reject_unknown_params(f, {});
    if (v.tag() == Tag::Function)
      throw format_error("format 'bin' is not applicable to functions");
    return {encode_bin(v), "application/octet-stream"};
  }
  if (f.id == "csv") {
    detail::reject_unknown_params(f, {});
    if (v.tag() != Tag::Dataframe)
      throw format_error("format 'csv' is only applicable to dataframes");
    return {frame_to_csv(v.frame()), "text/csv"};
  }
  if (f.id == "tab") {
    if (v.tag() != Tag::Dataframe)
      throw format_error("format 'tab' is only applicable to dataframes");
    auto p = detail::tab_params(f);
    return {frame_to_csv(v.frame(), p.sep, p.eol, p.dec), "text/plain"};
  }
  if (f.id == "svg" || f.id == "png") {
    if (v.tag() != Tag::Graphic)
      throw format_error("format '" + f.id + "' is only applicable to graphics");
    return export_graphic(v.graphic_rec(), f);
  }
  if (reserved_format_id(f.id))
    throw format_error("format '" + f.id + "' is not supported by this server");
  if (manual_format_id(f.id))
    throw format_error("format '" + f.id + "' is only applicable to manual pages");
  throw format_error("unknown format '" + f.id + "'");
}

// Manual pages render as plain text or html.
inline Exported export_manual(const ManualPage& m, const std::string& fmt) {
  if (fmt == "text") {
    std::string out;
    out += "Name: " + m.name + "\n\n";
    out += "Title: " + m.title + "\n\n";
    if (!m.description.empty()) out += "Description:\n  " + m.description + "\n\n";
    if (!m.usage.empty()) out += "Usage:\n  " + m.usage + "\n";
    if (!m.arguments.empty()) {
      out += "\nArguments:\n";
      for (const auto& [name, text] : m.arguments) out += "  " + name + ": " + text + "\n";
    }
    return {out, "text/plain"};
  }
  if (fmt == "html") {
    auto esc = [](const std::string& s) {
      std::string out;
      for (char c : s) {
        switch (c) {
          case '&': out += "&amp;"; break;
          case '<': out += "&lt;"; break;
          case '>': out += "&gt;"; break;
          default: out += c;
        }
      }
      return out;
    };
    std::string out = "<!DOCTYPE html>\n<html><head><title>" + esc(m.name) +
                      "</title></head><body>\n";
    out += "<h1>" + esc(m.name) + "</h1>\n";
    out += "<p><b>" + esc(m.title) + "</b></p>\n";
    if (!m.description.empty()) out += "<p>" + esc(m.description) + "</p>\n";
    if (!m.usage.empty()) out += "<pre>" + esc(m.usage) + "</pre>\n";
    if (!m.arguments.empty()) {
      out += "<dl>\n";
      for (const auto& [name, text] : m.arguments)
        out += "<dt>" + esc(name) + "</dt><dd>" + esc(text) + "</dd>\n";
      out += "</dl>\n";
    }
    out += "</body></html>\n";
    return {out, "text/html"};
  }
  if (reserved_format_id(fmt))
    throw format_error("format '" + fmt + "' is not supported by this server");
  throw format_error("format '" + fmt + "' is not applicable to manual pages");
}

}  // namespace statgate::formats
