#pragma once

#include <string>

#include <json.hpp>

#include "statgate/error.hpp"
#include "statgate/lang/deparse.hpp"
#include "statgate/lang/parser.hpp"
#include "statgate/value.hpp"

namespace statgate::store {

// Persistence form for function values (R/{name}.fn in a session
// directory). Distinct from the bin interchange format, which refuses
// functions. Closures reattach to the base namespace on load.
inline std::string function_to_json(const FunctionData& f) {
  nlohmann::ordered_json j;
  j["builtin"] = f.builtin;
  j["variadic"] = f.variadic;
  j["visible"] = f.visible;
  auto params = nlohmann::ordered_json::array();
  for (const auto& p : f.params) {
    nlohmann::ordered_json e;
    e["name"] = p.name;
    if (p.default_expr) e["default"] = lang::deparse(*p.default_expr);
    params.push_back(std::move(e));
  }
  j["params"] = std::move(params);
  if (f.body) j["body"] = lang::deparse(*f.body);
  return j.dump();
}

inline Value function_from_json(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw format_error("bad function record");
  FunctionData f;
  f.builtin = j.value("builtin", std::string());
  f.variadic = j.value("variadic", false);
  f.visible = j.value("visible", true);
  if (j.contains("params")) {
    for (const auto& e : j["params"]) {
      FunctionData::Param p;
      p.name = e.at("name").get<std::string>();
      if (e.contains("default"))
        p.default_expr = lang::parse_single_expression(e["default"].get<std::string>());
      f.params.push_back(std::move(p));
    }
  }
  if (j.contains("body"))
    f.body = lang::parse_single_expression(j["body"].get<std::string>());
  return Value::function(std::move(f));
}

}  // namespace statgate::store
