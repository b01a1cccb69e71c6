#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statgate/container.hpp"
#include "statgate/error.hpp"
#include "statgate/formats/json_codec.hpp"
#include "statgate/keys.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

struct ArgumentSource {
  enum class Origin { UrlencodedField, MultipartField, MultipartFile, JsonBodyField };

  Origin origin = Origin::UrlencodedField;
  std::string name;
  std::string raw;              // field text or file bytes
  std::string client_filename;  // MultipartFile only
};

struct ImportedArg {
  std::string name;
  Value value;
  bool is_file = false;
  std::string filename;    // sanitized client filename (file arguments)
  std::string file_bytes;  // original upload
  // key-reference provenance for the call record
  bool from_key = false;
  std::string key;
  std::string key_object;  // empty when the reference was to .val
};

using SessionLookup =
    std::function<std::shared_ptr<const Container>(const std::string& key)>;
using CodeEvaluator = std::function<Value(const std::string& code)>;

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline bool ident_like(std::string_view s) {
  if (s.empty()) return false;
  char c0 = s[0];
  if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '.')) return false;
  for (char c : s.substr(1))
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_'))
      return false;
  return true;
}

inline std::string first_nonspace(const std::string& s) {
  size_t i = s.find_first_not_of(" \t\r\n");
  return i == std::string::npos ? "" : s.substr(i, 1);
}

}  // namespace detail

inline std::string url_decode(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    char c = in[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < in.size()) {
      int hi = detail::hex_digit(in[i + 1]);
      int lo = detail::hex_digit(in[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
      } else {
        out += c;
      }
    } else {
      out += c;
    }
  }
  return out;
}

inline std::vector<ArgumentSource> parse_urlencoded(std::string_view body) {
  std::vector<ArgumentSource> out;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t amp = body.find('&', pos);
    std::string_view pair =
        body.substr(pos, amp == std::string_view::npos ? body.size() - pos : amp - pos);
    if (!pair.empty()) {
      size_t eq = pair.find('=');
      ArgumentSource a;
      a.origin = ArgumentSource::Origin::UrlencodedField;
      if (eq == std::string_view::npos) {
        a.name = url_decode(pair);
      } else {
        a.name = url_decode(pair.substr(0, eq));
        a.raw = url_decode(pair.substr(eq + 1));
      }
      if (a.name.empty()) throw argument_error("argument with empty name");
      out.push_back(std::move(a));
    }
    if (amp == std::string_view::npos) break;
    pos = amp + 1;
  }
  return out;
}

inline std::vector<ArgumentSource> parse_json_body(const std::string& body) {
  ordered_json j = ordered_json::parse(body, nullptr, false);
  if (j.is_discarded()) throw argument_error("request body is not valid json");
  if (!j.is_object()) throw argument_error("json request body must be an object");
  std::vector<ArgumentSource> out;
  for (const auto& [key, member] : j.items()) {
    if (key.empty()) throw argument_error("argument with empty name");
    ArgumentSource a;
    a.origin = ArgumentSource::Origin::JsonBodyField;
    a.name = key;
    a.raw = member.dump();
    out.push_back(std::move(a));
  }
  return out;
}

inline std::string sanitize_filename(const std::string& name) {
  std::string base = name;
  size_t slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);
  if (base.empty() || base == "." || base == "..") base = "upload";
  return base;
}

// Resolves one posted argument. Text fields resolve in order: a bare
// session key to that session's .val, `key::name` to a named object,
// json text (leading [ or {) to a data structure, and anything else as a
// single expression of the language. Multipart files become the sanitized
// filename string; the bytes travel alongside for placement in the
// working directory.
inline ImportedArg import_argument(const ArgumentSource& src, const SessionLookup& lookup,
                                   const CodeEvaluator& eval_code) {
  ImportedArg out;
  out.name = src.name;
  auto fail = [&](const std::string& why) -> Error {
    return argument_error("argument '" + src.name + "': " + why);
  };

  if (src.origin == ArgumentSource::Origin::MultipartFile) {
    out.is_file = true;
    out.filename = sanitize_filename(src.client_filename);
    out.file_bytes = src.raw;
    out.value = Value::string(out.filename);
    return out;
  }

  if (src.origin == ArgumentSource::Origin::JsonBodyField) {
    try {
      out.value = json_bytes_to_value(src.raw);
    } catch (const Error& e) {
      throw fail(e.message());
    }
    return out;
  }

  // urlencoded / multipart text fields
  const std::string& text = src.raw;
  if (SessionKey::valid(text)) {
    auto c = lookup(text);
    if (!c) throw fail("unknown session key");
    const Value* v = c->find_name(".val");
    if (!v) throw fail("session has no .val object");
    out.value = *v;
    out.from_key = true;
    out.key = text;
    return out;
  }
  size_t sep = text.find("::");
  if (sep != std::string::npos && SessionKey::valid(text.substr(0, sep)) &&
      detail::ident_like(std::string_view(text).substr(sep + 2))) {
    auto c = lookup(text.substr(0, sep));
    if (!c) throw fail("unknown session key");
    std::string obj = text.substr(sep + 2);
    const Value* v = c->find_name(obj);
    if (!v) throw fail("session has no object '" + obj + "'");
    out.value = *v;
    out.from_key = true;
    out.key = text.substr(0, sep);
    out.key_object = obj;
    return out;
  }
  std::string head = detail::first_nonspace(text);
  if (head == "[" || head == "{") {
    try {
      out.value = json_bytes_to_value(text);
    } catch (const Error& e) {
      throw fail(e.message());
    }
    return out;
  }
  try {
    out.value = eval_code(text);
  } catch (const Error& e) {
    throw fail(e.message());
  }
  return out;
}

}  // namespace statgate::formats
