#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/value.hpp"

namespace statgate {

struct ManualPage {
  std::string name;
  std::string title;
  std::string description;
  std::string usage;
  std::vector<std::pair<std::string, std::string>> arguments;  // ordered name -> text
};

// Path below a container: segments plus an optional trailing export
// format split off by the router. Segments are case-sensitive, non-empty,
// and free of traversal.
struct ResourcePath {
  std::string library;       // "library" | "tmp"
  std::string container_id;  // package name | session key
  std::vector<std::string> segments;
  std::optional<std::string> format;
  std::vector<std::pair<std::string, std::string>> params;

  static void validate_segment(const std::string& s) {
    if (s.empty()) throw not_found("empty path segment");
    if (s == "." || s == "..") throw not_found("path traversal is not allowed");
  }
};

// Uniform view over static packages and dynamic sessions. Immutable once
// built: packages after load, sessions after creation.
struct Container {
  enum class Kind { Package, Session };

  Kind kind = Kind::Package;
  std::vector<std::pair<std::string, Value>> names;               // namespace
  std::vector<std::pair<std::string, Value>> data;                // packages
  std::vector<std::pair<std::string, std::string>> files;         // rel path -> bytes
  std::vector<lang::GraphicsRecording> graphics;                  // sessions
  std::vector<ManualPage> manuals;                                // packages
  std::string source;                                             // sessions
  std::string stdout_text;                                        // sessions
  std::string console;                                            // sessions

  // meta
  std::string name;     // packages
  std::string version;  // packages
  int64_t created_at = 0;
  int64_t expires_at = 0;

  const Value* find_name(const std::string& n) const {
    for (const auto& [k, v] : names)
      if (k == n) return &v;
    return nullptr;
  }
  const Value* find_data(const std::string& n) const {
    for (const auto& [k, v] : data)
      if (k == n) return &v;
    return nullptr;
  }
  const ManualPage* find_manual(const std::string& n) const {
    for (const auto& m : manuals)
      if (m.name == n) return &m;
    return nullptr;
  }
  const std::string* find_file(const std::string& path) const {
    for (const auto& [p, bytes] : files)
      if (p == path) return &bytes;
    return nullptr;
  }
};

struct ResourceHandle {
  enum class Kind {
    Info,     // container root
    Object,   // namespace object
    Data,     // package data object
    Manual,
    Graphic,
    File,
    Listing,
    Source,
    Stdout,
    Console,
  };

  Kind kind = Kind::Info;
  const Value* object = nullptr;
  const ManualPage* manual = nullptr;
  const lang::GraphicsRecording* graphic = nullptr;
  const std::string* file_bytes = nullptr;
  std::string file_path;
  std::vector<std::string> listing;  // entry names
};

namespace detail {

inline bool hidden_name(const std::string& n) { return !n.empty() && n[0] == '.'; }

template <typename Pairs>
std::vector<std::string> visible_names(const Pairs& pairs) {
  std::vector<std::string> out;
  for (const auto& [k, v] : pairs)
    if (!hidden_name(k)) out.push_back(k);
  return out;
}

inline std::string join_segments(const std::vector<std::string>& segs, size_t from) {
  std::string out;
  for (size_t i = from; i < segs.size(); ++i) {
    if (i > from) out += '/';
    out += segs[i];
  }
  return out;
}

// Immediate children of a file-tree directory, files and subdirectories,
// deduplicated in file order.
inline std::vector<std::string> dir_children(const Container& c, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& [p, bytes] : c.files) {
    if (p.size() <= prefix.size() || p.compare(0, prefix.size(), prefix) != 0) continue;
    std::string rest = p.substr(prefix.size());
    auto slash = rest.find('/');
    std::string child = slash == std::string::npos ? rest : rest.substr(0, slash + 1);
    if (std::find(out.begin(), out.end(), child) == out.end()) out.push_back(child);
  }
  return out;
}

}  // namespace detail

// Resolves a path inside a container to the addressed resource. Never
// mutates the container; unknown names and out-of-range graphics indices
// raise not-found.
inline ResourceHandle resolve_resource(const Container& c,
                                       const std::vector<std::string>& segments) {
  for (const auto& s : segments) ResourcePath::validate_segment(s);

  ResourceHandle h;
  if (segments.empty()) {
    h.kind = ResourceHandle::Kind::Info;
    return h;
  }
  const std::string& head = segments[0];

  if (head == "R") {
    if (segments.size() == 1) {
      h.kind = ResourceHandle::Kind::Listing;
      h.listing = detail::visible_names(c.names);
      return h;
    }
    if (segments.size() == 2) {
      if (const Value* v = c.find_name(segments[1])) {
        h.kind = ResourceHandle::Kind::Object;
        h.object = v;
        return h;
      }
      throw not_found("no object '" + segments[1] + "' in this container");
    }
    throw not_found("no such resource");
  }

  if (c.kind == Container::Kind::Package) {
    if (head == "data") {
      if (segments.size() == 1) {
        h.kind = ResourceHandle::Kind::Listing;
        h.listing = detail::visible_names(c.data);
        return h;
      }
      if (segments.size() == 2) {
        if (const Value* v = c.find_data(segments[1])) {
          h.kind = ResourceHandle::Kind::Data;
          h.object = v;
          return h;
        }
        throw not_found("no data set '" + segments[1] + "' in this package");
      }
      throw not_found("no such resource");
    }
    if (head == "man") {
      if (segments.size() == 1) {
        h.kind = ResourceHandle::Kind::Listing;
        for (const auto& m : c.manuals) h.listing.push_back(m.name);
        return h;
      }
      if (segments.size() == 2) {
        if (const ManualPage* m = c.find_manual(segments[1])) {
          h.kind = ResourceHandle::Kind::Manual;
          h.manual = m;
          return h;
        }
        throw not_found("no manual page for '" + segments[1] + "'");
      }
      throw not_found("no such resource");
    }
    // Anything else addresses the package file tree.
    std::string path = detail::join_segments(segments, 0);
    if (const std::string* bytes = c.find_file(path)) {
      h.kind = ResourceHandle::Kind::File;
      h.file_bytes = bytes;
      h.file_path = path;
      return h;
    }
    auto children = detail::dir_children(c, path + "/");
    if (!children.empty()) {
      h.kind = ResourceHandle::Kind::Listing;
      h.listing = std::move(children);
      return h;
    }
    throw not_found("no file '" + path + "' in this package");
  }

  // Session containers.
  if (head == "graphics") {
    if (segments.size() == 1) {
      h.kind = ResourceHandle::Kind::Listing;
      for (size_t i = 1; i <= c.graphics.size(); ++i) h.listing.push_back(std::to_string(i));
      return h;
    }
    if (segments.size() == 2) {
      const std::string& idx = segments[1];
      bool numeric = !idx.empty() && idx.find_first_not_of("0123456789") == std::string::npos;
      if (!numeric) throw not_found("graphics are addressed by 1-based index");
      unsigned long n = std::strtoul(idx.c_str(), nullptr, 10);
      if (n == 0 || n > c.graphics.size())
        throw not_found("no graphic " + idx + " in this session");
      h.kind = ResourceHandle::Kind::Graphic;
      h.graphic = &c.graphics[n - 1];
      return h;
    }
    throw not_found("no such resource");
  }
  if (head == "source" && segments.size() == 1) {
    h.kind = ResourceHandle::Kind::Source;
    return h;
  }
  if (head == "stdout" && segments.size() == 1) {
    h.kind = ResourceHandle::Kind::Stdout;
    return h;
  }
  if (head == "console" && segments.size() == 1) {
    h.kind = ResourceHandle::Kind::Console;
    return h;
  }
  if (head == "files") {
    if (segments.size() == 1) {
      h.kind = ResourceHandle::Kind::Listing;
      for (const auto& [p, bytes] : c.files) h.listing.push_back(p);
      return h;
    }
    std::string path = detail::join_segments(segments, 1);
    if (const std::string* bytes = c.find_file(path)) {
      h.kind = ResourceHandle::Kind::File;
      h.file_bytes = bytes;
      h.file_path = path;
      return h;
    }
    auto children = detail::dir_children(c, path + "/");
    if (!children.empty()) {
      h.kind = ResourceHandle::Kind::Listing;
      h.listing = std::move(children);
      return h;
    }
    throw not_found("no file '" + path + "' in this session");
  }
  throw not_found("no such resource in this session");
}

}  // namespace statgate
