#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "statgate/container.hpp"
#include "statgate/error.hpp"
#include "statgate/formats/csv.hpp"
#include "statgate/formats/json_codec.hpp"
#include "statgate/lang/eval.hpp"

namespace statgate::store {

namespace fs = std::filesystem;

struct PackageRecord {
  std::string id;
  std::string version;
  std::shared_ptr<const Container> container;
  fs::path loaded_from;
};

namespace detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw server_error("cannot read file " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

// Flat key: value text, one pair per line; # comments allowed.
inline std::map<std::string, std::string> parse_manifest(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& line : split_lines(text)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t colon = t.find(':');
    if (colon == std::string::npos) throw server_error("manifest line without ':'");
    kv[trim(t.substr(0, colon))] = trim(t.substr(colon + 1));
  }
  return kv;
}

// Sectioned manual format: name/title/description/usage headers at column
// zero, then an arguments: block of indented "name: text" lines.
// Indented continuation lines extend the previous value.
inline ManualPage parse_manual(const std::string& text, const std::string& stem) {
  ManualPage m;
  m.name = stem;
  std::string* current = nullptr;
  bool in_arguments = false;
  for (const auto& raw : split_lines(text)) {
    if (raw.empty()) continue;
    bool indented = raw[0] == ' ' || raw[0] == '\t';
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (!indented) {
      in_arguments = false;
      size_t colon = line.find(':');
      std::string key = colon == std::string::npos ? line : trim(line.substr(0, colon));
      std::string value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (key == "name") {
        if (!value.empty()) m.name = value;
        current = nullptr;
      } else if (key == "title") {
        m.title = value;
        current = &m.title;
      } else if (key == "description") {
        m.description = value;
        current = &m.description;
      } else if (key == "usage") {
        m.usage = value;
        current = &m.usage;
      } else if (key == "arguments") {
        in_arguments = true;
        current = nullptr;
      } else {
        current = nullptr;  // unknown sections ignored
      }
      continue;
    }
    if (in_arguments) {
      size_t colon = line.find(':');
      if (colon == std::string::npos) {
        if (!m.arguments.empty()) {
          m.arguments.back().second += " " + line;
          continue;
        }
        throw server_error("manual argument line without ':'");
      }
      m.arguments.emplace_back(trim(line.substr(0, colon)), trim(line.substr(colon + 1)));
    } else if (current) {
      if (!current->empty()) *current += ' ';
      *current += line;
    }
  }
  return m;
}

}  // namespace detail

// Loads one package directory: MANIFEST (name, version), R/*.r scripts
// evaluated into the namespace with seed 0 and a strict budget, data/*
// loaded as values named by file stem, man/*.txt manuals, and every other
// file served verbatim. Namespace/data name collisions and script errors
// are load errors naming the offending file.
inline PackageRecord load_package_dir(const fs::path& dir) {
  auto fail = [&dir](const std::string& why) -> Error {
    return server_error("package " + dir.string() + ": " + why);
  };

  if (!fs::is_directory(dir)) throw fail("not a directory");
  fs::path manifest_path = dir / "MANIFEST";
  if (!fs::is_regular_file(manifest_path)) throw fail("missing MANIFEST");

  std::map<std::string, std::string> manifest;
  try {
    manifest = detail::parse_manifest(detail::read_file(manifest_path));
  } catch (const Error& e) {
    throw fail(std::string("MANIFEST: ") + e.message());
  }
  if (!manifest.count("name") || manifest["name"].empty())
    throw fail("MANIFEST: missing 'name'");
  if (!manifest.count("version") || manifest["version"].empty())
    throw fail("MANIFEST: missing 'version'");

  auto container = std::make_shared<Container>();
  container->kind = Container::Kind::Package;
  container->name = manifest["name"];
  container->version = manifest["version"];

  // R/ scripts, in name order, sharing one namespace
  std::vector<fs::path> scripts;
  if (fs::is_directory(dir / "R")) {
    for (const auto& entry : fs::directory_iterator(dir / "R")) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".r" || ext == ".R") scripts.push_back(entry.path());
    }
    std::sort(scripts.begin(), scripts.end());
  }
  if (!scripts.empty()) {
    lang::EvalContext ctx(lang::base_environment(),
                          lang::Budget::with_limits(std::chrono::seconds(10), 10'000'000),
                          0);
    lang::Interpreter interp(ctx);
    for (const auto& script : scripts) {
      try {
        auto result = interp.run_script(detail::read_file(script));
        for (auto& [name, v] : result.delta) {
          if (name == ".val") continue;
          bool replaced = false;
          for (auto& [k, existing] : container->names) {
            if (k == name) {
              existing = v;
              replaced = true;
              break;
            }
          }
          if (!replaced) container->names.emplace_back(name, std::move(v));
        }
      } catch (const Error& e) {
        throw fail("R/" + script.filename().string() + ": " + e.message());
      }
    }
  }

  // data/ sets named by file stem
  if (fs::is_directory(dir / "data")) {
    std::vector<fs::path> data_files;
    for (const auto& entry : fs::directory_iterator(dir / "data"))
      if (entry.is_regular_file()) data_files.push_back(entry.path());
    std::sort(data_files.begin(), data_files.end());
    for (const auto& file : data_files) {
      std::string ext = file.extension().string();
      std::string stem = file.stem().string();
      if (ext != ".csv" && ext != ".json") continue;
      if (container->find_data(stem))
        throw fail("data/" + file.filename().string() + ": duplicate data set '" + stem +
                   "'");
      if (container->find_name(stem))
        throw fail("data/" + file.filename().string() + ": name '" + stem +
                   "' collides with a namespace object");
      try {
        if (ext == ".csv") {
          container->data.emplace_back(
              stem, Value::dataframe(formats::csv_to_frame(detail::read_file(file))));
        } else {
          container->data.emplace_back(
              stem, formats::json_bytes_to_value(detail::read_file(file)));
        }
      } catch (const Error& e) {
        throw fail("data/" + file.filename().string() + ": " + e.message());
      }
    }
  }

  // man/ pages; each must document an object or data set
  if (fs::is_directory(dir / "man")) {
    std::vector<fs::path> man_files;
    for (const auto& entry : fs::directory_iterator(dir / "man"))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        man_files.push_back(entry.path());
    std::sort(man_files.begin(), man_files.end());
    for (const auto& file : man_files) {
      ManualPage m;
      try {
        m = detail::parse_manual(detail::read_file(file), file.stem().string());
      } catch (const Error& e) {
        throw fail("man/" + file.filename().string() + ": " + e.message());
      }
      if (!container->find_name(m.name) && !container->find_data(m.name))
        throw fail("man/" + file.filename().string() + ": no object or data set named '" +
                   m.name + "'");
      container->manuals.push_back(std::move(m));
    }
  }

  // every other file, verbatim, relative to the package root
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), dir);
    auto first = rel.begin();
    std::string head = first != rel.end() ? first->string() : "";
    if (head == "R" || head == "data" || head == "man") continue;
    container->files.emplace_back(rel.generic_string(), detail::read_file(entry.path()));
  }
  std::sort(container->files.begin(), container->files.end());

  PackageRecord rec;
  rec.id = container->name;
  rec.version = container->version;
  rec.container = container;
  rec.loaded_from = dir;
  return rec;
}

// Registry of loaded packages. Lookups read an atomic snapshot; reloads
// swap the snapshot wholesale.
class PackageRegistry {
 public:
  using Snapshot = std::map<std::string, PackageRecord>;

  // Loads every subdirectory of root that carries a MANIFEST.
  void load_root(const fs::path& root) {
    auto snap = std::make_shared<Snapshot>();
    if (!root.empty()) {
      if (!fs::is_directory(root)) throw server_error("package root " + root.string() +
                                                      " is not a directory");
      std::vector<fs::path> dirs;
      for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::is_regular_file(entry.path() / "MANIFEST"))
          dirs.push_back(entry.path());
      std::sort(dirs.begin(), dirs.end());
      for (const auto& dir : dirs) {
        PackageRecord rec = load_package_dir(dir);
        (*snap)[rec.id] = std::move(rec);
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    snapshot_ = std::move(snap);
  }

  void add(PackageRecord rec) {
    std::lock_guard<std::mutex> lock(mu_);
    auto snap = std::make_shared<Snapshot>(*snapshot_);
    (*snap)[rec.id] = std::move(rec);
    snapshot_ = std::move(snap);
  }

  std::shared_ptr<const Container> find(const std::string& name) const {
    auto snap = current();
    auto it = snap->find(name);
    return it == snap->end() ? nullptr : it->second.container;
  }

  std::vector<std::string> names() const {
    auto snap = current();
    std::vector<std::string> out;
    for (const auto& [name, rec] : *snap) out.push_back(name);
    return out;
  }

 private:
  std::shared_ptr<const Snapshot> current() const {
    std::lock_guard<std::mutex> lock(mu_);
    return snapshot_;
  }

  mutable std::mutex mu_;
  std::shared_ptr<const Snapshot> snapshot_ = std::make_shared<Snapshot>();
};

}  // namespace statgate::store
