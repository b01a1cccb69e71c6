#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "statgate/container.hpp"
#include "statgate/error.hpp"
#include "statgate/formats/bin_codec.hpp"
#include "statgate/keys.hpp"
#include "statgate/store/fn_codec.hpp"
#include "statgate/store/package.hpp"
#include "statgate/version.hpp"

namespace statgate::store {

struct StoreConfig {
  fs::path session_root;
  std::chrono::seconds ttl{24 * 3600};
  size_t max_sessions = 10000;
  uint64_t max_session_bytes = 64ull * 1024 * 1024;
};

struct SessionOutputs {
  std::vector<std::pair<std::string, Value>> names;
  std::vector<lang::GraphicsRecording> graphics;
  std::vector<std::pair<std::string, std::string>> files;  // rel name -> bytes
  std::string source;
  std::string stdout_text;
  std::string console;
};

// Write-through session store: one directory per session mirroring the
// API tree (R/ as one bin file per object, graphics/NNN.rec, files/,
// source.txt, stdout.txt, console.txt, call.json, meta), published by an
// atomic rename so readers never see a partial session. Reads go through
// a small in-memory cache of recent sessions.
class SessionStore {
 public:
  SessionStore(StoreConfig cfg, KeyGenerator keygen)
      : cfg_(std::move(cfg)), keygen_(std::move(keygen)) {
    fs::create_directories(cfg_.session_root);
  }

  const StoreConfig& config() const { return cfg_; }

  // Durably writes the outputs plus the serialized call record; the key
  // is returned only after the rename that makes the session visible.
  SessionKey save(const SessionOutputs& out, const std::string& call_record) {
    // encode everything first so the size limit is enforced before any
    // disk write
    std::vector<std::pair<std::string, std::string>> blobs;  // rel path -> bytes
    uint64_t total = 0;
    auto add = [&](std::string rel, std::string bytes) {
      total += bytes.size();
      blobs.emplace_back(std::move(rel), std::move(bytes));
    };
    for (const auto& [name, v] : out.names) {
      if (v.tag() == Tag::Function)
        add("R/" + name + ".fn", function_to_json(v.func()));
      else
        add("R/" + name + ".bin", formats::encode_bin(v));
    }
    for (size_t i = 0; i < out.graphics.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%03zu", i + 1);
      add("graphics/" + std::string(buf) + ".rec",
          formats::encode_recording(out.graphics[i]));
    }
    for (const auto& [rel, bytes] : out.files) add("files/" + rel, bytes);
    add("source.txt", out.source);
    add("stdout.txt", out.stdout_text);
    add("console.txt", out.console);
    add("call.json", call_record);
    if (total > cfg_.max_session_bytes)
      throw resource_error("session size " + std::to_string(total) +
                           " exceeds the per-session limit of " +
                           std::to_string(cfg_.max_session_bytes) + " bytes");

    SessionKey key = keygen_.next();
    int64_t now = unix_now();
    std::string meta = "created_at: " + std::to_string(now) + "\n" +
                       "expires_at: " + std::to_string(now + cfg_.ttl.count()) + "\n" +
                       "version: " + std::string(kVersion) + "\n";
    add("meta", meta);

    fs::path tmp = cfg_.session_root / (".tmp-" + key.text);
    fs::path final_dir = cfg_.session_root / key.text;
    try {
      for (const auto& [rel, bytes] : blobs) {
        fs::path p = tmp / rel;
        fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw server_error("cannot write " + p.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw server_error("short write to " + p.string());
      }
      // the session also always carries the directories the API exposes
      fs::create_directories(tmp / "R");
      fs::create_directories(tmp / "graphics");
      fs::create_directories(tmp / "files");
      fs::rename(tmp, final_dir);
    } catch (...) {
      std::error_code ec;
      fs::remove_all(tmp, ec);
      throw;
    }
    return key;
  }

  // Sessions past their expiry behave as absent.
  std::shared_ptr<const Container> load(const std::string& key) {
    if (!SessionKey::valid(key)) return nullptr;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) {
        if (it->second.container->expires_at > unix_now()) {
          touch(key);
          return it->second.container;
        }
        evict_from_cache(key);
        return nullptr;
      }
    }
    fs::path dir = cfg_.session_root / key;
    if (!fs::is_directory(dir)) return nullptr;
    std::shared_ptr<Container> c;
    try {
      c = read_session_dir(dir);
    } catch (const Error&) {
      return nullptr;  // damaged sessions behave as absent
    }
    if (c->expires_at <= unix_now()) return nullptr;
    {
      std::lock_guard<std::mutex> lock(mu_);
      insert_cache(key, c);
    }
    return c;
  }

  std::string load_call_record(const std::string& key) {
    fs::path p = cfg_.session_root / key / "call.json";
    if (!SessionKey::valid(key) || !fs::is_regular_file(p))
      throw not_found("no session '" + key + "'");
    return detail::read_file(p);
  }

  // Removes expired sessions, then the oldest live ones while the count
  // exceeds max_sessions. Best effort: unreadable entries are skipped.
  size_t evict_expired(int64_t now) {
    size_t removed = 0;
    std::vector<std::pair<int64_t, fs::path>> live;  // created_at -> dir
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(cfg_.session_root, ec)) {
      if (!entry.is_directory()) continue;
      std::string name = entry.path().filename().string();
      if (!SessionKey::valid(name)) continue;  // tmp dirs and strangers
      int64_t created = 0, expires = 0;
      if (!read_meta(entry.path(), created, expires)) continue;
      if (expires <= now) {
        fs::remove_all(entry.path(), ec);
        if (!ec) {
          ++removed;
          std::lock_guard<std::mutex> lock(mu_);
          evict_from_cache(name);
        }
      } else {
        live.emplace_back(created, entry.path());
      }
    }
    if (live.size() > cfg_.max_sessions) {
      std::sort(live.begin(), live.end());
      size_t excess = live.size() - cfg_.max_sessions;
      for (size_t i = 0; i < excess; ++i) {
        fs::remove_all(live[i].second, ec);
        if (!ec) {
          ++removed;
          std::lock_guard<std::mutex> lock(mu_);
          evict_from_cache(live[i].second.filename().string());
        }
      }
    }
    return removed;
  }

  static int64_t unix_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }

 private:
  struct CacheEntry {
    std::shared_ptr<const Container> container;
    std::list<std::string>::iterator recency;
  };

  static bool read_meta(const fs::path& dir, int64_t& created, int64_t& expires) {
    std::ifstream in(dir / "meta");
    if (!in) return false;
    std::string line;
    while (std::getline(in, line)) {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string k = detail::trim(line.substr(0, colon));
      std::string v = detail::trim(line.substr(colon + 1));
      if (k == "created_at") created = std::strtoll(v.c_str(), nullptr, 10);
      if (k == "expires_at") expires = std::strtoll(v.c_str(), nullptr, 10);
    }
    return expires != 0;
  }

  std::shared_ptr<Container> read_session_dir(const fs::path& dir) {
    auto c = std::make_shared<Container>();
    c->kind = Container::Kind::Session;
    if (!read_meta(dir, c->created_at, c->expires_at))
      throw server_error("session meta unreadable");

    if (fs::is_directory(dir / "R")) {
      std::vector<fs::path> objs;
      for (const auto& e : fs::directory_iterator(dir / "R"))
        if (e.is_regular_file() &&
            (e.path().extension() == ".bin" || e.path().extension() == ".fn"))
          objs.push_back(e.path());
      std::sort(objs.begin(), objs.end());
      for (const auto& p : objs) {
        if (p.extension() == ".fn")
          c->names.emplace_back(p.stem().string(),
                                function_from_json(detail::read_file(p)));
        else
          c->names.emplace_back(p.stem().string(),
                                formats::decode_bin(detail::read_file(p)));
      }
    }
    if (fs::is_directory(dir / "graphics")) {
      std::vector<fs::path> recs;
      for (const auto& e : fs::directory_iterator(dir / "graphics"))
        if (e.is_regular_file() && e.path().extension() == ".rec")
          recs.push_back(e.path());
      std::sort(recs.begin(), recs.end());
      for (const auto& p : recs)
        c->graphics.push_back(formats::decode_recording(detail::read_file(p)));
    }
    if (fs::is_directory(dir / "files")) {
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(dir / "files"))
        if (e.is_regular_file()) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files)
        c->files.emplace_back(fs::relative(p, dir / "files").generic_string(),
                              detail::read_file(p));
    }
    if (fs::is_regular_file(dir / "source.txt")) c->source = detail::read_file(dir / "source.txt");
    if (fs::is_regular_file(dir / "stdout.txt"))
      c->stdout_text = detail::read_file(dir / "stdout.txt");
    if (fs::is_regular_file(dir / "console.txt"))
      c->console = detail::read_file(dir / "console.txt");
    return c;
  }

  // cache helpers; callers hold mu_
  void insert_cache(const std::string& key, std::shared_ptr<const Container> c) {
    if (cache_.count(key)) return;
    recency_.push_front(key);
    cache_[key] = CacheEntry{std::move(c), recency_.begin()};
    while (cache_.size() > kCacheCap) {
      std::string victim = recency_.back();
      recency_.pop_back();
      cache_.erase(victim);
    }
  }
  void touch(const std::string& key) {
    auto it = cache_.find(key);
    if (it == cache_.end()) return;
    recency_.erase(it->second.recency);
    recency_.push_front(key);
    it->second.recency = recency_.begin();
  }
  void evict_from_cache(const std::string& key) {
    auto it = cache_.find(key);
    if (it == cache_.end()) return;
    recency_.erase(it->second.recency);
    cache_.erase(it);
  }

  static constexpr size_t kCacheCap = 128;

  StoreConfig cfg_;
  KeyGenerator keygen_;
  std::mutex mu_;
  std::map<std::string, CacheEntry> cache_;
  std::list<std::string> recency_;
};

}  // namespace statgate::store
