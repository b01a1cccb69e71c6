#pragma once

#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "statgate/error.hpp"

namespace statgate::repro {

// Everything needed to re-execute an RPC without the original client:
// the call text, the seed drawn for it, and each argument materialized
// as bin bytes (key references keep a snapshot of the value they
// resolved to at call time), or as a stored file reference.
struct CallRecord {
  enum class Kind { FunctionCall, Script };

  struct Arg {
    enum class Kind { Literal, KeyRef, File };
    Kind kind = Kind::Literal;
    std::string name;
    std::string bin;       // Literal: the value; KeyRef: the snapshot
    std::string key;       // KeyRef
    std::string object;    // KeyRef: named object, empty for .val
    std::string filename;  // File
    std::string digest;    // File: sha-256 of the stored copy
  };

  Kind kind = Kind::FunctionCall;
  std::string library;       // "library" | "tmp" | "upload"
  std::string container_id;  // package name or session key; empty for uploads
  std::string target;        // function name or script path; empty for uploads
  std::string source;        // canonical call text / script text
  std::vector<Arg> args;
  uint64_t seed = 0;
};

namespace detail {

inline std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 0xF];
  }
  return out;
}

inline std::string from_hex(const std::string& hex) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2) throw format_error("call record: bad hex");
  std::string out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = nib(hex[i]), lo = nib(hex[i + 1]);
    if (hi < 0 || lo < 0) throw format_error("call record: bad hex");
    out += static_cast<char>(hi * 16 + lo);
  }
  return out;
}

}  // namespace detail

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw server_error("digest init failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw server_error("digest failed");
  return detail::to_hex(std::string(reinterpret_cast<char*>(digest), len));
}

inline std::string call_record_to_json(const CallRecord& rec) {
  nlohmann::ordered_json j;
  j["kind"] = rec.kind == CallRecord::Kind::FunctionCall ? "call" : "script";
  j["library"] = rec.library;
  j["container"] = rec.container_id;
  j["target"] = rec.target;
  j["source"] = rec.source;
  j["seed"] = rec.seed;
  auto args = nlohmann::ordered_json::array();
  for (const auto& a : rec.args) {
    nlohmann::ordered_json e;
    e["name"] = a.name;
    switch (a.kind) {
      case CallRecord::Arg::Kind::Literal:
        e["kind"] = "literal";
        e["bin"] = detail::to_hex(a.bin);
        break;
      case CallRecord::Arg::Kind::KeyRef:
        e["kind"] = "keyref";
        e["key"] = a.key;
        e["object"] = a.object;
        e["bin"] = detail::to_hex(a.bin);
        break;
      case CallRecord::Arg::Kind::File:
        e["kind"] = "file";
        e["filename"] = a.filename;
        e["digest"] = a.digest;
        break;
    }
    args.push_back(std::move(e));
  }
  j["args"] = std::move(args);
  return j.dump();
}

inline CallRecord call_record_from_json(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw format_error("call record: invalid json");
  CallRecord rec;
  try {
    rec.kind = j.at("kind").get<std::string>() == "call" ? CallRecord::Kind::FunctionCall
                                                         : CallRecord::Kind::Script;
    rec.library = j.at("library").get<std::string>();
    rec.container_id = j.at("container").get<std::string>();
    rec.target = j.at("target").get<std::string>();
    rec.source = j.at("source").get<std::string>();
    rec.seed = j.at("seed").get<uint64_t>();
    for (const auto& e : j.at("args")) {
      CallRecord::Arg a;
      a.name = e.at("name").get<std::string>();
      std::string kind = e.at("kind").get<std::string>();
      if (kind == "literal") {
        a.kind = CallRecord::Arg::Kind::Literal;
        a.bin = detail::from_hex(e.at("bin").get<std::string>());
      } else if (kind == "keyref") {
        a.kind = CallRecord::Arg::Kind::KeyRef;
        a.key = e.at("key").get<std::string>();
        a.object = e.at("object").get<std::string>();
        a.bin = detail::from_hex(e.at("bin").get<std::string>());
      } else if (kind == "file") {
        a.kind = CallRecord::Arg::Kind::File;
        a.filename = e.at("filename").get<std::string>();
        a.digest = e.at("digest").get<std::string>();
      } else {
        throw format_error("call record: unknown arg kind");
      }
      rec.args.push_back(std::move(a));
    }
  } catch (const nlohmann::ordered_json::exception&) {
    throw format_error("call record: malformed");
  }
  return rec;
}

}  // namespace statgate::repro
