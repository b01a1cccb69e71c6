#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>

namespace statgate::api {

struct GatewayConfig {
  std::string root_prefix = "/ocpu";
  std::filesystem::path package_root;
  std::filesystem::path session_root;

  // per-request resource budget
  std::chrono::milliseconds timeout{30'000};
  uint64_t cell_limit = 10'000'000;
  uint64_t max_body = 16ull * 1024 * 1024;

  // session lifecycle
  std::chrono::seconds ttl{24 * 3600};
  size_t max_sessions = 10'000;
  uint64_t max_session_bytes = 64ull * 1024 * 1024;
};

}  // namespace statgate::api
