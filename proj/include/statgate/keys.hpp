#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <string_view>

#include "statgate/error.hpp"
#include "statgate/rng.hpp"

namespace statgate {

// Unguessable token naming a session container; also the access
// credential for it.
struct SessionKey {
  std::string text;

  // ^x[0-9a-f]{19}$
  static bool valid(std::string_view s) {
    if (s.size() != 20 || s[0] != 'x') return false;
    for (size_t i = 1; i < s.size(); ++i) {
      char c = s[i];
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
  }
};

// Produces session keys: 'x' plus the first 19 hex characters of two
// consecutive 64-bit draws (76 random bits). The default source is the
// system entropy device; the deterministic mode feeds a splitmix64
// stream instead so tests can pin the emitted keys.
class KeyGenerator {
 public:
  static KeyGenerator random() { return KeyGenerator(false, 0); }
  static KeyGenerator deterministic(uint64_t seed) { return KeyGenerator(true, seed); }

  SessionKey next() {
    std::lock_guard<std::mutex> lock(*mu_);
    uint64_t a, b;
    if (deterministic_) {
      a = stream_.next();
      b = stream_.next();
    } else {
      try {
        std::random_device rd;
        a = (static_cast<uint64_t>(rd()) << 32) | rd();
        b = (static_cast<uint64_t>(rd()) << 32) | rd();
      } catch (const std::exception& e) {
        throw server_error(std::string("entropy source unavailable: ") + e.what());
      }
    }
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                  static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
    return SessionKey{"x" + std::string(buf, 19)};
  }

 private:
  KeyGenerator(bool det, uint64_t seed)
      : mu_(std::make_unique<std::mutex>()), deterministic_(det), stream_(seed) {}

  std::unique_ptr<std::mutex> mu_;
  bool deterministic_;
  SplitMix64 stream_;
};

}  // namespace statgate
