#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/lang/graphics.hpp"
#include "statgate/rng.hpp"
#include "statgate/value.hpp"

namespace statgate::lang {

// Wall-clock deadline plus an allocation budget counted in value cells.
// Cells are charged before the memory they describe is allocated, so a
// hostile request fails on the budget, not on host memory.
struct Budget {
  std::chrono::steady_clock::time_point deadline;
  uint64_t cell_limit = 10'000'000;
  uint64_t cells_used = 0;

  static Budget with_limits(std::chrono::milliseconds timeout, uint64_t cells) {
    Budget b;
    b.deadline = std::chrono::steady_clock::now() + timeout;
    b.cell_limit = cells;
    return b;
  }
};

// Lexical frame chain: script locals -> request arguments -> builtins.
class Env {
 public:
  explicit Env(std::shared_ptr<const Env> parent = nullptr) : parent_(std::move(parent)) {}

  const Value* find(const std::string& name) const {
    for (const Env* e = this; e != nullptr; e = e->parent_.get()) {
      for (const auto& [k, v] : e->vars_)
        if (k == name) return &v;
    }
    return nullptr;
  }

  // Binds or rebinds in this frame only.
  void assign(const std::string& name, Value v) {
    for (auto& [k, existing] : vars_) {
      if (k == name) {
        existing = std::move(v);
        return;
      }
    }
    vars_.emplace_back(name, std::move(v));
  }

  const std::vector<std::pair<std::string, Value>>& vars() const { return vars_; }
  const std::shared_ptr<const Env>& parent() const { return parent_; }

 private:
  std::shared_ptr<const Env> parent_;
  std::vector<std::pair<std::string, Value>> vars_;
};

// One RPC's isolated world. Contexts share nothing mutable; any number of
// evaluations may run in parallel.
class EvalContext {
 public:
  EvalContext(std::shared_ptr<const Env> base, Budget budget, uint64_t seed,
              std::filesystem::path workdir = {})
      : base_(std::move(base)),
        locals_(std::make_shared<Env>(base_)),
        budget_(budget),
        rng_(seed),
        recorded_seed_(seed),
        workdir_(std::move(workdir)) {}

  const std::shared_ptr<Env>& locals() { return locals_; }
  const std::shared_ptr<const Env>& base() const { return base_; }

  void charge(uint64_t cells) {
    budget_.cells_used += cells;
    if (budget_.cells_used > budget_.cell_limit)
      throw resource_error("cell limit exceeded (requested " +
                           std::to_string(budget_.cells_used) + " cells, limit " +
                           std::to_string(budget_.cell_limit) + ")");
  }

  void check_deadline() const {
    if (std::chrono::steady_clock::now() > budget_.deadline)
      throw resource_error("time limit exceeded");
  }

  Budget& budget() { return budget_; }
  LangRng& rng() { return rng_; }
  uint64_t recorded_seed() const { return recorded_seed_; }

  void print_line(const std::string& text) {
    stdout_buf_ += text;
    stdout_buf_ += '\n';
  }
  void warn(const std::string& fn, const std::string& msg) {
    stdout_buf_ += "Warning: " + fn + ": " + msg + "\n";
  }
  std::string& stdout_buf() { return stdout_buf_; }

  GraphicsDevice& device() { return device_; }
  const std::filesystem::path& workdir() const { return workdir_; }

  bool last_visible = true;

 private:
  std::shared_ptr<const Env> base_;
  std::shared_ptr<Env> locals_;
  Budget budget_;
  LangRng rng_;
  uint64_t recorded_seed_;
  std::filesystem::path workdir_;
  std::string stdout_buf_;
  GraphicsDevice device_;
};

}  // namespace statgate::lang
