#pragma once

#include <chrono>
#include <string>

#include "statgate/lang/eval.hpp"

namespace testeval {

using namespace statgate;

struct Session {
  lang::EvalContext ctx;
  lang::Interpreter interp;

  explicit Session(uint64_t seed = 0, uint64_t cells = 10'000'000,
                   std::chrono::milliseconds timeout = std::chrono::seconds(30),
                   std::filesystem::path workdir = {})
      : ctx(lang::base_environment(), lang::Budget::with_limits(timeout, cells), seed,
            std::move(workdir)),
        interp(ctx) {}

  Value eval(const std::string& code) {
    return interp.eval(*lang::parse_single_expression(code), ctx.locals());
  }

  lang::ScriptResult run(const std::string& script) { return interp.run_script(script); }
};

inline Value eval1(const std::string& code, uint64_t seed = 0) {
  Session s(seed);
  return s.eval(code);
}

}  // namespace testeval
