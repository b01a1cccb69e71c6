#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "statgate/error.hpp"
#include "statgate/formats/print.hpp"
#include "statgate/lang/builtins.hpp"
#include "statgate/lang/context.hpp"
#include "statgate/lang/parser.hpp"
#include "statgate/value.hpp"

namespace statgate::lang {

// One top-level statement's source text and the stdout it produced, kept
// so the console view can interleave them afterwards.
struct StatementTrace {
  std::string source;
  std::string output;
};

struct ScriptResult {
  // assignments in script order; the reserved .val entry is appended when
  // the last statement is an expression
  std::vector<std::pair<std::string, Value>> delta;
  std::vector<StatementTrace> trace;
};

class Interpreter {
 public:
  explicit Interpreter(EvalContext& ctx) : ctx_(ctx) {}

  Value eval(const Expr& e, const std::shared_ptr<Env>& env, int depth = 0) {
    switch (e.kind) {
      case Expr::Kind::Number:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::number(e.number);
      case Expr::Kind::String:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::string(e.text);
      case Expr::Kind::Logical:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::logical(e.logical);
      case Expr::Kind::Na:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::logical_na();
      case Expr::Kind::Nan:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::number(std::numeric_limits<double>::quiet_NaN());
      case Expr::Kind::Inf:
        ctx_.charge(1);
        ctx_.last_visible = true;
        return Value::number(std::numeric_limits<double>::infinity());
      case Expr::Kind::Null:
        ctx_.last_visible = true;
        return Value::null();
      case Expr::Kind::Ident: {
        const Value* v = env->find(e.text);
        if (!v) throw eval_error("object '" + e.text + "' not found");
        ctx_.last_visible = true;
        return *v;
      }
      case Expr::Kind::Call: {
        ctx_.check_deadline();
        if (depth > 200) throw eval_error("call stack too deep");
        Value callee = eval(*e.callee, env, depth + 1);
        if (callee.tag() != Tag::Function) {
          std::string what = e.callee->kind == Expr::Kind::Ident
                                 ? "'" + e.callee->text + "'"
                                 : std::string(tag_name(callee.tag()));
          throw eval_error("attempt to call a non-function: " + what);
        }
        std::vector<std::pair<std::string, Value>> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args)
          args.emplace_back(a.name, eval(*a.value, env, depth + 1));
        std::string display = e.callee->kind == Expr::Kind::Ident ? e.callee->text
                                                                  : "function";
        return invoke(callee.func(), std::move(args), display, depth + 1);
      }
      case Expr::Kind::Assign:
        throw eval_error("assignment is only allowed at the top level of a script");
    }
    throw eval_error("malformed expression");
  }

  // Positional-then-named matching with defaults; the entry point both
  // for in-language calls and for RPC requests targeting a function.
  Value call_function(const Value& fn,
                      std::vector<std::pair<std::string, Value>> args,
                      const std::string& display = "function") {
    if (fn.tag() != Tag::Function)
      throw eval_error("attempt to call a non-function: " + display);
    return invoke(fn.func(), std::move(args), display, 0);
  }

  // Evaluates statements in order against this context's local frame.
  // Top-level assignments populate the namespace delta; the value of a
  // non-assignment statement echoes to stdout (unless the call was
  // invisible) and, when it is the last statement, lands in `.val`.
  // The first error aborts: the caller discards the partial delta.
  ScriptResult run_script(const std::string& text) {
    auto stmts = parse(text);
    ScriptResult res;
    const auto& env = ctx_.locals();
    for (size_t i = 0; i < stmts.size(); ++i) {
      const Expr& st = *stmts[i];
      size_t out_before = ctx_.stdout_buf().size();
      if (st.kind == Expr::Kind::Assign) {
        Value v = eval(*st.assign_value, env);
        env->assign(st.assign_name, v);
        upsert(res.delta, st.assign_name, std::move(v));
      } else {
        Value v = eval(st, env);
        if (ctx_.last_visible) ctx_.print_line(formats::print_value(v));
        if (i + 1 == stmts.size()) upsert(res.delta, ".val", std::move(v));
      }
      res.trace.push_back({text.substr(st.src_begin, st.src_end - st.src_begin),
                           ctx_.stdout_buf().substr(out_before)});
    }
    return res;
  }

 private:
  static void upsert(std::vector<std::pair<std::string, Value>>& delta,
                     const std::string& name, Value v) {
    for (auto& [k, existing] : delta) {
      if (k == name) {
        existing = std::move(v);
        return;
      }
    }
    delta.emplace_back(name, std::move(v));
  }

  Value invoke(const FunctionData& fn, std::vector<std::pair<std::string, Value>> given,
               const std::string& display, int depth) {
    if (depth > 200) throw eval_error("call stack too deep");
    ctx_.check_deadline();

    CallArgs call;
    std::vector<const Value*> slots(fn.params.size(), nullptr);
    std::vector<Value> slot_storage(fn.params.size());
    std::vector<std::pair<std::string, Value>> positional;

    auto param_index = [&](const std::string& name) -> int {
      for (size_t i = 0; i < fn.params.size(); ++i)
        if (fn.params[i].name == name) return static_cast<int>(i);
      return -1;
    };

    for (auto& [name, value] : given) {
      if (name.empty()) {
        if (fn.variadic)
          call.extra.emplace_back("", std::move(value));
        else
          positional.emplace_back("", std::move(value));
        continue;
      }
      int idx = param_index(name);
      if (idx >= 0) {
        if (slots[idx])
          throw eval_error(display + ": duplicate argument '" + name + "'");
        slot_storage[idx] = std::move(value);
        slots[idx] = &slot_storage[idx];
      } else if (fn.variadic) {
        call.extra.emplace_back(name, std::move(value));
      } else {
        throw eval_error(display + ": unused argument '" + name + "'");
      }
    }
    size_t next_pos = 0;
    for (size_t i = 0; i < fn.params.size() && next_pos < positional.size(); ++i) {
      if (slots[i]) continue;
      slot_storage[i] = std::move(positional[next_pos].second);
      slots[i] = &slot_storage[i];
      ++next_pos;
    }
    if (next_pos < positional.size())
      throw eval_error(display + ": too many arguments");

    if (fn.is_builtin()) {
      auto base_frame = std::make_shared<Env>(ctx_.base());
      for (size_t i = 0; i < fn.params.size(); ++i) {
        if (slots[i]) {
          call.bound.emplace_back(fn.params[i].name, std::move(slot_storage[i]));
        } else if (fn.params[i].default_expr) {
          call.bound.emplace_back(fn.params[i].name,
                                  eval(*fn.params[i].default_expr, base_frame, depth + 1));
          call.defaulted.push_back(fn.params[i].name);
        } else {
          throw eval_error(display + ": missing required argument '" +
                           fn.params[i].name + "'");
        }
      }
      const auto& reg = builtin_registry();
      auto it = reg.find(fn.builtin);
      if (it == reg.end()) throw eval_error("unknown builtin '" + fn.builtin + "'");
      Value result = it->second.impl(ctx_, call);
      ctx_.last_visible = fn.visible;
      return result;
    }

    // user function: bind parameters into a fresh frame over the
    // defining namespace
    if (!call.extra.empty())
      throw eval_error(display + ": too many arguments");
    auto call_env = std::make_shared<Env>(fn.env ? fn.env : ctx_.base());
    for (size_t i = 0; i < fn.params.size(); ++i) {
      if (slots[i]) {
        call_env->assign(fn.params[i].name, std::move(slot_storage[i]));
      } else if (fn.params[i].default_expr) {
        call_env->assign(fn.params[i].name,
                         eval(*fn.params[i].default_expr, call_env, depth + 1));
      } else {
        throw eval_error(display + ": missing required argument '" +
                         fn.params[i].name + "'");
      }
    }
    if (!fn.body) throw eval_error(display + ": function has no body");
    Value result = eval(*fn.body, call_env, depth + 1);
    ctx_.last_visible = true;
    return result;
  }

  EvalContext& ctx_;
};

// Convenience wrapper: parse and evaluate one expression.
inline Value eval_expression(const std::string& code, EvalContext& ctx) {
  Interpreter interp(ctx);
  return interp.eval(*parse_single_expression(code), ctx.locals());
}

}  // namespace statgate::lang
