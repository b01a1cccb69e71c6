#pragma once

#include <string>
#include <vector>

#include "statgate/lang/eval.hpp"

namespace statgate::repro {

namespace detail {

inline void append_prompted(std::string& out, const std::string& source) {
  bool first = true;
  size_t pos = 0;
  while (pos <= source.size()) {
    size_t nl = source.find('\n', pos);
    std::string line =
        nl == std::string::npos ? source.substr(pos) : source.substr(pos, nl - pos);
    out += first ? "> " : "+ ";
    out += line;
    out += '\n';
    first = false;
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
}

}  // namespace detail

// Mixed source and stdout emulating console output: each statement's
// source prefixed "> " ("+ " on continuation lines) followed by whatever
// it printed. An error message, when present, terminates the transcript.
inline std::string build_console(const std::vector<lang::StatementTrace>& trace,
                                 const std::string& error = "") {
  std::string out;
  for (const auto& t : trace) {
    detail::append_prompted(out, t.source);
    out += t.output;
  }
  if (!error.empty()) out += "Error: " + error + "\n";
  return out;
}

inline std::string build_console_for_call(const std::string& source,
                                          const std::string& output,
                                          const std::string& error = "") {
  std::vector<lang::StatementTrace> one = {{source, output}};
  return build_console(one, error);
}

}  // namespace statgate::repro
