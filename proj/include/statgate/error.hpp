#pragma once

#include <exception>
#include <string>
#include <utility>

namespace statgate {

// One error taxonomy for the whole gateway. The first four kinds are the
// language-level errors; the rest are raised by codecs, argument
// resolution, routing, and the store.
enum class ErrorKind {
  Parse,
  Eval,
  Numeric,
  Resource,
  Format,
  Argument,
  NotFound,
  Method,
  Server,
};

class Error : public std::exception {
 public:
  Error(ErrorKind kind, std::string message, int line = -1, int col = -1)
      : kind_(kind), message_(std::move(message)), line_(line), col_(col) {
    if (message_.empty()) message_ = "unspecified error";
  }

  ErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int col() const { return col_; }
  bool has_location() const { return line_ >= 0; }

  const char* what() const noexcept override { return message_.c_str(); }

 private:
  ErrorKind kind_;
  std::string message_;
  int line_;
  int col_;
};

inline Error parse_error(std::string msg, int line = -1, int col = -1) {
  return Error(ErrorKind::Parse, std::move(msg), line, col);
}
inline Error eval_error(std::string msg) { return Error(ErrorKind::Eval, std::move(msg)); }
inline Error numeric_error(std::string msg) { return Error(ErrorKind::Numeric, std::move(msg)); }
inline Error resource_error(std::string msg) { return Error(ErrorKind::Resource, std::move(msg)); }
inline Error format_error(std::string msg) { return Error(ErrorKind::Format, std::move(msg)); }
inline Error argument_error(std::string msg) { return Error(ErrorKind::Argument, std::move(msg)); }
inline Error not_found(std::string msg) { return Error(ErrorKind::NotFound, std::move(msg)); }
inline Error server_error(std::string msg) { return Error(ErrorKind::Server, std::move(msg)); }

}  // namespace statgate
