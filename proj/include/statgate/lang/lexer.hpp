#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "statgate/error.hpp"

namespace statgate::lang {

struct Token {
  enum class Kind {
    Number,
    String,
    Ident,
    True,
    False,
    Na,
    NaN,
    Inf,
    Null,
    Arrow,      // <-
    Plus, Minus, Star, Slash, Caret,
    Lt, Gt, Le, Ge, EqEq, Ne,
    Eq,         // named-argument '='
    LParen, RParen, Comma,
    Newline, Semicolon,
    End,
  };

  Kind kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
  size_t offset = 0;
  size_t end_offset = 0;
};

// Newlines terminate statements only at paren depth zero; inside a call
// or parenthesized expression they are whitespace, which is what lets
// multi-line statements exist.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokens() {
    std::vector<Token> out;
    int depth = 0;
    for (;;) {
      Token t = next(depth);
      t.end_offset = pos_;
      if (t.kind == Token::Kind::LParen) ++depth;
      if (t.kind == Token::Kind::RParen && depth > 0) --depth;
      if (t.kind == Token::Kind::Newline && depth > 0) continue;
      out.push_back(t);
      if (t.kind == Token::Kind::End) break;
    }
    return out;
  }

 private:
  Token next(int depth) {
    skip_blank(depth);
    Token t;
    t.line = line_;
    t.col = col_;
    t.offset = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = src_[pos_];
    if (c == '\n') {
      advance();
      t.kind = Token::Kind::Newline;
      return t;
    }
    if (c == ';') {
      advance();
      t.kind = Token::Kind::Semicolon;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '.') return lex_ident(t);
    if (c == '"') return lex_string(t);
    switch (c) {
      case '+': advance(); t.kind = Token::Kind::Plus; return t;
      case '-': advance(); t.kind = Token::Kind::Minus; return t;
      case '*': advance(); t.kind = Token::Kind::Star; return t;
      case '/': advance(); t.kind = Token::Kind::Slash; return t;
      case '^': advance(); t.kind = Token::Kind::Caret; return t;
      case '(': advance(); t.kind = Token::Kind::LParen; return t;
      case ')': advance(); t.kind = Token::Kind::RParen; return t;
      case ',': advance(); t.kind = Token::Kind::Comma; return t;
      case '<':
        advance();
        if (peek() == '-') {
          advance();
          t.kind = Token::Kind::Arrow;
        } else if (peek() == '=') {
          advance();
          t.kind = Token::Kind::Le;
        } else {
          t.kind = Token::Kind::Lt;
        }
        return t;
      case '>':
        advance();
        if (peek() == '=') {
          advance();
          t.kind = Token::Kind::Ge;
        } else {
          t.kind = Token::Kind::Gt;
        }
        return t;
      case '=':
        advance();
        if (peek() == '=') {
          advance();
          t.kind = Token::Kind::EqEq;
        } else {
          t.kind = Token::Kind::Eq;
        }
        return t;
      case '!':
        advance();
        if (peek() == '=') {
          advance();
          t.kind = Token::Kind::Ne;
          return t;
        }
        throw parse_error("unexpected '!'", t.line, t.col);
      default:
        throw parse_error(std::string("unexpected character '") + c + "'", t.line, t.col);
    }
  }

  Token lex_number(Token t) {
    size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t mark = pos_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      } else {
        // not an exponent after all; back off to the mantissa
        col_ -= static_cast<int>(pos_ - mark);
        pos_ = mark;
      }
    }
    t.kind = Token::Kind::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.number = std::strtod(t.text.c_str(), nullptr);
    return t;
  }

  Token lex_ident(Token t) {
    size_t start = pos_;
    advance();
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_')
        advance();
      else
        break;
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    if (t.text == "TRUE") t.kind = Token::Kind::True;
    else if (t.text == "FALSE") t.kind = Token::Kind::False;
    else if (t.text == "NA") t.kind = Token::Kind::Na;
    else if (t.text == "NaN") t.kind = Token::Kind::NaN;
    else if (t.text == "Inf") t.kind = Token::Kind::Inf;
    else if (t.text == "NULL") t.kind = Token::Kind::Null;
    else t.kind = Token::Kind::Ident;
    return t;
  }

  Token lex_string(Token t) {
    advance();  // opening quote
    std::string s;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw parse_error("unterminated string literal", t.line, t.col);
      char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw parse_error("unterminated string literal", t.line, t.col);
        char e = src_[pos_];
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case 'r': s += '\r'; break;
          case '\\': s += '\\'; break;
          case '"': s += '"'; break;
          default:
            throw parse_error(std::string("unknown escape '\\") + e + "'", line_, col_);
        }
        advance();
        continue;
      }
      s += c;
      advance();
    }
    t.kind = Token::Kind::String;
    t.text = std::move(s);
    return t;
  }

  void skip_blank(int depth) {
    (void)depth;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void advance() {
    if (pos_ < src_.size()) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace statgate::lang
