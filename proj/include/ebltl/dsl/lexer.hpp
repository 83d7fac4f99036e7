#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ebltl/error.hpp"

namespace ebltl::dsl {

enum class Tok {
  Ident,
  Int,
  Sym,  // operator or punctuation, spelled in `text`
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;
  int line = 0;
  int column = 0;

  bool is(std::string_view s) const {
    return (kind == Tok::Sym || kind == Tok::Ident) && text == s;
  }
};

namespace detail {

// Unicode spellings accepted as aliases of the ASCII operators.
inline const std::vector<std::pair<std::string_view, std::string_view>>&
unicode_aliases() {
  static const std::vector<std::pair<std::string_view, std::string_view>> t = {
      {"∈", ":"},   {"∉", "/:"},  {"⊆", "<:"},
      {"∪", "\\/"}, {"∩", "/\\"}, {"∧", "&"},
      {"∨", "or"},  {"¬", "not"}, {"⇒", "=>"},
      {"⟹", "=>"},  {"→", "=>"},  {"⇔", "<=>"},
      {"≠", "/="},  {"≤", "<="},  {"≥", ">="},
      {"∅", "{}"},  {"‖", "||"},  {"−", "-"},
  };
  return t;
}

// Longest match first.
inline const std::vector<std::string_view>& ascii_symbols() {
  static const std::vector<std::string_view> t = {
      "<=>", "/<:", ":=", "::", "..", "/:", "<:", "\\/", "/\\", "=>", "/=",
      "<=",  ">=",  "||", "!=", "(",  ")",  "{",  "}",   "[",  "]",  ",",
      ":",   "=",   "<",  ">",  "+",  "-",  "*",  "/",   "&",  "|",  "!",
  };
  return t;
}

}  // namespace detail

/// Splits machine or formula text into tokens. `#` and `//` start comments
/// that run to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 15) throw ParseError("integer literal too large", line, col);
      t.value = std::stoll(t.text);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    if (static_cast<unsigned char>(c) >= 0x80) {
      for (const auto& [u, a] : detail::unicode_aliases()) {
        if (src.substr(i, u.size()) == u) {
          t.kind = (a == "or" || a == "not") ? Tok::Ident : Tok::Sym;
          t.text = std::string(a);
          advance(u.size());
          if (a == "{}") {
            Token close = t;
            t.text = "{";
            close.text = "}";
            out.push_back(std::move(t));
            out.push_back(std::move(close));
          } else {
            out.push_back(std::move(t));
          }
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError("unexpected character", line, col);
      continue;
    }
    for (auto s : detail::ascii_symbols()) {
      if (src.substr(i, s.size()) == s) {
        t.kind = Tok::Sym;
        t.text = std::string(s);
        advance(s.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  Token end;
  end.kind = Tok::End;
  end.text = "end-of-input";
  end.line = line;
  end.column = col;
  out.push_back(std::move(end));
  return out;
}

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const {
    size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool accept(std::string_view s) {
    if (peek().is(s)) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect(std::string_view s) {
    if (!peek().is(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }

  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what));
    return next().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found =
        t.kind == Tok::End ? "unexpected end-of-input" : "unexpected '" + t.text + "'";
    throw ParseError(msg + ", " + found, t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace ebltl::dsl
