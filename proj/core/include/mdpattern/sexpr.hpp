#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mdpattern/error.hpp"

namespace mdpattern {

enum class TokenKind {
  LParen,
  RParen,
  LBracket,
  RBracket,
  Symbol,
  Integer,
  String,      ///< text holds the raw characters between the quotes, escapes untouched
  BraceBlock,  ///< text holds the block verbatim, outer braces included
};

struct Token {
  TokenKind kind;
  std::string text;
  std::int64_t int_value = 0;
  SourceLocation location;
};

/// Splits MD source into tokens. `;` line comments and `/* */` block comments are dropped.
/// Throws Error(UnterminatedString | UnterminatedBlock | UnterminatedComment | UnexpectedToken).
[[nodiscard]] std::vector<Token> tokenize(std::string_view source, std::string_view file = {});

enum class SExprKind { Symbol, Integer, String, BraceBlock, List, Vector };

/// Generic parsed form of MD text. Atoms keep their source spelling so that
/// serialization reproduces the input up to whitespace.
class SExpr {
 public:
  SExpr() = default;

  static SExpr symbol(std::string name, SourceLocation at = {});
  static SExpr integer(std::int64_t value, std::string spelling = {}, SourceLocation at = {});
  static SExpr string(std::string raw, SourceLocation at = {});
  static SExpr brace_block(std::string verbatim, SourceLocation at = {});
  static SExpr list(std::vector<SExpr> items, SourceLocation at = {});
  static SExpr vector(std::vector<SExpr> items, SourceLocation at = {});

  [[nodiscard]] SExprKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_symbol() const noexcept { return kind_ == SExprKind::Symbol; }
  [[nodiscard]] bool is_integer() const noexcept { return kind_ == SExprKind::Integer; }
  [[nodiscard]] bool is_string() const noexcept { return kind_ == SExprKind::String; }
  [[nodiscard]] bool is_brace_block() const noexcept { return kind_ == SExprKind::BraceBlock; }
  [[nodiscard]] bool is_list() const noexcept { return kind_ == SExprKind::List; }
  [[nodiscard]] bool is_vector() const noexcept { return kind_ == SExprKind::Vector; }
  [[nodiscard]] bool is_atom() const noexcept { return !is_list() && !is_vector(); }

  /// Symbol name, integer spelling, raw string contents, or brace-block text.
  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] std::int64_t int_value() const noexcept { return int_value_; }
  [[nodiscard]] const std::vector<SExpr>& items() const noexcept { return items_; }
  [[nodiscard]] std::vector<SExpr>& items() noexcept { return items_; }
  [[nodiscard]] const SourceLocation& location() const noexcept { return location_; }

  /// Structural equality; locations are ignored.
  friend bool operator==(const SExpr& a, const SExpr& b);

 private:
  SExprKind kind_ = SExprKind::List;
  std::string text_;
  std::int64_t int_value_ = 0;
  std::vector<SExpr> items_;
  SourceLocation location_;
};

/// Single-line rendering: one space between items, atoms in their source spelling.
[[nodiscard]] std::string to_string(const SExpr& expr);
void write_sexpr(std::string& out, const SExpr& expr);

/// Parses every datum in `source`. Atoms are allowed at top level.
/// Throws Error(UnbalancedParen | UnexpectedToken) in addition to tokenizer errors.
[[nodiscard]] std::vector<SExpr> parse_sexprs(std::string_view source, std::string_view file = {});

/// Parses exactly one datum; anything else is UnexpectedToken.
[[nodiscard]] SExpr parse_sexpr(std::string_view source, std::string_view file = {});

}  // namespace mdpattern
