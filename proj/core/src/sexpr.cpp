#include "mdpattern/sexpr.hpp"

#include <charconv>
#include <optional>

namespace mdpattern {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool ends_symbol(char c) {
  return is_space(c) || c == '(' || c == ')' || c == '[' || c == ']' || c == '"' || c == ';' ||
         c == '{' || c == '}';
}

/// Decimal or 0x-prefixed hex with an optional sign; nullopt if the lexeme is not
/// a number or does not fit in 64 bits.
std::optional<std::int64_t> parse_integer(std::string_view lexeme) {
  std::string_view body = lexeme;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  int base = 10;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
    base = 16;
    body.remove_prefix(2);
  }
  if (body.empty()) return std::nullopt;
  std::uint64_t magnitude = 0;
  auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), magnitude, base);
  if (ec != std::errc{} || end != body.data() + body.size()) return std::nullopt;
  if (negative) {
    if (magnitude > static_cast<std::uint64_t>(INT64_MAX) + 1) return std::nullopt;
    return static_cast<std::int64_t>(0 - magnitude);
  }
  if (magnitude > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
  return static_cast<std::int64_t>(magnitude);
}

class Lexer {
 public:
  Lexer(std::string_view source, std::string_view file) : src_(source), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      tokens.push_back(next());
    }
    return tokens;
  }

 private:
  SourceLocation here() const { return SourceLocation{std::string(file_), line_, column_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (is_space(c)) {
        advance();
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const SourceLocation start = here();
        advance();
        advance();
        for (;;) {
          if (pos_ >= src_.size()) {
            throw Error(ErrorCode::UnterminatedComment, "block comment is never closed", start);
          }
          if (src_[pos_] == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  Token punct(TokenKind kind) {
    Token t{kind, std::string(1, src_[pos_]), 0, here()};
    advance();
    return t;
  }

  Token next() {
    switch (src_[pos_]) {
      case '(': return punct(TokenKind::LParen);
      case ')': return punct(TokenKind::RParen);
      case '[': return punct(TokenKind::LBracket);
      case ']': return punct(TokenKind::RBracket);
      case '"': return string_literal();
      case '{': return brace_block();
      case '}': throw Error(ErrorCode::UnexpectedToken, "stray '}'", here());
      default: return word();
    }
  }

  Token string_literal() {
    const SourceLocation start = here();
    advance();
    const std::size_t begin = pos_;
    for (;;) {
      if (pos_ >= src_.size()) {
        throw Error(ErrorCode::UnterminatedString, "string literal is never closed", start);
      }
      const char c = src_[pos_];
      if (c == '"') break;
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) continue;
      }
      advance();
    }
    Token t{TokenKind::String, std::string(src_.substr(begin, pos_ - begin)), 0, start};
    advance();
    return t;
  }

  Token brace_block() {
    const SourceLocation start = here();
    const std::size_t begin = pos_;
    int depth = 0;
    for (;;) {
      if (pos_ >= src_.size()) {
        throw Error(ErrorCode::UnterminatedBlock, "unbalanced '{'", start);
      }
      const char c = src_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') --depth;
      advance();
      if (depth == 0) break;
    }
    return Token{TokenKind::BraceBlock, std::string(src_.substr(begin, pos_ - begin)), 0, start};
  }

  Token word() {
    const SourceLocation start = here();
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && !ends_symbol(src_[pos_]) && !(src_[pos_] == '/' && peek(1) == '*')) {
      advance();
    }
    std::string lexeme(src_.substr(begin, pos_ - begin));
    if (auto value = parse_integer(lexeme)) {
      return Token{TokenKind::Integer, std::move(lexeme), *value, start};
    }
    return Token{TokenKind::Symbol, std::move(lexeme), 0, start};
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  SExpr datum() {
    const Token& t = tokens_[pos_];
    switch (t.kind) {
      case TokenKind::LParen: return sequence(TokenKind::RParen);
      case TokenKind::LBracket: return sequence(TokenKind::RBracket);
      case TokenKind::RParen:
      case TokenKind::RBracket:
        throw Error(ErrorCode::UnbalancedParen, "unmatched '" + t.text + "'", t.location);
      case TokenKind::Symbol: ++pos_; return SExpr::symbol(t.text, t.location);
      case TokenKind::Integer: ++pos_; return SExpr::integer(t.int_value, t.text, t.location);
      case TokenKind::String: ++pos_; return SExpr::string(t.text, t.location);
      case TokenKind::BraceBlock: ++pos_; return SExpr::brace_block(t.text, t.location);
    }
    throw Error(ErrorCode::UnexpectedToken, "unknown token", t.location);
  }

 private:
  SExpr sequence(TokenKind closer) {
    const SourceLocation start = tokens_[pos_].location;
    ++pos_;
    std::vector<SExpr> items;
    for (;;) {
      if (done()) {
        throw Error(ErrorCode::UnbalancedParen,
                    closer == TokenKind::RParen ? "'(' is never closed" : "'[' is never closed",
                    start);
      }
      const Token& t = tokens_[pos_];
      if (t.kind == closer) {
        ++pos_;
        break;
      }
      if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBracket) {
        throw Error(ErrorCode::UnexpectedToken, "mismatched '" + t.text + "'", t.location);
      }
      items.push_back(datum());
    }
    return closer == TokenKind::RParen ? SExpr::list(std::move(items), start)
                                       : SExpr::vector(std::move(items), start);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, std::string_view file) {
  return Lexer(source, file).run();
}

SExpr SExpr::symbol(std::string name, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::Symbol;
  e.text_ = std::move(name);
  e.location_ = std::move(at);
  return e;
}

SExpr SExpr::integer(std::int64_t value, std::string spelling, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::Integer;
  e.int_value_ = value;
  e.text_ = spelling.empty() ? std::to_string(value) : std::move(spelling);
  e.location_ = std::move(at);
  return e;
}

SExpr SExpr::string(std::string raw, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::String;
  e.text_ = std::move(raw);
  e.location_ = std::move(at);
  return e;
}

SExpr SExpr::brace_block(std::string verbatim, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::BraceBlock;
  e.text_ = std::move(verbatim);
  e.location_ = std::move(at);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::List;
  e.items_ = std::move(items);
  e.location_ = std::move(at);
  return e;
}

SExpr SExpr::vector(std::vector<SExpr> items, SourceLocation at) {
  SExpr e;
  e.kind_ = SExprKind::Vector;
  e.items_ = std::move(items);
  e.location_ = std::move(at);
  return e;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SExprKind::Integer: return a.int_value_ == b.int_value_ && a.text_ == b.text_;
    case SExprKind::List:
    case SExprKind::Vector: return a.items_ == b.items_;
    default: return a.text_ == b.text_;
  }
}

void write_sexpr(std::string& out, const SExpr& expr) {
  switch (expr.kind()) {
    case SExprKind::Symbol:
    case SExprKind::Integer:
    case SExprKind::BraceBlock: out += expr.text(); return;
    case SExprKind::String:
      out += '"';
      out += expr.text();
      out += '"';
      return;
    case SExprKind::List:
    case SExprKind::Vector: {
      const bool list = expr.is_list();
      out += list ? '(' : '[';
      bool first = true;
      for (const SExpr& item : expr.items()) {
        if (!first) out += ' ';
        first = false;
        write_sexpr(out, item);
      }
      out += list ? ')' : ']';
      return;
    }
  }
}

std::string to_string(const SExpr& expr) {
  std::string out;
  write_sexpr(out, expr);
  return out;
}

std::vector<SExpr> parse_sexprs(std::string_view source, std::string_view file) {
  Parser parser(tokenize(source, file));
  std::vector<SExpr> out;
  while (!parser.done()) out.push_back(parser.datum());
  return out;
}

SExpr parse_sexpr(std::string_view source, std::string_view file) {
  std::vector<SExpr> all = parse_sexprs(source, file);
  if (all.size() != 1) {
    throw Error(ErrorCode::UnexpectedToken,
                "expected exactly one expression, found " + std::to_string(all.size()),
                SourceLocation{std::string(file), 1, 1});
  }
  return std::move(all.front());
}

}  // namespace mdpattern
