#include <algorithm>
#include <charconv>

#include "mdpattern/rtl.hpp"

namespace mdpattern {

std::string ParamName::to_string() const {
  return (kind == ParamKind::Mode ? "$mode" : "$arg") + std::to_string(index);
}

std::optional<ParamName> ParamName::parse(std::string_view text) {
  ParamName name;
  if (text.starts_with("$mode")) {
    name.kind = ParamKind::Mode;
    text.remove_prefix(5);
  } else if (text.starts_with("$arg")) {
    name.kind = ParamKind::Arg;
    text.remove_prefix(4);
  } else {
    return std::nullopt;
  }
  if (text.empty() || (text.size() > 1 && text.front() == '0')) return std::nullopt;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), name.index);
  if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
  return name;
}

RtlExpr RtlExpr::op(std::string code, Mode mode, std::vector<RtlExpr> operands) {
  RtlExpr e;
  e.kind_ = Kind::Operator;
  e.code_ = std::move(code);
  e.mode_ = std::move(mode);
  e.operands_ = std::move(operands);
  return e;
}

RtlExpr RtlExpr::atom(SExpr value) {
  RtlExpr e;
  e.kind_ = Kind::Atom;
  e.atom_ = std::move(value);
  return e;
}

RtlExpr RtlExpr::vec(std::vector<RtlExpr> members) {
  RtlExpr e;
  e.kind_ = Kind::Vector;
  e.operands_ = std::move(members);
  return e;
}

RtlExpr RtlExpr::hole(ParamName name, bool payload) {
  RtlExpr e;
  e.kind_ = Kind::Hole;
  e.param_ = name;
  e.payload_ = payload;
  return e;
}

bool operator==(const RtlExpr& a, const RtlExpr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case RtlExpr::Kind::Operator:
      return a.code_ == b.code_ && a.mode_ == b.mode_ && a.operands_ == b.operands_;
    case RtlExpr::Kind::Vector: return a.operands_ == b.operands_;
    case RtlExpr::Kind::Atom: return a.atom_ == b.atom_;
    case RtlExpr::Kind::Hole: return a.param_ == b.param_;
  }
  return false;
}

namespace {

RtlExpr build_operand(const SExpr& item) {
  if (item.is_list()) return build_rtl_tree(item);
  if (item.is_vector()) return build_template_tree(item);
  return RtlExpr::atom(item);
}

/// Contribution of an operand to its parent's height.
int operand_height(const RtlExpr& e) {
  switch (e.kind()) {
    case RtlExpr::Kind::Operator: return height(e);
    case RtlExpr::Kind::Hole: return e.payload() ? 0 : 1;
    case RtlExpr::Kind::Atom: return 0;
    case RtlExpr::Kind::Vector: {
      int best = 0;
      for (const RtlExpr& m : e.operands()) best = std::max(best, operand_height(m));
      return best;
    }
  }
  return 0;
}

}  // namespace

RtlExpr build_rtl_tree(const SExpr& expr) {
  if (!expr.is_list()) {
    throw Error(ErrorCode::NotAList, "expected an RTL expression, found '" + to_string(expr) + "'",
                expr.location());
  }
  const auto& items = expr.items();
  if (items.empty()) throw Error(ErrorCode::EmptyList, "empty RTL expression", expr.location());
  if (!items.front().is_symbol()) {
    throw Error(ErrorCode::NotAList, "RTL expression head must be a code, found '" +
                                         to_string(items.front()) + "'",
                expr.location());
  }
  const std::string& head = items.front().text();
  std::string code = head;
  RtlExpr::Mode mode;
  if (auto colon = head.find(':'); colon != std::string::npos) {
    code = head.substr(0, colon);
    mode = head.substr(colon + 1);
  }
  std::vector<RtlExpr> operands;
  operands.reserve(items.size() - 1);
  for (std::size_t i = 1; i < items.size(); ++i) operands.push_back(build_operand(items[i]));
  return RtlExpr::op(std::move(code), std::move(mode), std::move(operands));
}

RtlExpr build_template_tree(const SExpr& vector) {
  std::vector<RtlExpr> members;
  members.reserve(vector.items().size());
  for (const SExpr& item : vector.items()) members.push_back(build_operand(item));
  return RtlExpr::vec(std::move(members));
}

int height(const RtlExpr& expr) {
  switch (expr.kind()) {
    case RtlExpr::Kind::Operator: {
      int best = 0;
      for (const RtlExpr& child : expr.operands()) best = std::max(best, operand_height(child));
      return 1 + best;
    }
    case RtlExpr::Kind::Vector: return std::max(1, operand_height(expr));
    case RtlExpr::Kind::Atom:
    case RtlExpr::Kind::Hole: return 1;
  }
  return 1;
}

SExpr to_sexpr(const RtlExpr& expr) {
  switch (expr.kind()) {
    case RtlExpr::Kind::Operator: {
      std::string head = expr.code();
      if (const auto* literal = std::get_if<std::string>(&expr.mode())) {
        head += ':';
        head += *literal;
      } else if (const auto* param = std::get_if<ParamName>(&expr.mode())) {
        head += ':';
        head += param->to_string();
      }
      std::vector<SExpr> items;
      items.reserve(expr.operands().size() + 1);
      items.push_back(SExpr::symbol(std::move(head)));
      for (const RtlExpr& operand : expr.operands()) items.push_back(to_sexpr(operand));
      return SExpr::list(std::move(items));
    }
    case RtlExpr::Kind::Vector: {
      std::vector<SExpr> items;
      items.reserve(expr.operands().size());
      for (const RtlExpr& member : expr.operands()) items.push_back(to_sexpr(member));
      return SExpr::vector(std::move(items));
    }
    case RtlExpr::Kind::Atom: return expr.atom_value();
    case RtlExpr::Kind::Hole: return SExpr::symbol(expr.param().to_string());
  }
  return {};
}

std::string to_string(const RtlExpr& expr) { return to_string(to_sexpr(expr)); }

}  // namespace mdpattern
