#include "mdpattern/pattern.hpp"

#include <algorithm>
#include <set>

namespace mdpattern {

RtlPattern make_pattern(RtlExpr tree) {
  RtlPattern p;
  p.height = height(tree);
  p.canonical_text = to_string(tree);
  p.tree = std::move(tree);
  return p;
}

namespace {

RtlExpr pattern_node(const SExpr& s) {
  switch (s.kind()) {
    case SExprKind::Vector: {
      std::vector<RtlExpr> members;
      for (const SExpr& item : s.items()) members.push_back(pattern_node(item));
      return RtlExpr::vec(std::move(members));
    }
    case SExprKind::List: {
      if (s.items().empty() || !s.items().front().is_symbol()) {
        throw Error(ErrorCode::MalformedEntry, "bad pattern operator in '" + to_string(s) + "'");
      }
      const std::string& head = s.items().front().text();
      std::string code = head;
      RtlExpr::Mode mode;
      if (auto colon = head.find(':'); colon != std::string::npos) {
        code = head.substr(0, colon);
        std::string mode_text = head.substr(colon + 1);
        if (auto param = ParamName::parse(mode_text); param && param->kind == ParamKind::Mode) {
          mode = *param;
        } else {
          mode = std::move(mode_text);
        }
      }
      std::vector<RtlExpr> operands;
      for (std::size_t i = 1; i < s.items().size(); ++i) operands.push_back(pattern_node(s.items()[i]));
      return RtlExpr::op(std::move(code), std::move(mode), std::move(operands));
    }
    case SExprKind::Symbol:
      if (auto param = ParamName::parse(s.text()); param && param->kind == ParamKind::Arg) {
        return RtlExpr::hole(*param);
      }
      if (s.text().starts_with('$')) throw Error(ErrorCode::MalformedEntry, "bad parameter '" + s.text() + "'");
      [[fallthrough]];
    default: return RtlExpr::atom(s);
  }
}

void collect(const RtlExpr& e, std::vector<ParamName>& out, std::set<ParamName>& seen) {
  auto note = [&](const ParamName& p) {
    if (seen.insert(p).second) out.push_back(p);
  };
  switch (e.kind()) {
    case RtlExpr::Kind::Hole: note(e.param()); return;
    case RtlExpr::Kind::Operator:
      if (const auto* p = std::get_if<ParamName>(&e.mode())) note(*p);
      [[fallthrough]];
    case RtlExpr::Kind::Vector:
      for (const RtlExpr& child : e.operands()) collect(child, out, seen);
      return;
    case RtlExpr::Kind::Atom: return;
  }
}

std::map<ParamName, ParamName> canonical_renaming(const RtlExpr& tree) {
  std::map<ParamName, ParamName> renaming;
  std::uint32_t next_mode = 0;
  std::uint32_t next_arg = 0;
  for (const ParamName& p : collect_params(tree)) {
    renaming[p] = ParamName{p.kind, p.kind == ParamKind::Mode ? next_mode++ : next_arg++};
  }
  return renaming;
}

class Extractor {
 public:
  explicit Extractor(const CodeContext& ctx) : ctx_(ctx) {}

  RtlExpr visit(const RtlExpr& e) {
    switch (e.kind()) {
      case RtlExpr::Kind::Operator: {
        if (!is_pattern_operator(e.code(), ctx_)) {
          if (rtx_class(e.code(), *ctx_.table, ctx_.code_iterators).status == CodeStatus::Unknown) {
            unknown_.push_back(e.code());
          }
          return RtlExpr::hole(intern(ParamKind::Arg, to_string(e)));
        }
        RtlExpr::Mode mode;
        if (const auto* literal = std::get_if<std::string>(&e.mode())) {
          mode = intern(ParamKind::Mode, *literal);
        } else {
          mode = e.mode();
        }
        std::vector<RtlExpr> operands;
        operands.reserve(e.operands().size());
        for (const RtlExpr& child : e.operands()) operands.push_back(visit(child));
        return RtlExpr::op(e.code(), std::move(mode), std::move(operands));
      }
      case RtlExpr::Kind::Vector: {
        std::vector<RtlExpr> members;
        members.reserve(e.operands().size());
        for (const RtlExpr& m : e.operands()) members.push_back(visit(m));
        return RtlExpr::vec(std::move(members));
      }
      case RtlExpr::Kind::Atom:
        return RtlExpr::hole(intern(ParamKind::Arg, to_string(e.atom_value())), true);
      case RtlExpr::Kind::Hole: return e;
    }
    return e;
  }

  std::vector<std::pair<ParamName, std::string>> assignments() const {
    std::vector<std::pair<ParamName, std::string>> out;
    for (const auto& [text, index] : modes_) out.emplace_back(ParamName{ParamKind::Mode, index}, text);
    for (const auto& [text, index] : args_) out.emplace_back(ParamName{ParamKind::Arg, index}, text);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  std::vector<std::string> take_unknown() { return std::move(unknown_); }

 private:
  ParamName intern(ParamKind kind, const std::string& text) {
    auto& table = kind == ParamKind::Mode ? modes_ : args_;
    auto [it, inserted] = table.try_emplace(text, static_cast<std::uint32_t>(table.size()));
    return ParamName{kind, it->second};
  }

  const CodeContext& ctx_;
  std::map<std::string, std::uint32_t> modes_;
  std::map<std::string, std::uint32_t> args_;
  std::vector<std::string> unknown_;
};

}  // namespace

RtlPattern parse_pattern(std::string_view text, int height) {
  SExpr s;
  try {
    s = parse_sexpr(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedEntry, "unparsable pattern: " + e.detail());
  }
  RtlPattern p;
  p.tree = pattern_node(s);
  p.height = height;
  p.canonical_text = to_string(p.tree);
  return p;
}

std::vector<ParamName> collect_params(const RtlExpr& tree) {
  std::vector<ParamName> out;
  std::set<ParamName> seen;
  collect(tree, out, seen);
  return out;
}

RtlExpr rename_params(const RtlExpr& tree, const std::map<ParamName, ParamName>& renaming) {
  auto renamed = [&](const ParamName& p) {
    auto it = renaming.find(p);
    return it == renaming.end() ? p : it->second;
  };
  switch (tree.kind()) {
    case RtlExpr::Kind::Hole: return RtlExpr::hole(renamed(tree.param()), tree.payload());
    case RtlExpr::Kind::Atom: return tree;
    case RtlExpr::Kind::Vector: {
      std::vector<RtlExpr> members;
      for (const RtlExpr& m : tree.operands()) members.push_back(rename_params(m, renaming));
      return RtlExpr::vec(std::move(members));
    }
    case RtlExpr::Kind::Operator: {
      RtlExpr::Mode mode = tree.mode();
      if (const auto* p = std::get_if<ParamName>(&mode)) mode = renamed(*p);
      std::vector<RtlExpr> operands;
      for (const RtlExpr& c : tree.operands()) operands.push_back(rename_params(c, renaming));
      return RtlExpr::op(tree.code(), std::move(mode), std::move(operands));
    }
  }
  return tree;
}

RtlPattern canonicalize(const RtlPattern& pattern) {
  RtlPattern out = make_pattern(rename_params(pattern.tree, canonical_renaming(pattern.tree)));
  out.height = pattern.height;
  return out;
}

std::pair<RtlPattern, ParamBinding> canonicalize(const RtlPattern& pattern,
                                                 const ParamBinding& binding) {
  const auto renaming = canonical_renaming(pattern.tree);
  RtlPattern p = make_pattern(rename_params(pattern.tree, renaming));
  p.height = pattern.height;
  ParamBinding b = binding;
  for (auto& [name, value] : b.assignments) {
    if (auto it = renaming.find(name); it != renaming.end()) name = it->second;
  }
  std::sort(b.assignments.begin(), b.assignments.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return {std::move(p), std::move(b)};
}

Extraction extract_pattern(const RtlExpr& expr, const CodeContext& ctx) {
  Extractor extractor(ctx);
  RtlExpr tree = extractor.visit(expr);
  RtlPattern raw = make_pattern(std::move(tree));
  ParamBinding binding;
  binding.assignments = extractor.assignments();
  auto [pattern, canonical_binding] = canonicalize(raw, binding);
  return Extraction{std::move(pattern), std::move(canonical_binding), extractor.take_unknown()};
}

bool pattern_equal(const RtlPattern& a, const RtlPattern& b) {
  if (a.height != b.height) return false;
  return a.tree == b.tree;
}

namespace {

SExpr fill(const RtlExpr& e, const std::map<ParamName, SExpr>& values,
           const std::map<ParamName, std::string>& mode_values) {
  switch (e.kind()) {
    case RtlExpr::Kind::Hole: return values.at(e.param());
    case RtlExpr::Kind::Atom: return e.atom_value();
    case RtlExpr::Kind::Vector: {
      std::vector<SExpr> items;
      for (const RtlExpr& m : e.operands()) items.push_back(fill(m, values, mode_values));
      return SExpr::vector(std::move(items));
    }
    case RtlExpr::Kind::Operator: {
      std::string head = e.code();
      if (const auto* literal = std::get_if<std::string>(&e.mode())) {
        head += ':' + *literal;
      } else if (const auto* p = std::get_if<ParamName>(&e.mode())) {
        head += ':' + mode_values.at(*p);
      }
      std::vector<SExpr> items{SExpr::symbol(std::move(head))};
      for (const RtlExpr& c : e.operands()) items.push_back(fill(c, values, mode_values));
      return SExpr::list(std::move(items));
    }
  }
  return {};
}

}  // namespace

SExpr substitute(const RtlPattern& pattern, const ParamBinding& binding) {
  const std::vector<ParamName> wanted = collect_params(pattern.tree);
  std::set<ParamName> expected(wanted.begin(), wanted.end());
  std::set<ParamName> given;
  std::map<ParamName, SExpr> values;
  std::map<ParamName, std::string> mode_values;
  for (const auto& [name, text] : binding.assignments) {
    if (!given.insert(name).second || !expected.contains(name)) {
      throw Error(ErrorCode::ArityMismatch,
                  "binding for pattern " + std::to_string(binding.pattern_id) +
                      " has unexpected or duplicate parameter " + name.to_string(),
                  binding.origin.location);
    }
    if (name.kind == ParamKind::Mode) {
      mode_values.emplace(name, text);
    } else {
      try {
        values.emplace(name, parse_sexpr(text));
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedEntry,
                    "value of " + name.to_string() + " is not an expression: " + e.detail(),
                    binding.origin.location);
      }
    }
  }
  if (given.size() != expected.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "binding for pattern " + std::to_string(binding.pattern_id) + " assigns " +
                    std::to_string(given.size()) + " of " + std::to_string(expected.size()) +
                    " parameters",
                binding.origin.location);
  }
  return fill(pattern.tree, values, mode_values);
}

InsertResult PatternStore::insert(const RtlPattern& pattern, ParamBinding& binding) {
  InsertResult result = insert(pattern);
  binding.pattern_id = result.id;
  return result;
}

InsertResult PatternStore::insert(const RtlPattern& pattern) {
  ++total_templates_;
  if (auto it = by_text_.find(text_key(pattern.height, pattern.canonical_text)); it != by_text_.end()) {
    StoredPattern& hit = buckets_[it->second.height][it->second.index];
    ++hit.count;
    return InsertResult{hit.id, false};
  }
  const PatternId id = next_id_++;
  auto& bucket = buckets_[pattern.height];
  const Slot slot{pattern.height, bucket.size()};
  bucket.push_back(StoredPattern{id, pattern, 1});
  by_text_.emplace(text_key(pattern.height, pattern.canonical_text), slot);
  by_id_.emplace(id, slot);
  return InsertResult{id, true};
}

void PatternStore::restore(StoredPattern entry) {
  if (by_id_.contains(entry.id)) {
    throw Error(ErrorCode::MalformedEntry, "duplicate pattern id " + std::to_string(entry.id));
  }
  std::string key = text_key(entry.pattern.height, entry.pattern.canonical_text);
  if (by_text_.contains(key)) {
    throw Error(ErrorCode::MalformedEntry, "duplicate pattern " + entry.pattern.canonical_text);
  }
  auto& bucket = buckets_[entry.pattern.height];
  const Slot slot{entry.pattern.height, bucket.size()};
  next_id_ = std::max(next_id_, entry.id + 1);
  by_text_.emplace(std::move(key), slot);
  by_id_.emplace(entry.id, slot);
  bucket.push_back(std::move(entry));
}

const StoredPattern* PatternStore::find(PatternId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return nullptr;
  return &buckets_.at(it->second.height)[it->second.index];
}

std::string PatternStore::text_key(int height, std::string_view canonical_text) {
  std::string key = std::to_string(height);
  key += ' ';
  key += canonical_text;
  return key;
}

const StoredPattern* PatternStore::find_text(int height, std::string_view canonical_text) const {
  auto it = by_text_.find(text_key(height, canonical_text));
  if (it == by_text_.end()) return nullptr;
  return &buckets_.at(it->second.height)[it->second.index];
}

std::vector<const StoredPattern*> PatternStore::ordered() const {
  std::vector<const StoredPattern*> out;
  out.reserve(size());
  for (const auto& [h, bucket] : buckets_) {
    const std::size_t first = out.size();
    for (const StoredPattern& e : bucket) out.push_back(&e);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
              [](const StoredPattern* a, const StoredPattern* b) { return a->id < b->id; });
  }
  return out;
}

}  // namespace mdpattern
