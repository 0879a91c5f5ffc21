#include "mdpattern/analysis.hpp"

#include <algorithm>
#include <set>

namespace mdpattern {

namespace {

using IteratorMap = std::map<std::string, std::vector<std::string>, std::less<>>;

void used_iterators(const RtlExpr& e, const IteratorMap& iterators, std::vector<std::string>& out) {
  if (e.is_operator() && iterators.contains(e.code()) &&
      std::find(out.begin(), out.end(), e.code()) == out.end()) {
    out.push_back(e.code());
  }
  for (const RtlExpr& child : e.operands()) used_iterators(child, iterators, out);
}

RtlExpr replace_codes(const RtlExpr& e, const std::map<std::string, std::string>& choice) {
  if (e.is_atom() || e.is_hole()) return e;
  std::vector<RtlExpr> operands;
  operands.reserve(e.operands().size());
  for (const RtlExpr& child : e.operands()) operands.push_back(replace_codes(child, choice));
  if (e.is_vector()) return RtlExpr::vec(std::move(operands));
  auto it = choice.find(e.code());
  return RtlExpr::op(it == choice.end() ? e.code() : it->second, e.mode(), std::move(operands));
}

void count_operator_subtrees(const RtlExpr& tree, std::map<std::string, std::uint64_t>& counts) {
  if (tree.is_operator()) {
    counts[canonicalize(make_pattern(tree)).canonical_text]++;
  }
  for (const RtlExpr& child : tree.operands()) count_operator_subtrees(child, counts);
}

}  // namespace

std::vector<RtlExpr> expand_code_iterators(const RtlExpr& expr, const IteratorMap& iterators) {
  std::vector<std::string> names;
  used_iterators(expr, iterators, names);
  std::vector<RtlExpr> out;
  if (names.empty()) {
    out.push_back(expr);
    return out;
  }
  std::vector<std::size_t> cursor(names.size(), 0);
  for (const std::string& name : names) {
    if (iterators.at(name).empty()) {
      out.push_back(expr);
      return out;
    }
  }
  for (;;) {
    std::map<std::string, std::string> choice;
    for (std::size_t i = 0; i < names.size(); ++i) choice[names[i]] = iterators.at(names[i])[cursor[i]];
    out.push_back(replace_codes(expr, choice));
    std::size_t i = 0;
    for (; i < names.size(); ++i) {
      if (++cursor[i] < iterators.at(names[i]).size()) break;
      cursor[i] = 0;
    }
    if (i == names.size()) break;
  }
  return out;
}

MdAnalysis analyze(std::string arch_name, const std::vector<TopLevelForm>& forms,
                   const RtxCodeTable& table, const AnalysisOptions& options) {
  MdAnalysis result;
  result.arch_name = std::move(arch_name);

  CodeContext ctx;
  ctx.table = &table;
  ctx.policy = options.policy;
  IteratorMap code_iterators;
  for (const TopLevelForm& form : forms) {
    if (form.kind != FormKind::IteratorDef) continue;
    ++result.diagnostics.iterator_forms;
    if (auto def = iterator_definition(form)) {
      if (def->head == "define_code_iterator") {
        ctx.code_iterators.insert(def->name);
        code_iterators[def->name] = def->members;
      }
      result.iterators.push_back(std::move(*def));
    }
  }

  for (const TopLevelForm& form : forms) {
    if (form.kind == FormKind::Ignored || form.kind == FormKind::Include) {
      ++result.diagnostics.ignored_forms;
      continue;
    }
    if (form.kind != FormKind::ConsideredTemplate) continue;
    ++result.diagnostics.considered_forms;

    std::vector<RtlExpr> trees;
    try {
      RtlExpr tree = build_template_tree(extract_template_vector(form));
      if (options.expand_code_iterators) {
        trees = expand_code_iterators(tree, code_iterators);
      } else {
        trees.push_back(std::move(tree));
      }
    } catch (const Error& e) {
      result.diagnostics.skipped_forms.push_back(e.what());
      continue;
    }

    for (const RtlExpr& tree : trees) {
      Extraction x = extract_pattern(tree, ctx);
      for (std::string& code : x.unknown_codes) result.diagnostics.unknown_codes[code]++;
      x.binding.origin = BindingOrigin{form.head, form.name, form.origin};
      result.store.insert(x.pattern, x.binding);
      if (options.count_subpatterns) count_operator_subtrees(x.pattern.tree, result.subpattern_counts);
      result.bindings.push_back(std::move(x.binding));
      ++result.expr_count;
    }
  }
  return result;
}

}  // namespace mdpattern
