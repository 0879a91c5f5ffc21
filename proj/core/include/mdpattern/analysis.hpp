#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdpattern/md_reader.hpp"
#include "mdpattern/pattern.hpp"

namespace mdpattern {

struct AnalysisOptions {
  PatternPolicy policy;
  /// Replace each code-iterator operator by every member code, producing one
  /// expression per combination (GCC's own expansion rule).
  bool expand_code_iterators = false;
  /// Also tally every operator subtree of every pattern (diagnostic only).
  bool count_subpatterns = false;
};

struct AnalysisDiagnostics {
  std::map<std::string, std::uint64_t> unknown_codes;
  std::vector<std::string> skipped_forms;  ///< one message per skipped template
  std::uint64_t considered_forms = 0;
  std::uint64_t iterator_forms = 0;
  std::uint64_t ignored_forms = 0;
};

/// Per-architecture result of pattern extraction.
struct MdAnalysis {
  std::string arch_name;
  std::uint64_t expr_count = 0;  ///< E
  PatternStore store;            ///< P = store.size()
  std::vector<IteratorDef> iterators;
  std::vector<ParamBinding> bindings;  ///< one per analyzed expression, in source order
  AnalysisDiagnostics diagnostics;
  std::map<std::string, std::uint64_t> subpattern_counts;

  [[nodiscard]] std::uint64_t pattern_count() const noexcept { return store.size(); }
};

/// Extracts and interns one pattern per considered template. Malformed templates are
/// skipped and reported in diagnostics.
[[nodiscard]] MdAnalysis analyze(std::string arch_name, const std::vector<TopLevelForm>& forms,
                                 const RtxCodeTable& table, const AnalysisOptions& options = {});

/// Every combination of member codes for the code iterators used in `expr`.
[[nodiscard]] std::vector<RtlExpr> expand_code_iterators(
    const RtlExpr& expr, const std::map<std::string, std::vector<std::string>, std::less<>>& iterators);

}  // namespace mdpattern
