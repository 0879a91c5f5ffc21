#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdpattern/analysis.hpp"

namespace mdpattern {

struct PatternMatch {
  PatternId id_a;
  PatternId id_b;
};

/// Patterns present in both stores, matched by height and canonical text, in
/// (height, id_a) order.
[[nodiscard]] std::vector<PatternMatch> common_patterns(const MdAnalysis& a, const MdAnalysis& b);

/// 200·p / (P1 + P2). Throws Error(BothEmpty) when both stores are empty.
[[nodiscard]] double pattern_similarity(std::uint64_t patterns_a, std::uint64_t patterns_b,
                                        std::uint64_t common);
[[nodiscard]] double pattern_similarity(const MdAnalysis& a, const MdAnalysis& b);

/// 100·(e1' + e2') / (E1 + E2). Throws Error(BothEmpty) when E1 + E2 == 0.
[[nodiscard]] double expression_similarity(std::uint64_t covered_a, std::uint64_t covered_b,
                                           std::uint64_t exprs_a, std::uint64_t exprs_b);

/// 100·covered / E_target. Throws Error(EmptyTarget) when E_target == 0.
[[nodiscard]] double coverage_percent(std::uint64_t covered, std::uint64_t target_exprs);

struct PairReport {
  std::string arch_a;
  std::string arch_b;
  std::uint64_t patterns_a = 0;
  std::uint64_t patterns_b = 0;
  std::uint64_t exprs_a = 0;
  std::uint64_t exprs_b = 0;
  std::uint64_t common_pattern_count = 0;  ///< p
  double pattern_similarity_pct = 0.0;
  std::uint64_t covered_expr_a = 0;  ///< e1'
  std::uint64_t covered_expr_b = 0;  ///< e2'
  double expression_similarity_pct = 0.0;
};

[[nodiscard]] PairReport expression_similarity(const MdAnalysis& a, const MdAnalysis& b);

struct CoverageReport {
  std::string source;
  std::string target;
  std::uint64_t covered = 0;
  std::uint64_t target_exprs = 0;
  double percent = 0.0;
};

/// How many of the target's expressions instantiate a pattern the source also has.
[[nodiscard]] CoverageReport target_coverage(const MdAnalysis& source, const MdAnalysis& target);

enum class Metric { Pattern, Expression, Coverage };

[[nodiscard]] std::string_view metric_name(Metric metric);

struct MatrixCell {
  std::size_t row = 0;  ///< source for Coverage
  std::size_t col = 0;  ///< target for Coverage
  std::uint64_t count = 0;
  double percent = 0.0;
};

struct SimilarityMatrix {
  Metric metric = Metric::Pattern;
  std::vector<std::string> arch_names;
  std::vector<std::uint64_t> totals;  ///< E per architecture
  std::vector<MatrixCell> cells;      ///< upper triangle (symmetric metrics) or off-diagonal
};

[[nodiscard]] SimilarityMatrix similarity_matrix(const std::vector<const MdAnalysis*>& analyses,
                                                 Metric metric);

}  // namespace mdpattern
