#include "mdpattern/similarity.hpp"

#include <algorithm>

namespace mdpattern {

std::vector<PatternMatch> common_patterns(const MdAnalysis& a, const MdAnalysis& b) {
  std::vector<PatternMatch> out;
  for (const StoredPattern* entry : a.store.ordered()) {
    const StoredPattern* other = b.store.find_text(entry->pattern.height, entry->pattern.canonical_text);
    if (other != nullptr) {
      out.push_back(PatternMatch{entry->id, other->id});
    }
  }
  return out;
}

double pattern_similarity(std::uint64_t patterns_a, std::uint64_t patterns_b, std::uint64_t common) {
  if (patterns_a + patterns_b == 0) {
    throw Error(ErrorCode::BothEmpty, "pattern similarity of two empty pattern sets");
  }
  return 200.0 * static_cast<double>(common) / static_cast<double>(patterns_a + patterns_b);
}

double pattern_similarity(const MdAnalysis& a, const MdAnalysis& b) {
  return pattern_similarity(a.pattern_count(), b.pattern_count(), common_patterns(a, b).size());
}

double expression_similarity(std::uint64_t covered_a, std::uint64_t covered_b,
                             std::uint64_t exprs_a, std::uint64_t exprs_b) {
  if (exprs_a + exprs_b == 0) {
    throw Error(ErrorCode::BothEmpty, "expression similarity of two empty corpora");
  }
  return 100.0 * static_cast<double>(covered_a + covered_b) / static_cast<double>(exprs_a + exprs_b);
}

double coverage_percent(std::uint64_t covered, std::uint64_t target_exprs) {
  if (target_exprs == 0) throw Error(ErrorCode::EmptyTarget, "target corpus has no expressions");
  return 100.0 * static_cast<double>(covered) / static_cast<double>(target_exprs);
}

PairReport expression_similarity(const MdAnalysis& a, const MdAnalysis& b) {
  PairReport r;
  r.arch_a = a.arch_name;
  r.arch_b = b.arch_name;
  r.patterns_a = a.pattern_count();
  r.patterns_b = b.pattern_count();
  r.exprs_a = a.expr_count;
  r.exprs_b = b.expr_count;
  const auto matches = common_patterns(a, b);
  r.common_pattern_count = matches.size();
  for (const PatternMatch& m : matches) {
    r.covered_expr_a += a.store.find(m.id_a)->count;
    r.covered_expr_b += b.store.find(m.id_b)->count;
  }
  r.pattern_similarity_pct =
      r.patterns_a + r.patterns_b == 0
          ? 0.0
          : pattern_similarity(r.patterns_a, r.patterns_b, r.common_pattern_count);
  r.expression_similarity_pct =
      expression_similarity(r.covered_expr_a, r.covered_expr_b, r.exprs_a, r.exprs_b);
  return r;
}

CoverageReport target_coverage(const MdAnalysis& source, const MdAnalysis& target) {
  CoverageReport r;
  r.source = source.arch_name;
  r.target = target.arch_name;
  r.target_exprs = target.expr_count;
  for (const PatternMatch& m : common_patterns(target, source)) {
    r.covered += target.store.find(m.id_a)->count;
  }
  r.percent = coverage_percent(r.covered, r.target_exprs);
  return r;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::Pattern: return "pattern";
    case Metric::Expression: return "expr";
    case Metric::Coverage: return "coverage";
  }
  return "pattern";
}

SimilarityMatrix similarity_matrix(const std::vector<const MdAnalysis*>& analyses, Metric metric) {
  SimilarityMatrix m;
  m.metric = metric;
  for (const MdAnalysis* a : analyses) {
    m.arch_names.push_back(a->arch_name);
    m.totals.push_back(a->expr_count);
  }
  const std::size_t n = analyses.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (metric != Metric::Coverage && j < i) continue;
      MatrixCell cell{i, j, 0, 0.0};
      switch (metric) {
        case Metric::Pattern: {
          cell.count = common_patterns(*analyses[i], *analyses[j]).size();
          cell.percent = pattern_similarity(analyses[i]->pattern_count(),
                                            analyses[j]->pattern_count(), cell.count);
          break;
        }
        case Metric::Expression: {
          const PairReport r = expression_similarity(*analyses[i], *analyses[j]);
          cell.count = r.covered_expr_a + r.covered_expr_b;
          cell.percent = r.expression_similarity_pct;
          break;
        }
        case Metric::Coverage: {
          const CoverageReport r = target_coverage(*analyses[i], *analyses[j]);
          cell.count = r.covered;
          cell.percent = r.percent;
          break;
        }
      }
      m.cells.push_back(cell);
    }
  }
  return m;
}

}  // namespace mdpattern
