#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdpattern/rtl.hpp"

namespace mdpattern {

using PatternId = std::uint32_t;

/// An RTL expression with its machine-specific parts replaced by `$arg`/`$mode` holes.
struct RtlPattern {
  RtlExpr tree;
  int height = 1;
  std::string canonical_text;

  friend bool operator==(const RtlPattern& a, const RtlPattern& b) {
    return a.height == b.height && a.canonical_text == b.canonical_text;
  }
};

/// Builds the pattern value (height and text) for an already-abstracted tree.
[[nodiscard]] RtlPattern make_pattern(RtlExpr tree);

/// Re-reads a pattern from its canonical text. Height comes from the caller since
/// payload holes are indistinguishable in text. Throws Error(MalformedEntry).
[[nodiscard]] RtlPattern parse_pattern(std::string_view text, int height);

struct BindingOrigin {
  std::string form_kind;  ///< define_insn, define_expand, ...
  std::string form_name;  ///< raw string contents, may be empty
  SourceLocation location;
};

struct ParamBinding {
  PatternId pattern_id = 0;
  /// Ordered by (kind, index): modes first, then args.
  std::vector<std::pair<ParamName, std::string>> assignments;
  BindingOrigin origin;
};

struct Extraction {
  RtlPattern pattern;
  ParamBinding binding;
  std::vector<std::string> unknown_codes;  ///< unknown codes that became holes
};

/// Abstracts one RTL tree. Subtrees rooted at a non-pattern operator become `$arg`
/// holes, operator modes become `$mode` holes, atom operands of retained operators
/// become `$arg` holes. Identical replaced text shares one hole. The result is
/// canonical.
[[nodiscard]] Extraction extract_pattern(const RtlExpr& expr, const CodeContext& ctx);

/// Renumbers holes by first pre-order occurrence, per kind.
[[nodiscard]] RtlPattern canonicalize(const RtlPattern& pattern);
/// Same, carrying the binding's parameter names along.
[[nodiscard]] std::pair<RtlPattern, ParamBinding> canonicalize(const RtlPattern& pattern,
                                                               const ParamBinding& binding);

/// Applies `renaming` to every hole and mode parameter in `tree`.
[[nodiscard]] RtlExpr rename_params(const RtlExpr& tree, const std::map<ParamName, ParamName>& renaming);

/// Parameters in pre-order of first occurrence.
[[nodiscard]] std::vector<ParamName> collect_params(const RtlExpr& tree);

/// Height gate first, then structural comparison.
[[nodiscard]] bool pattern_equal(const RtlPattern& a, const RtlPattern& b);

/// Fills the pattern's holes from the binding. Throws Error(ArityMismatch) when the
/// binding does not assign exactly the pattern's parameters.
[[nodiscard]] SExpr substitute(const RtlPattern& pattern, const ParamBinding& binding);

struct StoredPattern {
  PatternId id = 0;
  RtlPattern pattern;
  std::uint64_t count = 0;
};

struct InsertResult {
  PatternId id = 0;
  bool is_new = false;
};

/// Unique patterns bucketed by height, with per-pattern occurrence counts.
class PatternStore {
 public:
  /// Counts one occurrence of `pattern` (canonical) and stamps `binding` with its id.
  InsertResult insert(const RtlPattern& pattern, ParamBinding& binding);
  InsertResult insert(const RtlPattern& pattern);

  /// Adds a pattern with a known id and count (archive loading). The id and the
  /// (height, text) pair must be unused; throws Error(MalformedEntry) otherwise.
  void restore(StoredPattern entry);
  void set_total_templates(std::uint64_t total) noexcept { total_templates_ = total; }

  [[nodiscard]] const StoredPattern* find(PatternId id) const;
  /// Patterns are identified by (height, canonical text): a hole standing for an
  /// atom operand prints like any other hole but does not add a level.
  [[nodiscard]] const StoredPattern* find_text(int height, std::string_view canonical_text) const;

  [[nodiscard]] std::size_t size() const noexcept { return by_id_.size(); }
  [[nodiscard]] bool empty() const noexcept { return by_id_.empty(); }
  [[nodiscard]] std::uint64_t total_templates() const noexcept { return total_templates_; }
  [[nodiscard]] PatternId next_id() const noexcept { return next_id_; }
  [[nodiscard]] const std::map<int, std::vector<StoredPattern>>& buckets() const noexcept {
    return buckets_;
  }

  /// All entries ordered by (height, id).
  [[nodiscard]] std::vector<const StoredPattern*> ordered() const;

 private:
  struct Slot {
    int height;
    std::size_t index;
  };

  std::map<int, std::vector<StoredPattern>> buckets_;
  static std::string text_key(int height, std::string_view canonical_text);

  std::unordered_map<std::string, Slot> by_text_;
  std::unordered_map<PatternId, Slot> by_id_;
  PatternId next_id_ = 0;
  std::uint64_t total_templates_ = 0;
};

}  // namespace mdpattern
