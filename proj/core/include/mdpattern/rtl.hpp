#pragma once

#include <compare>
#include <functional>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdpattern/sexpr.hpp"

namespace mdpattern {

// ---------------------------------------------------------------------------
// RTX code taxonomy
// ---------------------------------------------------------------------------

enum class RtxClass {
  Obj,
  ConstObj,
  Compare,
  CommCompare,
  Unary,
  CommArith,
  BinArith,
  BitfieldOps,
  Ternary,
  Insn,
  Match,
  Autoinc,
  Extra,
};

inline constexpr std::size_t kRtxClassCount = 13;

[[nodiscard]] std::string_view rtx_class_name(RtxClass cls);
/// Accepts "CommArith", "comm_arith" and "RTX_COMM_ARITH" spellings.
[[nodiscard]] std::optional<RtxClass> parse_rtx_class(std::string_view text);

struct RtxCodeInfo {
  RtxClass rtx_class = RtxClass::Extra;
  bool side_effect = false;
  friend bool operator==(const RtxCodeInfo&, const RtxCodeInfo&) = default;
};

/// Code name -> (class, side-effect flag). Immutable once handed to analysis.
class RtxCodeTable {
 public:
  /// The built-in table covering the RTX codes that occur in MD templates.
  static RtxCodeTable builtin();

  /// builtin() with the file named by MDPATTERN_CODE_TABLE applied on top, if set.
  static RtxCodeTable from_environment();

  /// Applies `code class side_effect` lines ('#' comments allowed).
  /// Side-effect codes must be classed Extra. Throws Error(BadCodeTable).
  void load_overrides(std::istream& in, std::string_view origin = {});
  void load_overrides_file(const std::string& path);

  void set(std::string code, RtxCodeInfo info);
  [[nodiscard]] std::optional<RtxCodeInfo> find(std::string_view code) const;
  [[nodiscard]] const std::map<std::string, RtxCodeInfo, std::less<>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::string, RtxCodeInfo, std::less<>> entries_;
};

enum class CodeStatus { Known, Unknown, IteratorAlias };

struct CodeLookup {
  CodeStatus status = CodeStatus::Unknown;
  RtxClass rtx_class = RtxClass::Extra;
  bool side_effect = false;
};

/// Which classes survive abstraction. The default keeps non-commutative binary
/// arithmetic (minus, div, shifts) in patterns.
struct PatternPolicy {
  bool bin_arith_in_patterns = true;
};

/// Everything needed to decide whether a code is machine-specific: the code table,
/// the code iterators defined by the current MD file, and the class policy.
struct CodeContext {
  const RtxCodeTable* table = nullptr;
  std::set<std::string, std::less<>> code_iterators;
  PatternPolicy policy;
};

[[nodiscard]] CodeLookup rtx_class(std::string_view code, const RtxCodeTable& table,
                                   const std::set<std::string, std::less<>>& code_iterators = {});
[[nodiscard]] bool is_pattern_operator(std::string_view code, const CodeContext& ctx);

// ---------------------------------------------------------------------------
// Parameter names
// ---------------------------------------------------------------------------

enum class ParamKind { Mode, Arg };

struct ParamName {
  ParamKind kind = ParamKind::Arg;
  std::uint32_t index = 0;

  /// "$mode<i>" or "$arg<i>".
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] static std::optional<ParamName> parse(std::string_view text);

  friend auto operator<=>(const ParamName&, const ParamName&) = default;
};

// ---------------------------------------------------------------------------
// RTL expression trees
// ---------------------------------------------------------------------------

/// Node of an RTL tree. Operator nodes carry a code, an optional mode and ordered
/// operands; operands that are plain atoms (integers, strings, symbols, brace blocks)
/// are kept as Atom nodes; bracket vectors are Vector nodes. Pattern trees also
/// contain Hole nodes, and operators in patterns carry a mode parameter instead of
/// a literal mode.
class RtlExpr {
 public:
  enum class Kind { Operator, Atom, Vector, Hole };
  using Mode = std::variant<std::monostate, std::string, ParamName>;

  RtlExpr() = default;

  static RtlExpr op(std::string code, Mode mode, std::vector<RtlExpr> operands);
  static RtlExpr atom(SExpr value);
  static RtlExpr vec(std::vector<RtlExpr> members);
  /// `payload` marks holes that replaced an atom operand; they do not add height.
  static RtlExpr hole(ParamName name, bool payload = false);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_operator() const noexcept { return kind_ == Kind::Operator; }
  [[nodiscard]] bool is_atom() const noexcept { return kind_ == Kind::Atom; }
  [[nodiscard]] bool is_vector() const noexcept { return kind_ == Kind::Vector; }
  [[nodiscard]] bool is_hole() const noexcept { return kind_ == Kind::Hole; }

  [[nodiscard]] const std::string& code() const noexcept { return code_; }
  [[nodiscard]] const Mode& mode() const noexcept { return mode_; }
  [[nodiscard]] bool has_mode() const noexcept { return !std::holds_alternative<std::monostate>(mode_); }
  [[nodiscard]] const std::vector<RtlExpr>& operands() const noexcept { return operands_; }
  [[nodiscard]] std::vector<RtlExpr>& operands() noexcept { return operands_; }
  [[nodiscard]] const SExpr& atom_value() const noexcept { return atom_; }
  [[nodiscard]] const ParamName& param() const noexcept { return param_; }
  [[nodiscard]] ParamName& param() noexcept { return param_; }
  [[nodiscard]] bool payload() const noexcept { return payload_; }

  void set_mode(Mode mode) { mode_ = std::move(mode); }

  /// Structural equality (codes, modes, operand order, hole names).
  friend bool operator==(const RtlExpr& a, const RtlExpr& b);

 private:
  Kind kind_ = Kind::Atom;
  std::string code_;
  Mode mode_;
  std::vector<RtlExpr> operands_;
  SExpr atom_;
  ParamName param_;
  bool payload_ = false;
};

/// Converts a parsed RTL expression. `(code:mode args...)` splits the head at the
/// first ':'; list arguments recurse, vectors become Vector nodes, anything else is
/// an Atom. Throws Error(NotAList | EmptyList).
[[nodiscard]] RtlExpr build_rtl_tree(const SExpr& expr);

/// A bracket template such as `[(set ...) (clobber ...)]` as one Vector-rooted tree.
[[nodiscard]] RtlExpr build_template_tree(const SExpr& vector);

/// Longest root-to-leaf path in nodes. Vectors are transparent; atoms and payload
/// holes are operands, not children.
[[nodiscard]] int height(const RtlExpr& expr);

[[nodiscard]] SExpr to_sexpr(const RtlExpr& expr);
[[nodiscard]] std::string to_string(const RtlExpr& expr);

}  // namespace mdpattern
