#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdpattern/sexpr.hpp"

namespace mdpattern {

enum class FormKind {
  ConsideredTemplate,  ///< define_insn and friends: the first vector is an RTL template
  IteratorDef,         ///< define_{mode,code}_{iterator,attr}
  Include,
  Ignored,
};

[[nodiscard]] std::string_view form_kind_name(FormKind kind);

struct TopLevelForm {
  FormKind kind = FormKind::Ignored;
  std::string head;  ///< head symbol, empty when the list does not start with a symbol
  std::string name;  ///< first string/symbol argument, may be empty
  SExpr body;
  SourceLocation origin;
};

struct ReaderOptions {
  std::vector<std::string> considered_heads = default_considered_heads();
  bool resolve_includes = true;

  static std::vector<std::string> default_considered_heads();
};

[[nodiscard]] FormKind classify_head(std::string_view head, const ReaderOptions& options = {});

/// Parses one MD source text into top-level forms. Include forms are left as
/// FormKind::Include; see resolve_includes.
[[nodiscard]] std::vector<TopLevelForm> parse_md(std::string_view source, std::string_view origin,
                                                 const ReaderOptions& options = {});

/// Splices included files in place of `(include "...")` forms. Relative paths are
/// resolved against the including file's directory, falling back to `base_dir`.
/// With `enabled == false` include forms are reclassified as Ignored.
[[nodiscard]] std::vector<TopLevelForm> resolve_includes(std::vector<TopLevelForm> forms,
                                                         const std::filesystem::path& base_dir,
                                                         bool enabled,
                                                         const ReaderOptions& options = {});

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

/// parse_md + resolve_includes for a file on disk.
[[nodiscard]] std::vector<TopLevelForm> read_md_file(const std::filesystem::path& path,
                                                     const ReaderOptions& options = {});

/// The RTL template of a considered form: its first bracket vector.
/// Throws Error(MissingTemplateVector).
[[nodiscard]] const SExpr& extract_template_vector(const TopLevelForm& form);

struct IteratorDef {
  std::string head;
  std::string name;
  std::vector<std::string> members;  ///< codes/modes for iterators, keys for attrs
  SExpr form;
};

/// nullopt unless form.kind == IteratorDef and the form is well shaped.
[[nodiscard]] std::optional<IteratorDef> iterator_definition(const TopLevelForm& form);

}  // namespace mdpattern
