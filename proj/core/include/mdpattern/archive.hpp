#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mdpattern/analysis.hpp"

namespace mdpattern {

struct PatternFileEntry {
  PatternId id = 0;
  int height = 1;
  std::uint64_t count = 0;
  std::string text;

  friend bool operator==(const PatternFileEntry&, const PatternFileEntry&) = default;
};

/// Unique patterns of one (or, after merge, several) architectures.
///
///   # arch: <name>                 (one line per source architecture)
///   # total_templates: <n>
///   # iterator: <define_*_iterator/attr form>   (repeated; '%', CR, LF percent-escaped)
///   <id> <height> <count> <canonical pattern>
struct PatternFile {
  std::vector<std::string> arch_names;
  std::uint64_t total_templates = 0;
  std::vector<std::string> iterators;
  std::vector<PatternFileEntry> entries;  ///< sorted by (height, id)

  friend bool operator==(const PatternFile&, const PatternFile&) = default;
};

/// Parameter records, one per analyzed expression:
///
///   <pattern-id> <form-kind> <form-name> $<param>=<escaped value> ...
///
/// An empty form name is written as `-`.
struct ParamFile {
  std::string arch_name;
  std::vector<ParamBinding> records;
};

/// Percent-escapes space, '%', tab, CR and LF. Reversible bit for bit.
[[nodiscard]] std::string percent_escape(std::string_view text);
/// Throws Error(MalformedEntry) on a bad escape.
[[nodiscard]] std::string percent_unescape(std::string_view text);

[[nodiscard]] PatternFile to_pattern_file(const MdAnalysis& analysis);
[[nodiscard]] ParamFile to_param_file(const MdAnalysis& analysis);

[[nodiscard]] std::string write_pattern_file(const PatternFile& file);
[[nodiscard]] std::string write_param_file(const ParamFile& file);

/// Throws Error(BadHeader | MalformedEntry).
[[nodiscard]] PatternFile parse_pattern_file(std::string_view text, std::string_view origin = {});
/// Throws Error(MalformedEntry).
[[nodiscard]] ParamFile parse_param_file(std::string_view text, std::string_view origin = {});

struct SerializedArchives {
  std::string patterns;
  std::string params;
};

[[nodiscard]] SerializedArchives write_archives(const MdAnalysis& analysis);

struct ArchivePaths {
  std::filesystem::path patterns;
  std::filesystem::path params;
};

/// Writes `<dir>/<arch>.patterns` and `<dir>/<arch>.params`. Throws Error(IoError).
ArchivePaths save_archives(const MdAnalysis& analysis, const std::filesystem::path& dir);
void write_file(const std::filesystem::path& path, std::string_view contents);

struct LoadedArchives {
  PatternFile header;
  PatternStore store;
  std::vector<ParamBinding> bindings;
};

/// Inverse of write_archives. Throws Error(BadHeader | MalformedEntry | DanglingPatternId).
[[nodiscard]] LoadedArchives read_archives(std::string_view patterns, std::string_view params,
                                           std::string_view pattern_origin = {},
                                           std::string_view param_origin = {});

/// Placeholder emitted where the output template of a regenerated form would go.
inline constexpr std::string_view kElidedOutput = "\"<elided>\"";

/// One define_* form per binding, in binding order. Throws Error(ArityMismatch | DanglingPatternId).
[[nodiscard]] std::vector<std::string> recombine(const PatternStore& store,
                                                 const std::vector<ParamBinding>& bindings);
[[nodiscard]] std::string recombine_to_md(const PatternStore& store,
                                          const std::vector<ParamBinding>& bindings);

/// Unions patterns by text, sums counts and keeps those occurring strictly more than
/// `min_count` times. Ids are reassigned in (height, text) order.
[[nodiscard]] PatternFile merge(const std::vector<PatternFile>& files, std::uint64_t min_count);

/// Collapses whitespace runs to one space and drops spaces next to brackets.
[[nodiscard]] std::string normalize_whitespace(std::string_view text);

struct VerifyReport {
  std::uint64_t original = 0;
  std::uint64_t regenerated = 0;
  std::uint64_t missing = 0;
  std::uint64_t extra = 0;
  std::uint64_t changed = 0;
  std::vector<std::string> details;

  [[nodiscard]] bool ok() const noexcept { return missing == 0 && extra == 0 && changed == 0; }
};

/// Matches considered templates by (kind, name, ordinal) and compares their
/// whitespace-normalized template vectors.
[[nodiscard]] VerifyReport compare_templates(const std::vector<TopLevelForm>& original,
                                             const std::vector<TopLevelForm>& regenerated);

/// analyze -> write archives -> read back -> recombine -> reparse -> compare.
[[nodiscard]] VerifyReport verify_round_trip(const std::string& arch_name,
                                             const std::vector<TopLevelForm>& forms,
                                             const RtxCodeTable& table,
                                             const ReaderOptions& reader = {},
                                             const AnalysisOptions& options = {});

}  // namespace mdpattern
