#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdpattern::cli {

struct ManifestEntry {
  std::string arch_name;
  std::filesystem::path root;  ///< absolute, or relative to the working directory
  bool resolve_includes = true;
  std::optional<std::vector<std::string>> considered_heads;
};

/// Architecture corpus list. One entry per line:
///
///   name = path [no-includes] [heads=define_insn,define_expand]
///
/// '#' starts a comment. Relative paths are taken from the manifest's directory.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  [[nodiscard]] const ManifestEntry* find(std::string_view arch) const;
};

/// Throws Error(BadManifest) on syntax errors, duplicate names or missing files.
[[nodiscard]] CorpusManifest parse_manifest(std::string_view text,
                                            const std::filesystem::path& base_dir,
                                            std::string_view origin = {});
[[nodiscard]] CorpusManifest load_manifest(const std::filesystem::path& path);

}  // namespace mdpattern::cli
