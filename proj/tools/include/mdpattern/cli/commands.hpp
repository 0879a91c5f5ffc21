#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdpattern/analysis.hpp"
#include "mdpattern/archive.hpp"
#include "mdpattern/cli/manifest.hpp"
#include "mdpattern/cli/report.hpp"
#include "mdpattern/similarity.hpp"

namespace mdpattern::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitVerify = 3,
};

/// Flags shared by every subcommand.
struct CommonOptions {
  RenderMode format = RenderMode::Text;
  std::optional<std::filesystem::path> out;
  bool expand_iterators = false;
  bool count_subpatterns = false;
  bool no_includes = false;
  bool bin_arith = true;
  std::optional<std::vector<std::string>> heads;
};

struct LoadedArch {
  std::string arch_name;
  std::vector<TopLevelForm> forms;
  MdAnalysis analysis;
  ReaderOptions reader;
};

struct CorpusLoad {
  std::vector<LoadedArch> archs;  ///< successfully analyzed, in manifest order
  std::vector<std::string> failures;
};

/// Parses and analyzes the selected architectures (all when `only` is empty)
/// concurrently, one task per architecture.
[[nodiscard]] CorpusLoad load_corpus(const CorpusManifest& manifest, const std::vector<std::string>& only,
                                     const CommonOptions& options, const RtxCodeTable& table);

[[nodiscard]] ReaderOptions reader_options_for(const ManifestEntry& entry, const CommonOptions& options);
[[nodiscard]] AnalysisOptions analysis_options_for(const CommonOptions& options);

[[nodiscard]] Report stats_report(const std::vector<const MdAnalysis*>& analyses, bool subpatterns);
[[nodiscard]] Report compare_report(const MdAnalysis& a, const MdAnalysis& b, const std::string& metric);
[[nodiscard]] Report matrix_report(const std::vector<const MdAnalysis*>& analyses, Metric metric);
[[nodiscard]] Report verify_report(const std::vector<std::pair<std::string, VerifyReport>>& results);

/// Entry point behind the `mdpattern` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdpattern::cli
