#include "mdpattern/cli/manifest.hpp"

#include <set>
#include <sstream>

#include "mdpattern/error.hpp"
#include "mdpattern/md_reader.hpp"

namespace mdpattern::cli {

namespace fs = std::filesystem;

const ManifestEntry* CorpusManifest::find(std::string_view arch) const {
  for (const ManifestEntry& e : entries) {
    if (e.arch_name == arch) return &e;
  }
  return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    if (auto item = trim(text.substr(pos, comma - pos)); !item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

CorpusManifest parse_manifest(std::string_view text, const fs::path& base_dir, std::string_view origin) {
  CorpusManifest manifest;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::uint32_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const SourceLocation where{std::string(origin), line_no, 1};
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::BadManifest, "expected 'name = path [flags]'", where);
    ManifestEntry entry;
    entry.arch_name = std::string(trim(line.substr(0, eq)));
    if (entry.arch_name.empty() || entry.arch_name.find(' ') != std::string::npos) {
      throw Error(ErrorCode::BadManifest, "bad architecture name", where);
    }
    std::istringstream rest{std::string(trim(line.substr(eq + 1)))};
    std::string path;
    if (!(rest >> path)) throw Error(ErrorCode::BadManifest, "missing path for " + entry.arch_name, where);
    entry.root = fs::path(path).is_absolute() ? fs::path(path) : base_dir / path;
    std::string flag;
    while (rest >> flag) {
      if (flag == "no-includes") {
        entry.resolve_includes = false;
      } else if (flag == "includes") {
        entry.resolve_includes = true;
      } else if (flag.starts_with("heads=")) {
        entry.considered_heads = split_commas(std::string_view(flag).substr(6));
      } else {
        throw Error(ErrorCode::BadManifest, "unknown flag '" + flag + "'", where);
      }
    }
    if (!names.insert(entry.arch_name).second) {
      throw Error(ErrorCode::BadManifest, "duplicate architecture '" + entry.arch_name + "'", where);
    }
    if (!fs::exists(entry.root)) {
      throw Error(ErrorCode::BadManifest, "no such file: " + entry.root.string(), where);
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CorpusManifest load_manifest(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::BadManifest, "cannot read manifest " + path.string());
  }
  return parse_manifest(text, path.parent_path(), path.string());
}

}  // namespace mdpattern::cli
