#include "mdpattern/archive.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

namespace mdpattern {

namespace fs = std::filesystem;

namespace {

constexpr char kHex[] = "0123456789ABCDEF";

std::string escape_chars(std::string_view text, std::string_view specials) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (specials.find(c) != std::string_view::npos) {
      const auto byte = static_cast<unsigned char>(c);
      out += '%';
      out += kHex[byte >> 4];
      out += kHex[byte & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

constexpr std::string_view kValueSpecials{" %\t\r\n", 5};
constexpr std::string_view kHeaderSpecials{"%\r\n", 3};

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && end == text.data() + text.size() && !text.empty();
}

SourceLocation at_line(std::string_view origin, std::size_t line) {
  return SourceLocation{std::string(origin), static_cast<std::uint32_t>(line), 1};
}

std::string encode_name(const std::string& name) {
  if (name.empty()) return "-";
  if (name == "-") return "%2D";
  return percent_escape(name);
}

std::string decode_name(std::string_view field) {
  if (field == "-") return {};
  return percent_unescape(field);
}

}  // namespace

std::string percent_escape(std::string_view text) { return escape_chars(text, kValueSpecials); }

std::string percent_unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    unsigned value = 0;
    if (i + 2 >= text.size()) {
      throw Error(ErrorCode::MalformedEntry, "truncated escape in '" + std::string(text) + "'");
    }
    auto [end, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, value, 16);
    if (ec != std::errc{} || end != text.data() + i + 3) {
      throw Error(ErrorCode::MalformedEntry, "bad escape in '" + std::string(text) + "'");
    }
    out += static_cast<char>(value);
    i += 2;
  }
  return out;
}

PatternFile to_pattern_file(const MdAnalysis& analysis) {
  PatternFile file;
  file.arch_names.push_back(analysis.arch_name);
  file.total_templates = analysis.store.total_templates();
  for (const IteratorDef& def : analysis.iterators) file.iterators.push_back(to_string(def.form));
  for (const StoredPattern* e : analysis.store.ordered()) {
    file.entries.push_back(PatternFileEntry{e->id, e->pattern.height, e->count, e->pattern.canonical_text});
  }
  return file;
}

ParamFile to_param_file(const MdAnalysis& analysis) {
  return ParamFile{analysis.arch_name, analysis.bindings};
}

std::string write_pattern_file(const PatternFile& file) {
  std::string out;
  for (const std::string& arch : file.arch_names) out += "# arch: " + arch + '\n';
  out += "# total_templates: " + std::to_string(file.total_templates) + '\n';
  for (const std::string& it : file.iterators) {
    out += "# iterator: " + escape_chars(it, kHeaderSpecials) + '\n';
  }
  for (const PatternFileEntry& e : file.entries) {
    out += std::to_string(e.id) + ' ' + std::to_string(e.height) + ' ' + std::to_string(e.count) + ' ' +
           e.text + '\n';
  }
  return out;
}

std::string write_param_file(const ParamFile& file) {
  std::string out;
  if (!file.arch_name.empty()) out += "# arch: " + file.arch_name + '\n';
  for (const ParamBinding& b : file.records) {
    out += std::to_string(b.pattern_id) + ' ' + encode_name(b.origin.form_kind) + ' ' +
           encode_name(b.origin.form_name);
    for (const auto& [name, value] : b.assignments) {
      out += ' ' + name.to_string() + '=' + percent_escape(value);
    }
    out += '\n';
  }
  return out;
}

PatternFile parse_pattern_file(std::string_view text, std::string_view origin) {
  PatternFile file;
  bool seen_total = false;
  bool in_entries = false;
  std::uint64_t sum = 0;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim_right(lines[n]);
    const SourceLocation where = at_line(origin, n + 1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (in_entries) throw Error(ErrorCode::BadHeader, "header line after entries", where);
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) throw Error(ErrorCode::BadHeader, "expected 'key: value'", where);
      const std::string_view key = body.substr(0, colon);
      std::string_view value = body.substr(colon + 1);
      if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
      if (key == "arch") {
        if (value.empty()) throw Error(ErrorCode::BadHeader, "empty arch name", where);
        file.arch_names.emplace_back(value);
      } else if (key == "total_templates") {
        if (!parse_number(value, file.total_templates)) {
          throw Error(ErrorCode::BadHeader, "bad total_templates '" + std::string(value) + "'", where);
        }
        seen_total = true;
      } else if (key == "iterator") {
        try {
          file.iterators.push_back(percent_unescape(value));
        } catch (const Error& e) {
          throw Error(ErrorCode::BadHeader, e.detail(), where);
        }
      } else {
        throw Error(ErrorCode::BadHeader, "unknown header key '" + std::string(key) + "'", where);
      }
      continue;
    }
    in_entries = true;
    const auto fields = split_fields(line.substr(0, std::min(line.size(), line.find('['))));
    PatternFileEntry entry;
    const auto pattern_start = line.find('[');
    if (fields.size() != 3 || pattern_start == std::string_view::npos ||
        !parse_number(fields[0], entry.id) || !parse_number(fields[1], entry.height) ||
        !parse_number(fields[2], entry.count) || entry.height < 1) {
      throw Error(ErrorCode::MalformedEntry, "expected '<id> <height> <count> <pattern>'", where);
    }
    entry.text = std::string(line.substr(pattern_start));
    try {
      (void)parse_pattern(entry.text, entry.height);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedEntry, e.detail(), where);
    }
    sum += entry.count;
    file.entries.push_back(std::move(entry));
  }
  if (file.arch_names.empty()) throw Error(ErrorCode::BadHeader, "missing '# arch:' header", at_line(origin, 1));
  if (!seen_total) throw Error(ErrorCode::BadHeader, "missing '# total_templates:' header", at_line(origin, 1));
  if (sum != file.total_templates) {
    throw Error(ErrorCode::BadHeader,
                "total_templates " + std::to_string(file.total_templates) +
                    " does not match entry count sum " + std::to_string(sum),
                at_line(origin, 1));
  }
  return file;
}

ParamFile parse_param_file(std::string_view text, std::string_view origin) {
  ParamFile file;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim_right(lines[n]);
    const SourceLocation where = at_line(origin, n + 1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.starts_with("arch:")) {
        body.remove_prefix(5);
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        file.arch_name = std::string(body);
      }
      continue;
    }
    const auto fields = split_fields(line);
    ParamBinding b;
    if (fields.size() < 3 || !parse_number(fields[0], b.pattern_id)) {
      throw Error(ErrorCode::MalformedEntry, "expected '<pattern-id> <form-kind> <form-name> ...'", where);
    }
    try {
      b.origin.form_kind = decode_name(fields[1]);
      b.origin.form_name = decode_name(fields[2]);
      for (std::size_t i = 3; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        auto name = eq == std::string_view::npos ? std::nullopt : ParamName::parse(fields[i].substr(0, eq));
        if (!name) {
          throw Error(ErrorCode::MalformedEntry, "bad assignment '" + std::string(fields[i]) + "'");
        }
        b.assignments.emplace_back(*name, percent_unescape(fields[i].substr(eq + 1)));
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedEntry, e.detail(), where);
    }
    b.origin.location = where;
    file.records.push_back(std::move(b));
  }
  return file;
}

SerializedArchives write_archives(const MdAnalysis& analysis) {
  return SerializedArchives{write_pattern_file(to_pattern_file(analysis)),
                            write_param_file(to_param_file(analysis))};
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

ArchivePaths save_archives(const MdAnalysis& analysis, const fs::path& dir) {
  const SerializedArchives text = write_archives(analysis);
  ArchivePaths paths{dir / (analysis.arch_name + ".patterns"), dir / (analysis.arch_name + ".params")};
  write_file(paths.patterns, text.patterns);
  write_file(paths.params, text.params);
  return paths;
}

LoadedArchives read_archives(std::string_view patterns, std::string_view params,
                             std::string_view pattern_origin, std::string_view param_origin) {
  LoadedArchives out;
  out.header = parse_pattern_file(patterns, pattern_origin);
  for (const PatternFileEntry& e : out.header.entries) {
    out.store.restore(StoredPattern{e.id, parse_pattern(e.text, e.height), e.count});
  }
  out.store.set_total_templates(out.header.total_templates);
  ParamFile param_file = parse_param_file(params, param_origin);
  for (ParamBinding& b : param_file.records) {
    if (out.store.find(b.pattern_id) == nullptr) {
      throw Error(ErrorCode::DanglingPatternId,
                  "record refers to pattern " + std::to_string(b.pattern_id) + " which is not in the pattern file",
                  b.origin.location);
    }
  }
  out.bindings = std::move(param_file.records);
  return out;
}

std::vector<std::string> recombine(const PatternStore& store, const std::vector<ParamBinding>& bindings) {
  std::vector<std::string> forms;
  forms.reserve(bindings.size());
  for (const ParamBinding& b : bindings) {
    const StoredPattern* entry = store.find(b.pattern_id);
    if (entry == nullptr) {
      throw Error(ErrorCode::DanglingPatternId, "no pattern " + std::to_string(b.pattern_id),
                  b.origin.location);
    }
    const SExpr body = substitute(entry->pattern, b);
    std::string form = "(" + b.origin.form_kind;
    if (!b.origin.form_name.empty()) form += " \"" + b.origin.form_name + "\"";
    form += "\n  " + to_string(body) + "\n  \"\"\n  " + std::string(kElidedOutput) + ")";
    forms.push_back(std::move(form));
  }
  return forms;
}

std::string recombine_to_md(const PatternStore& store, const std::vector<ParamBinding>& bindings) {
  std::string out = ";; Regenerated from pattern and parameter archives.\n";
  for (const std::string& form : recombine(store, bindings)) {
    out += '\n';
    out += form;
    out += '\n';
  }
  return out;
}

PatternFile merge(const std::vector<PatternFile>& files, std::uint64_t min_count) {
  PatternFile merged;
  std::map<std::pair<int, std::string>, std::uint64_t> counts;
  std::set<std::string> seen_arch;
  std::set<std::string> seen_iter;
  for (const PatternFile& f : files) {
    for (const std::string& a : f.arch_names) {
      if (seen_arch.insert(a).second) merged.arch_names.push_back(a);
    }
    for (const std::string& it : f.iterators) {
      if (seen_iter.insert(it).second) merged.iterators.push_back(it);
    }
    for (const PatternFileEntry& e : f.entries) counts[{e.height, e.text}] += e.count;
  }
  PatternId next = 0;
  for (const auto& [key, count] : counts) {
    if (count <= min_count) continue;
    merged.entries.push_back(PatternFileEntry{next++, key.first, count, key.second});
    merged.total_templates += count;
  }
  return merged;
}

std::string normalize_whitespace(std::string_view text) {
  std::string collapsed;
  collapsed.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = true;
      continue;
    }
    if (pending_space && !collapsed.empty()) {
      const char prev = collapsed.back();
      const bool glue = prev == '(' || prev == '[' || c == ')' || c == ']';
      if (!glue) collapsed += ' ';
    }
    pending_space = false;
    collapsed += c;
  }
  return collapsed;
}

VerifyReport compare_templates(const std::vector<TopLevelForm>& original,
                               const std::vector<TopLevelForm>& regenerated) {
  using Key = std::tuple<std::string, std::string, std::size_t>;
  auto index = [](const std::vector<TopLevelForm>& forms, std::uint64_t& total) {
    std::map<Key, std::string> out;
    std::map<std::pair<std::string, std::string>, std::size_t> ordinals;
    for (const TopLevelForm& f : forms) {
      if (f.kind != FormKind::ConsideredTemplate) continue;
      const SExpr* vec = nullptr;
      try {
        vec = &extract_template_vector(f);
      } catch (const Error&) {
        continue;
      }
      const std::size_t ordinal = ordinals[{f.head, f.name}]++;
      out.emplace(Key{f.head, f.name, ordinal}, normalize_whitespace(to_string(*vec)));
      ++total;
    }
    return out;
  };

  VerifyReport report;
  const auto before = index(original, report.original);
  const auto after = index(regenerated, report.regenerated);
  auto describe = [](const Key& k) {
    return std::get<0>(k) + " \"" + std::get<1>(k) + "\" #" + std::to_string(std::get<2>(k));
  };
  for (const auto& [key, text] : before) {
    auto it = after.find(key);
    if (it == after.end()) {
      ++report.missing;
      report.details.push_back("missing: " + describe(key));
    } else if (it->second != text) {
      ++report.changed;
      report.details.push_back("changed: " + describe(key) + "\n  was: " + text + "\n  now: " + it->second);
    }
  }
  for (const auto& [key, text] : after) {
    if (!before.contains(key)) {
      ++report.extra;
      report.details.push_back("extra: " + describe(key));
    }
  }
  return report;
}

VerifyReport verify_round_trip(const std::string& arch_name, const std::vector<TopLevelForm>& forms,
                               const RtxCodeTable& table, const ReaderOptions& reader,
                               const AnalysisOptions& options) {
  AnalysisOptions plain = options;
  plain.expand_code_iterators = false;
  const MdAnalysis analysis = analyze(arch_name, forms, table, plain);
  const SerializedArchives text = write_archives(analysis);
  const LoadedArchives loaded = read_archives(text.patterns, text.params);
  const std::string md = recombine_to_md(loaded.store, loaded.bindings);
  return compare_templates(forms, parse_md(md, arch_name + ".regenerated.md", reader));
}

}  // namespace mdpattern
