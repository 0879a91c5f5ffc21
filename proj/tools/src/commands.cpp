#include "mdpattern/cli/commands.hpp"

#include <algorithm>
#include <future>
#include <iostream>

#include <CLI11.hpp>

namespace mdpattern::cli {

namespace fs = std::filesystem;

ReaderOptions reader_options_for(const ManifestEntry& entry, const CommonOptions& options) {
  ReaderOptions reader;
  if (entry.considered_heads) reader.considered_heads = *entry.considered_heads;
  if (options.heads) reader.considered_heads = *options.heads;
  reader.resolve_includes = entry.resolve_includes && !options.no_includes;
  return reader;
}

AnalysisOptions analysis_options_for(const CommonOptions& options) {
  AnalysisOptions a;
  a.expand_code_iterators = options.expand_iterators;
  a.count_subpatterns = options.count_subpatterns;
  a.policy.bin_arith_in_patterns = options.bin_arith;
  return a;
}

CorpusLoad load_corpus(const CorpusManifest& manifest, const std::vector<std::string>& only,
                       const CommonOptions& options, const RtxCodeTable& table) {
  std::vector<const ManifestEntry*> selected;
  if (only.empty()) {
    for (const ManifestEntry& e : manifest.entries) selected.push_back(&e);
  } else {
    for (const std::string& name : only) {
      const ManifestEntry* e = manifest.find(name);
      if (e == nullptr) throw Error(ErrorCode::BadManifest, "architecture '" + name + "' is not in the manifest");
      selected.push_back(e);
    }
  }

  struct Outcome {
    std::optional<LoadedArch> arch;
    std::string failure;
  };
  std::vector<std::future<Outcome>> tasks;
  for (const ManifestEntry* entry : selected) {
    tasks.push_back(std::async(std::launch::async, [entry, &options, &table]() {
      Outcome outcome;
      try {
        LoadedArch arch;
        arch.arch_name = entry->arch_name;
        arch.reader = reader_options_for(*entry, options);
        arch.forms = read_md_file(entry->root, arch.reader);
        arch.analysis = analyze(entry->arch_name, arch.forms, table, analysis_options_for(options));
        outcome.arch = std::move(arch);
      } catch (const Error& e) {
        outcome.failure = entry->arch_name + ": " + e.what();
      }
      return outcome;
    }));
  }

  CorpusLoad load;
  for (auto& task : tasks) {
    Outcome outcome = task.get();
    if (outcome.arch) {
      load.archs.push_back(std::move(*outcome.arch));
    } else {
      load.failures.push_back(std::move(outcome.failure));
    }
  }
  return load;
}

Report stats_report(const std::vector<const MdAnalysis*>& analyses, bool subpatterns) {
  Report r;
  r.table = "stats";
  r.columns = {"arch", "expressions", "patterns", "average"};
  if (subpatterns) r.columns.emplace_back("subpatterns");
  for (const MdAnalysis* a : analyses) {
    const std::uint64_t e = a->expr_count;
    const std::uint64_t p = a->pattern_count();
    std::vector<Cell> row{a->arch_name, e, p,
                          Fixed2{p == 0 ? 0.0 : static_cast<double>(e) / static_cast<double>(p)}};
    if (subpatterns) row.emplace_back(static_cast<std::uint64_t>(a->subpattern_counts.size()));
    r.rows.push_back(std::move(row));

    const auto& d = a->diagnostics;
    if (!d.skipped_forms.empty()) {
      r.notes.push_back(a->arch_name + ": skipped " + std::to_string(d.skipped_forms.size()) +
                        " malformed template(s); first: " + d.skipped_forms.front());
    }
    if (!d.unknown_codes.empty()) {
      std::string codes;
      for (const auto& [code, n] : d.unknown_codes) {
        codes += (codes.empty() ? "" : ", ") + code + " x" + std::to_string(n);
      }
      r.notes.push_back(a->arch_name + ": unknown codes treated as machine-specific: " + codes);
    }
  }
  return r;
}

Report compare_report(const MdAnalysis& a, const MdAnalysis& b, const std::string& metric) {
  Report r;
  r.table = "compare";
  std::vector<Cell> row{a.arch_name, b.arch_name};
  r.columns = {"arch_a", "arch_b"};
  const bool all = metric == "all";
  if (all || metric == "pattern") {
    const auto common = static_cast<std::uint64_t>(common_patterns(a, b).size());
    r.columns.insert(r.columns.end(), {"patterns_a", "patterns_b", "common", "pattern_pct"});
    row.insert(row.end(), {a.pattern_count(), b.pattern_count(), common,
                           Fixed2{pattern_similarity(a.pattern_count(), b.pattern_count(), common)}});
  }
  if (all || metric == "expr") {
    const PairReport p = expression_similarity(a, b);
    r.columns.insert(r.columns.end(), {"exprs_a", "exprs_b", "covered_a", "covered_b", "expr_pct"});
    row.insert(row.end(), {p.exprs_a, p.exprs_b, p.covered_expr_a, p.covered_expr_b,
                           Fixed2{p.expression_similarity_pct}});
  }
  if (all || metric == "coverage") {
    const CoverageReport ab = target_coverage(a, b);
    const CoverageReport ba = target_coverage(b, a);
    r.columns.insert(r.columns.end(), {"b_from_a", "b_from_a_pct", "a_from_b", "a_from_b_pct"});
    row.insert(row.end(), {ab.covered, Fixed2{ab.percent}, ba.covered, Fixed2{ba.percent}});
  }
  r.rows.push_back(std::move(row));
  return r;
}

Report matrix_report(const std::vector<const MdAnalysis*>& analyses, Metric metric) {
  const SimilarityMatrix m = similarity_matrix(analyses, metric);
  Report r;
  switch (metric) {
    case Metric::Pattern: r.table = "pattern-sim"; break;
    case Metric::Expression: r.table = "expr-sim"; break;
    case Metric::Coverage: r.table = "coverage"; break;
  }
  r.columns = {"row", "col", "count", "percent"};
  r.grid_order = m.arch_names;
  for (const MatrixCell& c : m.cells) {
    r.rows.push_back({m.arch_names[c.row], m.arch_names[c.col], c.count, Fixed2{c.percent}});
  }
  return r;
}

Report verify_report(const std::vector<std::pair<std::string, VerifyReport>>& results) {
  Report r;
  r.table = "verify";
  r.columns = {"arch", "original", "regenerated", "missing", "extra", "changed", "status"};
  for (const auto& [arch, v] : results) {
    r.rows.push_back({arch, v.original, v.regenerated, v.missing, v.extra, v.changed,
                      std::string(v.ok() ? "ok" : "FAILED")});
    const std::size_t shown = std::min<std::size_t>(v.details.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) r.notes.push_back(arch + ": " + v.details[i]);
    if (v.details.size() > shown) {
      r.notes.push_back(arch + ": ... " + std::to_string(v.details.size() - shown) + " more");
    }
  }
  return r;
}

namespace {

std::optional<Metric> parse_metric(const std::string& text) {
  if (text == "pattern") return Metric::Pattern;
  if (text == "expr") return Metric::Expression;
  if (text == "coverage") return Metric::Coverage;
  return std::nullopt;
}

std::vector<const MdAnalysis*> analyses_of(const CorpusLoad& load) {
  std::vector<const MdAnalysis*> out;
  for (const LoadedArch& a : load.archs) out.push_back(&a.analysis);
  return out;
}

const LoadedArch& arch_named(const CorpusLoad& load, const std::string& name) {
  for (const LoadedArch& a : load.archs) {
    if (a.arch_name == name) return a;
  }
  throw Error(ErrorCode::BadManifest, "architecture '" + name + "' failed to load");
}

void emit(const std::string& text, const CommonOptions& common, std::ostream& out) {
  if (common.out) {
    write_file(*common.out, text);
  } else {
    out << text;
  }
}

int report_failures(const CorpusLoad& load, std::ostream& err) {
  for (const std::string& f : load.failures) err << "error: " << f << '\n';
  return load.failures.empty() ? kExitOk : kExitParse;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract RTL patterns from GCC machine descriptions and compare architectures",
               "mdpattern"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  std::string format = "text";
  std::string out_path;
  std::string heads;
  bool no_bin_arith = false;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", out_path,
                 "Report file; output directory for extract/split; output file for recombine/merge");
  app.add_flag("--expand-iterators", common.expand_iterators,
               "Expand code iterators into their member codes before comparison");
  app.add_flag("--count-subpatterns", common.count_subpatterns,
               "Also count every operator sub-pattern (reported by stats)");
  app.add_flag("--no-includes", common.no_includes, "Do not follow (include ...) forms");
  app.add_option("--heads", heads, "Comma-separated define_* heads whose templates are analyzed");
  app.add_flag("--no-bin-arith", no_bin_arith,
               "Treat non-commutative binary arithmetic (minus, div, shifts) as machine-specific");

  std::string manifest_path;
  std::vector<std::string> archs;

  auto* stats = app.add_subcommand("stats", "Expressions and unique patterns per architecture");
  stats->add_option("--manifest", manifest_path, "Corpus manifest")->required();
  stats->add_option("archs", archs, "Architectures (default: all)");

  std::string arch;
  auto* extract = app.add_subcommand("extract", "Split one manifest architecture into archives");
  extract->add_option("arch", arch, "Architecture")->required();
  extract->add_option("--manifest", manifest_path, "Corpus manifest")->required();

  std::string md_file;
  std::string split_arch;
  auto* split = app.add_subcommand("split", "Split an MD file into pattern and parameter archives");
  split->add_option("file", md_file, "Root MD file")->required()->check(CLI::ExistingFile);
  split->add_option("--arch", split_arch, "Architecture name (default: file stem)");

  std::string arch_b;
  std::string metric = "all";
  auto* compare = app.add_subcommand("compare", "Similarity of two architectures");
  compare->add_option("arch_a", arch, "First architecture")->required();
  compare->add_option("arch_b", arch_b, "Second architecture")->required();
  compare->add_option("--manifest", manifest_path, "Corpus manifest")->required();
  compare->add_option("--metric", metric, "pattern | expr | coverage | all")
      ->check(CLI::IsMember({"pattern", "expr", "coverage", "all"}));

  std::string matrix_metric = "pattern";
  auto* matrix = app.add_subcommand("matrix", "All-pairs similarity matrix");
  matrix->add_option("--manifest", manifest_path, "Corpus manifest")->required();
  matrix->add_option("--metric", matrix_metric, "pattern | expr | coverage")
      ->check(CLI::IsMember({"pattern", "expr", "coverage"}));

  std::string patterns_file;
  std::string params_file;
  auto* recombine_cmd = app.add_subcommand("recombine", "Regenerate MD forms from archives");
  recombine_cmd->add_option("patterns", patterns_file, "Pattern archive")->required()->check(CLI::ExistingFile);
  recombine_cmd->add_option("params", params_file, "Parameter archive")->required()->check(CLI::ExistingFile);

  std::vector<std::string> merge_inputs;
  std::uint64_t min_count = 0;
  auto* merge_cmd = app.add_subcommand("merge", "Merge pattern archives, keeping frequent patterns");
  merge_cmd->add_option("files", merge_inputs, "Pattern archives")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("--min-count", min_count, "Keep patterns occurring more than this many times");

  std::string archive_dir;
  auto* verify = app.add_subcommand("verify", "Split, recombine and compare against the source");
  verify->add_option("--manifest", manifest_path, "Corpus manifest")->required();
  verify->add_option("archs", archs, "Architectures (default: all)");
  verify->add_option("--archives", archive_dir,
                     "Verify existing <arch>.patterns/<arch>.params from this directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  common.format = format == "json" ? RenderMode::Json : RenderMode::Text;
  if (!out_path.empty()) common.out = fs::path(out_path);
  if (!heads.empty()) {
    std::vector<std::string> list;
    std::size_t pos = 0;
    while (pos <= heads.size()) {
      const std::size_t comma = std::min(heads.find(',', pos), heads.size());
      if (comma > pos) list.push_back(heads.substr(pos, comma - pos));
      pos = comma + 1;
    }
    common.heads = std::move(list);
  }
  common.bin_arith = !no_bin_arith;

  try {
    const RtxCodeTable table = RtxCodeTable::from_environment();

    if (*stats) {
      const CorpusLoad load = load_corpus(load_manifest(manifest_path), archs, common, table);
      emit(render(stats_report(analyses_of(load), common.count_subpatterns), common.format), common, out);
      return report_failures(load, err);
    }

    if (*extract) {
      const CorpusLoad load = load_corpus(load_manifest(manifest_path), {arch}, common, table);
      if (int rc = report_failures(load, err); rc != kExitOk) return rc;
      const fs::path dir = common.out.value_or(fs::path("."));
      const ArchivePaths paths = save_archives(load.archs.front().analysis, dir);
      out << "wrote " << paths.patterns.string() << '\n' << "wrote " << paths.params.string() << '\n';
      return kExitOk;
    }

    if (*split) {
      const fs::path path(md_file);
      ManifestEntry entry{split_arch.empty() ? path.stem().string() : split_arch, path, true, std::nullopt};
      const ReaderOptions reader = reader_options_for(entry, common);
      const MdAnalysis analysis =
          analyze(entry.arch_name, read_md_file(path, reader), table, analysis_options_for(common));
      const ArchivePaths paths = save_archives(analysis, common.out.value_or(fs::path(".")));
      out << "wrote " << paths.patterns.string() << '\n' << "wrote " << paths.params.string() << '\n';
      return kExitOk;
    }

    if (*compare) {
      const CorpusLoad load = load_corpus(load_manifest(manifest_path), {arch, arch_b}, common, table);
      if (int rc = report_failures(load, err); rc != kExitOk) return rc;
      emit(render(compare_report(arch_named(load, arch).analysis, arch_named(load, arch_b).analysis, metric),
                  common.format),
           common, out);
      return kExitOk;
    }

    if (*matrix) {
      const CorpusLoad load = load_corpus(load_manifest(manifest_path), {}, common, table);
      if (int rc = report_failures(load, err); rc != kExitOk) return rc;
      if (load.archs.size() < 2) {
        err << "error: matrix needs at least two architectures\n";
        return kExitUsage;
      }
      emit(render(matrix_report(analyses_of(load), *parse_metric(matrix_metric)), common.format), common, out);
      return kExitOk;
    }

    if (*recombine_cmd) {
      const LoadedArchives loaded = read_archives(read_text_file(patterns_file), read_text_file(params_file),
                                                  patterns_file, params_file);
      emit(recombine_to_md(loaded.store, loaded.bindings), common, out);
      return kExitOk;
    }

    if (*merge_cmd) {
      std::vector<PatternFile> files;
      for (const std::string& f : merge_inputs) files.push_back(parse_pattern_file(read_text_file(f), f));
      emit(write_pattern_file(merge(files, min_count)), common, out);
      return kExitOk;
    }

    if (*verify) {
      CommonOptions plain = common;
      plain.expand_iterators = false;
      const CorpusLoad load = load_corpus(load_manifest(manifest_path), archs, plain, table);
      std::vector<std::pair<std::string, VerifyReport>> results;
      for (const LoadedArch& a : load.archs) {
        VerifyReport v;
        if (archive_dir.empty()) {
          v = verify_round_trip(a.arch_name, a.forms, table, a.reader, analysis_options_for(plain));
        } else {
          const fs::path dir(archive_dir);
          const fs::path pf = dir / (a.arch_name + ".patterns");
          const fs::path rf = dir / (a.arch_name + ".params");
          const LoadedArchives loaded =
              read_archives(read_text_file(pf), read_text_file(rf), pf.string(), rf.string());
          const std::string md = recombine_to_md(loaded.store, loaded.bindings);
          v = compare_templates(a.forms, parse_md(md, a.arch_name + ".regenerated.md", a.reader));
        }
        results.emplace_back(a.arch_name, std::move(v));
      }
      emit(render(verify_report(results), common.format), common, out);
      if (int rc = report_failures(load, err); rc != kExitOk) return rc;
      const bool all_ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.second.ok(); });
      return all_ok ? kExitOk : kExitVerify;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::BadManifest ? kExitUsage : kExitParse;
  }
  return kExitUsage;
}

}  // namespace mdpattern::cli
