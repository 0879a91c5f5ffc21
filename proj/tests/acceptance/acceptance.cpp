// Acceptance checks. One line per criterion; exit status is nonzero iff any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus_gen.hpp"
#include "mdpattern/archive.hpp"
#include "mdpattern/cli/commands.hpp"
#include "mdpattern/error.hpp"
#include "mdpattern/similarity.hpp"

using namespace mdpattern;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MDPATTERN_TEST_DATA_DIR;

constexpr double kFormulaTolerance = 0.01;
constexpr double kExprTolerance = 0.10;
constexpr double kPatternTolerance = 0.20;
constexpr int kOracleSeeds = 1000;
constexpr int kInvariantSeeds = 300;

enum class Outcome { Pass, Fail, Skip };

struct Result {
  Outcome outcome = Outcome::Pass;
  std::vector<std::string> lines;

  void fail(const std::string& why) {
    outcome = Outcome::Fail;
    lines.push_back("FAIL " + why);
  }
  void note(const std::string& text) { lines.push_back(text); }
  void check(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

const RtxCodeTable& table() {
  static const RtxCodeTable t = RtxCodeTable::builtin();
  return t;
}

MdAnalysis from_md(const std::string& name, const std::string& md) {
  return analyze(name, parse_md(md, name + ".md"), table());
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

Result formulas() {
  Result r;
  const auto near = [&](double got, double want, const std::string& what) {
    r.note(what + " = " + fmt(got, 4) + " (want " + fmt(want) + ")");
    r.check(std::fabs(got - want) <= kFormulaTolerance, what);
  };
  near(pattern_similarity(362, 187, 79), 28.78, "pattern_similarity(362,187,79)");
  near(pattern_similarity(547, 64, 34), 11.13, "pattern_similarity(547,64,34)");
  near(expression_similarity(1486, 0, 1581, 736), 64.13, "expression_similarity(1486 / 1581+736)");
  near(coverage_percent(88, 125), 70.40, "coverage(88,125)");
  near(coverage_percent(632, 2238), 28.23, "coverage(632,2238)");
  return r;
}

struct TableRow {
  std::uint64_t e;
  std::uint64_t p;
};

const std::map<std::string, TableRow> kReference{
    {"arm", {1581, 362}}, {"mips", {736, 209}}, {"sparc", {701, 187}}, {"i386", {2238, 547}}, {"vax", {125, 64}},
};

const char* kGccManifestVar = "MDPATTERN_GCC461_MANIFEST";

Result corpus_reproduction() {
  Result r;
  const char* path = std::getenv(kGccManifestVar);
  if (path == nullptr || !fs::exists(path)) {
    r.outcome = Outcome::Skip;
    r.note(std::string("GCC 4.6.1 machine descriptions not available; set ") + kGccManifestVar +
           " (see tools/fetch_gcc461.sh)");
    return r;
  }
  const cli::CorpusManifest manifest = cli::load_manifest(path);
  for (const auto& [arch, row] : kReference) {
    if (manifest.find(arch) == nullptr) {
      r.fail("manifest lacks " + arch);
      return r;
    }
  }

  struct Combo {
    std::string label;
    bool with_split;
    bool includes;
    double worst = 0.0;
    bool within = true;
    double seconds = 0.0;
  };
  std::vector<Combo> combos{
      {"split+includes", true, true}, {"split-only", true, false}, {"includes-only", false, true}, {"neither", false, false}};

  for (Combo& c : combos) {
    cli::CommonOptions options;
    options.no_includes = !c.includes;
    if (!c.with_split) options.heads = std::vector<std::string>{"define_insn", "define_expand", "define_insn_and_split"};
    std::vector<std::string> only;
    for (const auto& [arch, row] : kReference) only.push_back(arch);
    const auto start = std::chrono::steady_clock::now();
    const cli::CorpusLoad load = cli::load_corpus(manifest, only, options, table());
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const std::string& f : load.failures) r.fail(c.label + ": " + f);

    std::string line = c.label + ":";
    for (const cli::LoadedArch& a : load.archs) {
      const TableRow want = kReference.at(a.arch_name);
      const double de = std::fabs(double(a.analysis.expr_count) - double(want.e)) / double(want.e);
      const double dp = std::fabs(double(a.analysis.pattern_count()) - double(want.p)) / double(want.p);
      c.worst = std::max({c.worst, de / kExprTolerance, dp / kPatternTolerance});
      c.within = c.within && de <= kExprTolerance && dp <= kPatternTolerance;
      line += " " + a.arch_name + " E=" + std::to_string(a.analysis.expr_count) + " P=" +
              std::to_string(a.analysis.pattern_count());
    }
    r.note(line + " (" + fmt(c.seconds) + " s)");
  }
  const Combo& best = *std::min_element(combos.begin(), combos.end(),
                                        [](const Combo& a, const Combo& b) { return a.worst < b.worst; });
  r.note("closest: " + best.label + " (worst deviation " + fmt(best.worst * 100.0) + "% of tolerance)");
  r.check(best.within, "closest combination " + best.label + " is outside E +-10% / P +-20%");
  r.check(best.seconds < 10.0, "analysis took " + fmt(best.seconds) + " s");
  return r;
}

Result round_trip() {
  Result r;
  const auto verify_manifest = [&](const fs::path& manifest_path, const std::string& label) {
    const cli::CorpusManifest manifest = cli::load_manifest(manifest_path);
    for (const cli::ManifestEntry& entry : manifest.entries) {
      const cli::CommonOptions options;
      const ReaderOptions reader = cli::reader_options_for(entry, options);
      const std::vector<TopLevelForm> forms = read_md_file(entry.root, reader);
      const VerifyReport v = verify_round_trip(entry.arch_name, forms, table(), reader);
      r.note(label + " " + entry.arch_name + ": " + std::to_string(v.original) + " expressions, " +
             std::to_string(v.missing) + "/" + std::to_string(v.extra) + "/" + std::to_string(v.changed) +
             " missing/extra/changed");
      r.check(v.ok(), label + " " + entry.arch_name + " did not round-trip");
      if (entry.arch_name == "toy32") r.check(v.original == 50, "synthetic corpus should hold 50 expressions");
    }
  };
  verify_manifest(kData / "synth/manifest.txt", "synthetic");
  if (const char* gcc = std::getenv(kGccManifestVar); gcc != nullptr && fs::exists(gcc)) {
    verify_manifest(gcc, "gcc-4.6.1");
  } else {
    r.note("gcc-4.6.1 corpus not available; synthetic corpus only");
  }
  return r;
}

Result oracle_equivalence() {
  Result r;
  std::uint64_t exprs = 0;
  for (int seed = 0; seed < kOracleSeeds; ++seed) {
    gen::Generator g(static_cast<std::uint64_t>(seed));
    const auto corpus = g.corpus(20);
    const MdAnalysis a = from_md("rand", gen::to_md(corpus));
    gen::Abstractor abs;
    std::vector<gen::Abstracted> expected;
    for (const auto& e : corpus) expected.push_back(abs.run(e));
    const auto unique = gen::brute_force_unique(expected);
    exprs += corpus.size();

    bool same = a.expr_count == corpus.size() && a.pattern_count() == unique.size();
    for (const gen::BruteEntry& u : unique) {
      const StoredPattern* sp = a.store.find_text(u.pattern.height, u.pattern.text);
      same = same && sp != nullptr && sp->count == u.count;
    }
    if (!same) {
      r.fail("seed " + std::to_string(seed) + " disagrees with the brute-force oracle");
      return r;
    }
  }
  r.note(std::to_string(kOracleSeeds) + " seeds, " + std::to_string(exprs) + " expressions");
  return r;
}

std::set<std::string> entry_texts(const PatternFile& f) {
  std::set<std::string> out;
  for (const PatternFileEntry& e : f.entries) out.insert(std::to_string(e.height) + " " + e.text);
  return out;
}

bool alpha_invariant(const MdAnalysis& a, std::mt19937& rng) {
  for (const StoredPattern* sp : a.store.ordered()) {
    const RtlPattern& p = sp->pattern;
    std::map<ParamName, ParamName> renaming;
    for (ParamKind kind : {ParamKind::Mode, ParamKind::Arg}) {
      std::vector<ParamName> of_kind;
      for (const ParamName& n : collect_params(p.tree)) {
        if (n.kind == kind) of_kind.push_back(n);
      }
      std::vector<std::uint32_t> targets(of_kind.size() + 3);
      std::iota(targets.begin(), targets.end(), 0u);
      std::shuffle(targets.begin(), targets.end(), rng);
      for (std::size_t i = 0; i < of_kind.size(); ++i) renaming[of_kind[i]] = ParamName{kind, targets[i]};
    }
    const RtlPattern renamed = make_pattern(rename_params(p.tree, renaming));
    if (!pattern_equal(canonicalize(renamed), p)) return false;
  }
  return true;
}

Result invariants() {
  Result r;
  std::mt19937 rng(11);
  std::map<std::string, int> failures;
  for (int seed = 0; seed < kInvariantSeeds; ++seed) {
    gen::Generator g(static_cast<std::uint64_t>(seed) + 50000);
    const std::string md_a = gen::to_md(g.corpus(20));
    const std::string md_b = gen::to_md(g.corpus(20));
    const MdAnalysis a = from_md("a", md_a);
    const MdAnalysis b = from_md("b", md_b);

    if (!alpha_invariant(a, rng)) ++failures["alpha-invariance"];

    std::uint64_t counted = 0;
    for (const StoredPattern* sp : a.store.ordered()) counted += sp->count;
    if (counted != a.expr_count || a.store.total_templates() != a.expr_count) ++failures["count conservation"];

    const double ps = pattern_similarity(a, b);
    const PairReport ab = expression_similarity(a, b);
    const PairReport ba = expression_similarity(b, a);
    if (ps != pattern_similarity(b, a) || ab.expression_similarity_pct != ba.expression_similarity_pct) {
      ++failures["symmetry"];
    }
    if (ps < 0.0 || ps > 100.0 || ab.expression_similarity_pct < 0.0 || ab.expression_similarity_pct > 100.0) {
      ++failures["bounds"];
    }

    const CoverageReport into_a = target_coverage(b, a);
    const CoverageReport into_b = target_coverage(a, b);
    const double composed = (into_a.percent * double(a.expr_count) + into_b.percent * double(b.expr_count)) /
                            double(a.expr_count + b.expr_count);
    if (std::fabs(composed - ab.expression_similarity_pct) > 1e-9) ++failures["coverage composition"];

    const PatternFile fa = to_pattern_file(a);
    const PatternFile fb = to_pattern_file(b);
    std::set<std::string> previous = entry_texts(merge({fa, fb}, 0));
    for (std::uint64_t k = 1; k <= 5; ++k) {
      const std::set<std::string> now = entry_texts(merge({fa, fb}, k));
      if (!std::includes(previous.begin(), previous.end(), now.begin(), now.end())) ++failures["merge monotonicity"];
      previous = now;
    }

    const SerializedArchives s = write_archives(a);
    const LoadedArchives back = read_archives(s.patterns, s.params);
    if (write_pattern_file(back.header) != s.patterns || write_param_file(ParamFile{"a", back.bindings}) != s.params) {
      ++failures["archive read/write identity"];
    }
  }
  for (const auto& [name, n] : failures) r.fail(name + " violated on " + std::to_string(n) + " seeds");
  r.note(std::to_string(kInvariantSeeds) +
         " seed pairs: alpha-invariance, count conservation, symmetry, bounds, coverage composition, "
         "merge monotonicity, archive read/write identity");
  return r;
}

Result motivating_example() {
  Result r;
  const cli::CorpusManifest manifest = cli::load_manifest(kData / "add_pair/manifest.txt");
  const cli::CorpusLoad load = cli::load_corpus(manifest, {}, cli::CommonOptions{}, table());
  if (load.archs.size() != 2) {
    r.fail("could not load both architectures");
    return r;
  }
  const MdAnalysis& mips = load.archs[0].analysis;
  const MdAnalysis& arm = load.archs[1].analysis;
  const std::vector<PatternMatch> common = common_patterns(mips, arm);
  r.check(common.size() == 1, "expected exactly one common pattern");
  if (!common.empty()) {
    const std::string text = mips.store.find(common[0].id_a)->pattern.canonical_text;
    r.note("common pattern " + text);
    r.check(text == "[(set $arg0 (plus:$mode0 $arg1 $arg2))]", "unexpected pattern text");
  }
  const double ps = pattern_similarity(mips, arm);
  r.note("pattern similarity " + fmt(ps));
  r.check(ps == 100.0, "similarity is not 100%");

  using Assign = std::vector<std::pair<std::string, std::string>>;
  const auto printable = [](const ParamBinding& b) {
    Assign out;
    for (const auto& [name, text] : b.assignments) out.emplace_back(name.to_string(), text);
    return out;
  };
  const Assign want_mips{{"$mode0", "GPR"},
                         {"$arg0", R"((match_operand:GPR 0 "register_operand"))"},
                         {"$arg1", R"((match_operand:GPR 1 "register_operand"))"},
                         {"$arg2", R"((match_operand:GPR 2 "arith_operand"))"}};
  const Assign want_arm{{"$mode0", "SI"},
                        {"$arg0", R"((match_operand:SI 0 "s_register_operand" ""))"},
                        {"$arg1", R"((match_operand:SI 1 "s_register_operand" ""))"},
                        {"$arg2", R"((match_operand:SI 2 "reg_or_int_operand" ""))"}};
  r.check(mips.bindings.size() == 1 && printable(mips.bindings[0]) == want_mips, "MIPS bindings differ");
  r.check(arm.bindings.size() == 1 && printable(arm.bindings[0]) == want_arm, "ARM bindings differ");
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    Result (*run)();
  };
  const Criterion criteria[] = {
      {1, "formula exactness", formulas},
      {2, "GCC 4.6.1 corpus reproduction", corpus_reproduction},
      {3, "archive round trip", round_trip},
      {4, "store vs brute-force oracle", oracle_equivalence},
      {5, "invariant suite", invariants},
      {6, "motivating example", motivating_example},
  };
  bool any_fail = false;
  for (const Criterion& c : criteria) {
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    const char* word = r.outcome == Outcome::Pass ? "PASS" : r.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    any_fail = any_fail || r.outcome == Outcome::Fail;
    std::cout << "[criterion " << c.number << "] " << word << " - " << c.title << '\n';
    for (const std::string& line : r.lines) std::cout << "    " << line << '\n';
  }
  return any_fail ? 1 : 0;
}
