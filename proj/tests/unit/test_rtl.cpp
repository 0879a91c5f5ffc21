#include <gtest/gtest.h>

#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdpattern/error.hpp"
#include "mdpattern/md_reader.hpp"
#include "mdpattern/rtl.hpp"

using namespace mdpattern;

namespace {

const RtxCodeTable& table() {
  static const RtxCodeTable t = RtxCodeTable::builtin();
  return t;
}

RtxClass cls(std::string_view code) {
  const CodeLookup l = rtx_class(code, table());
  EXPECT_EQ(l.status, CodeStatus::Known) << code;
  return l.rtx_class;
}

bool pattern_op(std::string_view code, std::set<std::string, std::less<>> iterators = {}) {
  CodeContext ctx{&table(), std::move(iterators), {}};
  return is_pattern_operator(code, ctx);
}

}  // namespace

TEST(RtxTable, RepresentativeClasses) {
  for (auto c : {"reg", "mem", "symbol_ref"}) EXPECT_EQ(cls(c), RtxClass::Obj) << c;
  for (auto c : {"const_int", "const_double"}) EXPECT_EQ(cls(c), RtxClass::ConstObj) << c;
  for (auto c : {"geu", "lt"}) EXPECT_EQ(cls(c), RtxClass::Compare) << c;
  for (auto c : {"eq", "ordered"}) EXPECT_EQ(cls(c), RtxClass::CommCompare) << c;
  for (auto c : {"neg", "not", "abs", "sign_extend", "zero_extend", "float", "fix"}) {
    EXPECT_EQ(cls(c), RtxClass::Unary) << c;
  }
  for (auto c : {"plus", "and", "ior", "xor", "mult"}) EXPECT_EQ(cls(c), RtxClass::CommArith) << c;
  for (auto c : {"minus", "div", "mod", "ashiftrt", "ashift", "lshiftrt"}) EXPECT_EQ(cls(c), RtxClass::BinArith) << c;
  for (auto c : {"zero_extract", "sign_extract"}) EXPECT_EQ(cls(c), RtxClass::BitfieldOps) << c;
  for (auto c : {"if_then_else", "vec_merge", "fma"}) EXPECT_EQ(cls(c), RtxClass::Ternary) << c;
  for (auto c : {"match_operand", "match_dup", "match_scratch", "match_operator", "match_parallel"}) {
    EXPECT_EQ(cls(c), RtxClass::Match) << c;
  }
  for (auto c : {"post_inc", "pre_inc", "post_dec", "pre_dec", "post_modify", "pre_modify"}) {
    EXPECT_EQ(cls(c), RtxClass::Autoinc) << c;
  }
  for (auto c : {"subreg", "note", "barrier", "code_label"}) EXPECT_EQ(cls(c), RtxClass::Extra) << c;
}

TEST(RtxTable, SideEffectSetIsExact) {
  const std::set<std::string> expected{"set",    "return",          "call",    "clobber", "use",
                                       "parallel", "cond_exec",     "sequence", "asm_input", "unspec",
                                       "unspec_volatile", "addr_vec", "addr_diff_vec"};
  std::set<std::string> actual;
  for (const auto& [code, info] : table().entries()) {
    if (info.side_effect) {
      actual.insert(code);
      EXPECT_EQ(info.rtx_class, RtxClass::Extra) << code;
    }
  }
  EXPECT_EQ(actual, expected);
}

TEST(RtxTable, UnknownCode) {
  EXPECT_EQ(rtx_class("frobnicate", table()).status, CodeStatus::Unknown);
  EXPECT_FALSE(pattern_op("frobnicate"));
}

TEST(RtxTable, IteratorAlias) {
  const CodeLookup l = rtx_class("any_extend", table(), {"any_extend"});
  EXPECT_EQ(l.status, CodeStatus::IteratorAlias);
  EXPECT_EQ(l.rtx_class, RtxClass::Extra);
  EXPECT_TRUE(pattern_op("any_extend", {"any_extend"}));
  EXPECT_FALSE(pattern_op("any_extend"));
}

TEST(RtxTable, ClassNamesRoundTrip) {
  for (std::size_t i = 0; i < kRtxClassCount; ++i) {
    const auto c = static_cast<RtxClass>(i);
    EXPECT_EQ(parse_rtx_class(rtx_class_name(c)), c);
  }
  EXPECT_EQ(parse_rtx_class("bin_arith"), RtxClass::BinArith);
  EXPECT_EQ(parse_rtx_class("RTX_COMM_ARITH"), RtxClass::CommArith);
  EXPECT_FALSE(parse_rtx_class("nonsense"));
}

TEST(PatternOperator, Examples) {
  EXPECT_TRUE(pattern_op("set"));
  EXPECT_FALSE(pattern_op("match_operand"));
  EXPECT_FALSE(pattern_op("const_int"));
  EXPECT_TRUE(pattern_op("plus"));
  EXPECT_TRUE(pattern_op("minus"));
  EXPECT_TRUE(pattern_op("post_inc"));
  EXPECT_TRUE(pattern_op("unspec"));
  EXPECT_FALSE(pattern_op("subreg"));
  EXPECT_FALSE(pattern_op("mem"));
}

TEST(PatternOperator, BinArithToggle) {
  CodeContext ctx{&table(), {}, {}};
  ctx.policy.bin_arith_in_patterns = false;
  EXPECT_FALSE(is_pattern_operator("minus", ctx));
  EXPECT_TRUE(is_pattern_operator("plus", ctx));
}

TEST(PatternOperator, NeverForObjConstObjMatch) {
  for (const auto& [code, info] : table().entries()) {
    if (info.rtx_class == RtxClass::Obj || info.rtx_class == RtxClass::ConstObj ||
        info.rtx_class == RtxClass::Match) {
      EXPECT_FALSE(pattern_op(code)) << code;
    }
  }
}

TEST(Overrides, AddsAndReplacesCodes) {
  RtxCodeTable t = RtxCodeTable::builtin();
  std::istringstream in(
      "# comment\n"
      "frobnicate CommArith\n"
      "reg unary 0   # demote\n"
      "my_barrier Extra 1\n");
  t.load_overrides(in, "over.tbl");
  EXPECT_EQ(t.find("frobnicate")->rtx_class, RtxClass::CommArith);
  EXPECT_EQ(t.find("reg")->rtx_class, RtxClass::Unary);
  EXPECT_TRUE(t.find("my_barrier")->side_effect);
}

TEST(Overrides, Errors) {
  auto load = [](const std::string& text) {
    RtxCodeTable t;
    std::istringstream in(text);
    try {
      t.load_overrides(in, "bad.tbl");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(load("lonely\n"), ErrorCode::BadCodeTable);
  EXPECT_EQ(load("x NoSuchClass\n"), ErrorCode::BadCodeTable);
  EXPECT_EQ(load("x Unary maybe\n"), ErrorCode::BadCodeTable);
  EXPECT_EQ(load("x Unary 1\n"), ErrorCode::BadCodeTable);
  EXPECT_EQ(load("x Unary 0 extra\n"), ErrorCode::BadCodeTable);
}

TEST(Overrides, FromEnvironment) {
  const auto path = std::filesystem::temp_directory_path() / "mdpattern-test-table.tbl";
  std::ofstream(path) << "frobnicate Ternary\n";
  ::setenv("MDPATTERN_CODE_TABLE", path.c_str(), 1);
  const RtxCodeTable t = RtxCodeTable::from_environment();
  ::unsetenv("MDPATTERN_CODE_TABLE");
  std::filesystem::remove(path);
  EXPECT_EQ(t.find("frobnicate")->rtx_class, RtxClass::Ternary);
  EXPECT_EQ(t.find("plus")->rtx_class, RtxClass::CommArith);
}

TEST(BuildTree, PlusWithTwoRegs) {
  const RtlExpr e = build_rtl_tree(parse_sexpr("(plus:SI (reg 1) (reg 2))"));
  ASSERT_TRUE(e.is_operator());
  EXPECT_EQ(e.code(), "plus");
  EXPECT_EQ(std::get<std::string>(e.mode()), "SI");
  ASSERT_EQ(e.operands().size(), 2u);
  for (const RtlExpr& c : e.operands()) {
    EXPECT_EQ(c.code(), "reg");
    EXPECT_FALSE(c.has_mode());
    EXPECT_EQ(cls(c.code()), RtxClass::Obj);
  }
}

TEST(BuildTree, MatchOperandPayloads) {
  const RtlExpr e = build_rtl_tree(parse_sexpr(R"((match_operand:SI 0 "s_register_operand" ""))"));
  EXPECT_EQ(e.code(), "match_operand");
  EXPECT_EQ(std::get<std::string>(e.mode()), "SI");
  ASSERT_EQ(e.operands().size(), 3u);
  for (const RtlExpr& c : e.operands()) EXPECT_TRUE(c.is_atom());
  EXPECT_EQ(e.operands()[0].atom_value().int_value(), 0);
  EXPECT_EQ(e.operands()[1].atom_value().text(), "s_register_operand");
  EXPECT_EQ(e.operands()[2].atom_value().text(), "");
}

TEST(BuildTree, ArmSetShape) {
  const RtlExpr e = build_rtl_tree(parse_sexpr(
      R"((set (match_operand:SI 0 "s_register_operand" "")
              (plus:SI (match_operand:SI 1 "s_register_operand" "")
                       (match_operand:SI 2 "reg_or_int_operand" ""))))"));
  ASSERT_EQ(e.code(), "set");
  ASSERT_EQ(e.operands().size(), 2u);
  EXPECT_EQ(e.operands()[0].code(), "match_operand");
  const RtlExpr& plus = e.operands()[1];
  EXPECT_EQ(plus.code(), "plus");
  ASSERT_EQ(plus.operands().size(), 2u);
  EXPECT_EQ(plus.operands()[0].code(), "match_operand");
  EXPECT_EQ(plus.operands()[1].code(), "match_operand");
}

TEST(BuildTree, IteratorModeAndCodeKeptVerbatim) {
  const RtlExpr e = build_rtl_tree(parse_sexpr("(any_extend:<MODE> (reg:GPR 0))"));
  EXPECT_EQ(e.code(), "any_extend");
  EXPECT_EQ(std::get<std::string>(e.mode()), "<MODE>");
  EXPECT_EQ(std::get<std::string>(e.operands()[0].mode()), "GPR");
}

TEST(BuildTree, ModeSplitAtFirstColon) {
  const RtlExpr e = build_rtl_tree(parse_sexpr("(foo:A:B)"));
  EXPECT_EQ(e.code(), "foo");
  EXPECT_EQ(std::get<std::string>(e.mode()), "A:B");
}

TEST(BuildTree, VectorGroups) {
  const RtlExpr e = build_rtl_tree(parse_sexpr("(unspec:SI [(reg 0) (reg 1)] 7)"));
  ASSERT_EQ(e.operands().size(), 2u);
  EXPECT_TRUE(e.operands()[0].is_vector());
  EXPECT_EQ(e.operands()[0].operands().size(), 2u);
  EXPECT_TRUE(e.operands()[1].is_atom());
}

TEST(BuildTree, Errors) {
  try {
    (void)build_rtl_tree(parse_sexpr("reg"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAList);
  }
  try {
    (void)build_rtl_tree(parse_sexpr("(set () (reg 0))"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyList);
  }
}

TEST(Height, Examples) {
  EXPECT_EQ(height(build_rtl_tree(parse_sexpr("(reg 1)"))), 1);
  EXPECT_EQ(height(build_rtl_tree(parse_sexpr("(pc)"))), 1);
  EXPECT_EQ(height(build_rtl_tree(parse_sexpr("(parallel [(set (reg 0) (reg 1)) (clobber (reg 2))])"))), 3);

  const RtlExpr pattern = RtlExpr::op(
      "set", {},
      {RtlExpr::hole({ParamKind::Arg, 0}),
       RtlExpr::op("plus", ParamName{ParamKind::Mode, 0},
                   {RtlExpr::hole({ParamKind::Arg, 1}), RtlExpr::hole({ParamKind::Arg, 2})})});
  EXPECT_EQ(height(pattern), 3);
  EXPECT_EQ(to_string(pattern), "(set $arg0 (plus:$mode0 $arg1 $arg2))");
}

// Longest chain of list nodes, counted directly on the S-expression.
namespace {
int sexpr_height(const SExpr& s) {
  int best = 0;
  for (const SExpr& c : s.items()) best = std::max(best, c.is_atom() ? 0 : sexpr_height(c));
  return s.is_list() ? 1 + best : std::max(best, 1);
}
}  // namespace

TEST(Property, TreeSerializationAndHeightOverCorpus) {
  const auto forms = read_md_file(std::filesystem::path(MDPATTERN_TEST_DATA_DIR) / "synth/synth.md");
  std::size_t checked = 0;
  for (const TopLevelForm& f : forms) {
    if (f.kind != FormKind::ConsideredTemplate) continue;
    const SExpr& v = extract_template_vector(f);
    for (const SExpr& element : v.items()) {
      if (!element.is_list()) continue;
      const RtlExpr tree = build_rtl_tree(element);
      EXPECT_EQ(to_string(tree), to_string(element)) << f.name;
      EXPECT_EQ(height(tree), sexpr_height(element)) << f.name;
      ++checked;
    }
    EXPECT_EQ(to_string(build_template_tree(v)), to_string(v));
  }
  EXPECT_GE(checked, 50u);
}

TEST(Property, HeightExceedsEveryOperatorChild) {
  const auto forms = read_md_file(std::filesystem::path(MDPATTERN_TEST_DATA_DIR) / "synth/synth.md");
  std::function<void(const RtlExpr&)> walk = [&](const RtlExpr& e) {
    EXPECT_GE(height(e), 1);
    for (const RtlExpr& c : e.operands()) {
      if (e.is_operator() && !c.is_atom()) EXPECT_GT(height(e), height(c));
      walk(c);
    }
  };
  for (const TopLevelForm& f : forms) {
    if (f.kind != FormKind::ConsideredTemplate) continue;
    for (const SExpr& element : extract_template_vector(f).items()) {
      if (element.is_list()) walk(build_rtl_tree(element));
    }
  }
}
