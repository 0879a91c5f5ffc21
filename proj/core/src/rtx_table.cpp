#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "mdpattern/rtl.hpp"

namespace mdpattern {

namespace {

struct ClassSpelling {
  RtxClass cls;
  std::string_view name;
  std::string_view snake;
};

constexpr ClassSpelling kClassNames[] = {
    {RtxClass::Obj, "Obj", "obj"},
    {RtxClass::ConstObj, "ConstObj", "const_obj"},
    {RtxClass::Compare, "Compare", "compare"},
    {RtxClass::CommCompare, "CommCompare", "comm_compare"},
    {RtxClass::Unary, "Unary", "unary"},
    {RtxClass::CommArith, "CommArith", "comm_arith"},
    {RtxClass::BinArith, "BinArith", "bin_arith"},
    {RtxClass::BitfieldOps, "BitfieldOps", "bitfield_ops"},
    {RtxClass::Ternary, "Ternary", "ternary"},
    {RtxClass::Insn, "Insn", "insn"},
    {RtxClass::Match, "Match", "match"},
    {RtxClass::Autoinc, "Autoinc", "autoinc"},
    {RtxClass::Extra, "Extra", "extra"},
};

struct BuiltinCode {
  std::string_view code;
  RtxClass cls;
  bool side_effect = false;
};

// Codes as they appear in MD templates, classed after GCC's rtl.def. symbol_ref
// and label_ref are treated as objects: both name a memory location.
constexpr BuiltinCode kBuiltinCodes[] = {
    // objects
    {"reg", RtxClass::Obj},
    {"mem", RtxClass::Obj},
    {"scratch", RtxClass::Obj},
    {"pc", RtxClass::Obj},
    {"cc0", RtxClass::Obj},
    {"symbol_ref", RtxClass::Obj},
    {"label_ref", RtxClass::Obj},
    {"concat", RtxClass::Obj},
    {"concatn", RtxClass::Obj},
    {"lo_sum", RtxClass::Obj},
    {"value", RtxClass::Obj},
    {"debug_expr", RtxClass::Obj},
    {"debug_implicit_ptr", RtxClass::Obj},
    {"entry_value", RtxClass::Obj},
    // constants
    {"const_int", RtxClass::ConstObj},
    {"const_double", RtxClass::ConstObj},
    {"const_fixed", RtxClass::ConstObj},
    {"const_vector", RtxClass::ConstObj},
    {"const_string", RtxClass::ConstObj},
    {"const", RtxClass::ConstObj},
    {"high", RtxClass::ConstObj},
    // non-commutative comparisons
    {"ge", RtxClass::Compare},
    {"gt", RtxClass::Compare},
    {"le", RtxClass::Compare},
    {"lt", RtxClass::Compare},
    {"geu", RtxClass::Compare},
    {"gtu", RtxClass::Compare},
    {"leu", RtxClass::Compare},
    {"ltu", RtxClass::Compare},
    {"unge", RtxClass::Compare},
    {"ungt", RtxClass::Compare},
    {"unle", RtxClass::Compare},
    {"unlt", RtxClass::Compare},
    // commutative comparisons
    {"eq", RtxClass::CommCompare},
    {"ne", RtxClass::CommCompare},
    {"ordered", RtxClass::CommCompare},
    {"unordered", RtxClass::CommCompare},
    {"uneq", RtxClass::CommCompare},
    {"ltgt", RtxClass::CommCompare},
    // unary
    {"neg", RtxClass::Unary},
    {"not", RtxClass::Unary},
    {"abs", RtxClass::Unary},
    {"sqrt", RtxClass::Unary},
    {"ffs", RtxClass::Unary},
    {"clz", RtxClass::Unary},
    {"ctz", RtxClass::Unary},
    {"popcount", RtxClass::Unary},
    {"parity", RtxClass::Unary},
    {"bswap", RtxClass::Unary},
    {"sign_extend", RtxClass::Unary},
    {"zero_extend", RtxClass::Unary},
    {"truncate", RtxClass::Unary},
    {"float_extend", RtxClass::Unary},
    {"float_truncate", RtxClass::Unary},
    {"float", RtxClass::Unary},
    {"fix", RtxClass::Unary},
    {"unsigned_float", RtxClass::Unary},
    {"unsigned_fix", RtxClass::Unary},
    {"fract_convert", RtxClass::Unary},
    {"unsigned_fract_convert", RtxClass::Unary},
    {"sat_fract", RtxClass::Unary},
    {"unsigned_sat_fract", RtxClass::Unary},
    {"ss_neg", RtxClass::Unary},
    {"us_neg", RtxClass::Unary},
    {"ss_abs", RtxClass::Unary},
    {"ss_truncate", RtxClass::Unary},
    {"us_truncate", RtxClass::Unary},
    {"vec_duplicate", RtxClass::Unary},
    // commutative arithmetic
    {"plus", RtxClass::CommArith},
    {"mult", RtxClass::CommArith},
    {"and", RtxClass::CommArith},
    {"ior", RtxClass::CommArith},
    {"xor", RtxClass::CommArith},
    {"smin", RtxClass::CommArith},
    {"smax", RtxClass::CommArith},
    {"umin", RtxClass::CommArith},
    {"umax", RtxClass::CommArith},
    {"ss_plus", RtxClass::CommArith},
    {"us_plus", RtxClass::CommArith},
    {"ss_mult", RtxClass::CommArith},
    {"us_mult", RtxClass::CommArith},
    // non-commutative arithmetic
    {"minus", RtxClass::BinArith},
    {"div", RtxClass::BinArith},
    {"udiv", RtxClass::BinArith},
    {"mod", RtxClass::BinArith},
    {"umod", RtxClass::BinArith},
    {"ashift", RtxClass::BinArith},
    {"ashiftrt", RtxClass::BinArith},
    {"lshiftrt", RtxClass::BinArith},
    {"rotate", RtxClass::BinArith},
    {"rotatert", RtxClass::BinArith},
    {"compare", RtxClass::BinArith},
    {"ss_minus", RtxClass::BinArith},
    {"us_minus", RtxClass::BinArith},
    {"ss_div", RtxClass::BinArith},
    {"us_div", RtxClass::BinArith},
    {"ss_ashift", RtxClass::BinArith},
    {"us_ashift", RtxClass::BinArith},
    {"vec_select", RtxClass::BinArith},
    {"vec_concat", RtxClass::BinArith},
    // bit-field operations
    {"zero_extract", RtxClass::BitfieldOps},
    {"sign_extract", RtxClass::BitfieldOps},
    // three-input operations
    {"if_then_else", RtxClass::Ternary},
    {"vec_merge", RtxClass::Ternary},
    {"fma", RtxClass::Ternary},
    // whole instructions
    {"insn", RtxClass::Insn},
    {"jump_insn", RtxClass::Insn},
    {"call_insn", RtxClass::Insn},
    {"debug_insn", RtxClass::Insn},
    // machine-description matchers
    {"match_operand", RtxClass::Match},
    {"match_scratch", RtxClass::Match},
    {"match_dup", RtxClass::Match},
    {"match_operator", RtxClass::Match},
    {"match_parallel", RtxClass::Match},
    {"match_op_dup", RtxClass::Match},
    {"match_par_dup", RtxClass::Match},
    {"match_code", RtxClass::Match},
    {"match_test", RtxClass::Match},
    {"address", RtxClass::Match},
    // auto-increment addressing
    {"pre_dec", RtxClass::Autoinc},
    {"pre_inc", RtxClass::Autoinc},
    {"post_dec", RtxClass::Autoinc},
    {"post_inc", RtxClass::Autoinc},
    {"pre_modify", RtxClass::Autoinc},
    {"post_modify", RtxClass::Autoinc},
    // side effects
    {"set", RtxClass::Extra, true},
    {"return", RtxClass::Extra, true},
    {"call", RtxClass::Extra, true},
    {"clobber", RtxClass::Extra, true},
    {"use", RtxClass::Extra, true},
    {"parallel", RtxClass::Extra, true},
    {"cond_exec", RtxClass::Extra, true},
    {"sequence", RtxClass::Extra, true},
    {"asm_input", RtxClass::Extra, true},
    {"unspec", RtxClass::Extra, true},
    {"unspec_volatile", RtxClass::Extra, true},
    {"addr_vec", RtxClass::Extra, true},
    {"addr_diff_vec", RtxClass::Extra, true},
    // everything else
    {"subreg", RtxClass::Extra},
    {"strict_low_part", RtxClass::Extra},
    {"note", RtxClass::Extra},
    {"barrier", RtxClass::Extra},
    {"code_label", RtxClass::Extra},
    {"expr_list", RtxClass::Extra},
    {"insn_list", RtxClass::Extra},
    {"asm_operands", RtxClass::Extra},
    {"prefetch", RtxClass::Extra},
    {"trap_if", RtxClass::Extra},
    {"eh_return", RtxClass::Extra},
    {"var_location", RtxClass::Extra},
    {"unknown", RtxClass::Extra},
    {"set_attr", RtxClass::Extra},
    {"set_attr_alternative", RtxClass::Extra},
    {"eq_attr", RtxClass::Extra},
    {"attr", RtxClass::Extra},
    {"attr_flag", RtxClass::Extra},
    {"cond", RtxClass::Extra},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view rtx_class_name(RtxClass cls) {
  for (const auto& spelling : kClassNames) {
    if (spelling.cls == cls) return spelling.name;
  }
  return "Extra";
}

std::optional<RtxClass> parse_rtx_class(std::string_view text) {
  std::string lowered;
  if (text.starts_with("RTX_") || text.starts_with("rtx_")) text.remove_prefix(4);
  for (char c : text) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& spelling : kClassNames) {
    std::string name_lower;
    for (char c : spelling.name) name_lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lowered == spelling.snake || lowered == name_lower) return spelling.cls;
  }
  return std::nullopt;
}

RtxCodeTable RtxCodeTable::builtin() {
  RtxCodeTable table;
  for (const auto& entry : kBuiltinCodes) {
    table.entries_.emplace(std::string(entry.code), RtxCodeInfo{entry.cls, entry.side_effect});
  }
  return table;
}

RtxCodeTable RtxCodeTable::from_environment() {
  RtxCodeTable table = builtin();
  if (const char* path = std::getenv("MDPATTERN_CODE_TABLE"); path != nullptr && *path != '\0') {
    table.load_overrides_file(path);
  }
  return table;
}

void RtxCodeTable::set(std::string code, RtxCodeInfo info) {
  entries_.insert_or_assign(std::move(code), info);
}

std::optional<RtxCodeInfo> RtxCodeTable::find(std::string_view code) const {
  auto it = entries_.find(code);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void RtxCodeTable::load_overrides(std::istream& in, std::string_view origin) {
  std::string line;
  std::uint32_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;

    const SourceLocation where{std::string(origin), line_no, 1};
    std::istringstream fields{std::string(view)};
    std::string code, cls_text, flag_text, extra;
    if (!(fields >> code >> cls_text)) {
      throw Error(ErrorCode::BadCodeTable, "expected 'code class [side_effect]'", where);
    }
    fields >> flag_text;
    if (fields >> extra) throw Error(ErrorCode::BadCodeTable, "trailing field '" + extra + "'", where);

    auto cls = parse_rtx_class(cls_text);
    if (!cls) throw Error(ErrorCode::BadCodeTable, "unknown class '" + cls_text + "'", where);
    bool side_effect = false;
    if (flag_text == "1" || flag_text == "yes" || flag_text == "true") {
      side_effect = true;
    } else if (!(flag_text.empty() || flag_text == "0" || flag_text == "no" || flag_text == "false")) {
      throw Error(ErrorCode::BadCodeTable, "bad side-effect flag '" + flag_text + "'", where);
    }
    if (side_effect && *cls != RtxClass::Extra) {
      throw Error(ErrorCode::BadCodeTable, "side-effect code '" + code + "' must be classed Extra",
                  where);
    }
    set(std::move(code), RtxCodeInfo{*cls, side_effect});
  }
}

void RtxCodeTable::load_overrides_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open code table " + path);
  load_overrides(in, path);
}

CodeLookup rtx_class(std::string_view code, const RtxCodeTable& table,
                     const std::set<std::string, std::less<>>& code_iterators) {
  if (code_iterators.contains(code)) {
    return CodeLookup{CodeStatus::IteratorAlias, RtxClass::Extra, false};
  }
  if (auto info = table.find(code)) {
    return CodeLookup{CodeStatus::Known, info->rtx_class, info->side_effect};
  }
  return CodeLookup{};
}

bool is_pattern_operator(std::string_view code, const CodeContext& ctx) {
  const CodeLookup lookup = rtx_class(code, *ctx.table, ctx.code_iterators);
  switch (lookup.status) {
    case CodeStatus::IteratorAlias: return true;
    case CodeStatus::Unknown: return false;
    case CodeStatus::Known: break;
  }
  if (lookup.side_effect) return true;
  switch (lookup.rtx_class) {
    case RtxClass::Compare:
    case RtxClass::CommCompare:
    case RtxClass::Unary:
    case RtxClass::CommArith:
    case RtxClass::BitfieldOps:
    case RtxClass::Ternary:
    case RtxClass::Autoinc: return true;
    case RtxClass::BinArith: return ctx.policy.bin_arith_in_patterns;
    default: return false;
  }
}

}  // namespace mdpattern
