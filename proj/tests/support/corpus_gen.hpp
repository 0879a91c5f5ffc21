#pragma once

// Random MD corpora and a from-scratch abstraction used as an oracle.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gen {

struct Node {
  enum Kind { Op, Int, Str, Vec } kind = Op;
  std::string code;
  std::string mode;
  std::vector<Node> kids;
  std::string text;  // Int / Str payload
};

inline std::string render(const Node& n) {
  switch (n.kind) {
    case Node::Int: return n.text;
    case Node::Str: return "\"" + n.text + "\"";
    case Node::Vec: {
      std::string s = "[";
      for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? " " : "") + render(n.kids[i]);
      return s + "]";
    }
    case Node::Op: {
      std::string s = "(" + n.code + (n.mode.empty() ? "" : ":" + n.mode);
      for (const Node& k : n.kids) s += " " + render(k);
      return s + ")";
    }
  }
  return {};
}

// Codes the abstraction keeps. Written out by hand, not read from the library table.
inline const std::set<std::string>& kept_codes() {
  static const std::set<std::string> codes{
      "set", "clobber", "use", "parallel", "unspec", "unspec_volatile", "call", "return",
      "plus", "minus", "mult", "and", "ior", "xor", "compare", "ashift", "div",
      "neg", "not", "zero_extend", "sign_extend", "eq", "ne", "ltu", "gt",
      "if_then_else", "zero_extract", "post_inc", "pre_dec"};
  return codes;
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  // One template vector, one or two elements, depth <= max_depth.
  Node expression(int max_depth = 4) {
    Node v;
    v.kind = Node::Vec;
    const int n = pick(1, 2);
    for (int i = 0; i < n; ++i) v.kids.push_back(node(1, max_depth));
    return v;
  }

  std::vector<Node> corpus(int max_exprs = 20) {
    std::vector<Node> out;
    const int n = pick(1, max_exprs);
    for (int i = 0; i < n; ++i) out.push_back(expression());
    return out;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  template <class T>
  const T& choose(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string mode() { return choose<std::string>({"", "SI", "SI", "DI", "GPR"}); }

  Node op(std::string code, std::string mode, std::vector<Node> kids) {
    Node n;
    n.code = std::move(code);
    n.mode = std::move(mode);
    n.kids = std::move(kids);
    return n;
  }
  Node integer(int v) {
    Node n;
    n.kind = Node::Int;
    n.text = std::to_string(v);
    return n;
  }
  Node str(std::string s) {
    Node n;
    n.kind = Node::Str;
    n.text = std::move(s);
    return n;
  }

  Node leaf() {
    switch (pick(0, 5)) {
      case 0:
      case 1:
        return op("match_operand", choose<std::string>({"SI", "DI", "GPR"}),
                  {integer(pick(0, 2)), str(choose<std::string>({"register_operand", "arith_operand"}))});
      case 2: return op("match_dup", "", {integer(pick(0, 2))});
      case 3: return op("reg", choose<std::string>({"SI", "CC"}), {integer(pick(0, 1))});
      case 4: return op("const_int", "", {integer(pick(0, 1))});
      default: return choose<int>({0, 1}) ? op("pc", "", {}) : op("symbol_ref", "", {str("x")});
    }
  }

  Node node(int depth, int max_depth) {
    if (depth >= max_depth || pick(0, 99) < 35) return leaf();
    auto sub = [&] { return node(depth + 1, max_depth); };
    switch (pick(0, 14)) {
      case 0: return op("set", "", {sub(), sub()});
      case 1: return op(choose<std::string>({"clobber", "use"}), "", {sub()});
      case 2:
      case 3: return op(choose<std::string>({"plus", "minus", "mult", "and", "ior", "compare"}), mode(), {sub(), sub()});
      case 4: return op(choose<std::string>({"neg", "not", "zero_extend", "sign_extend"}), mode(), {sub()});
      case 5: return op(choose<std::string>({"eq", "ne", "ltu"}), mode(), {sub(), sub()});
      case 6: return op("if_then_else", mode(), {sub(), sub(), sub()});
      case 7: return op("zero_extract", mode(), {sub(), sub(), sub()});
      case 8: return op("post_inc", mode(), {sub()});
      case 9: {
        Node v;
        v.kind = Node::Vec;
        for (int i = pick(1, 2); i > 0; --i) v.kids.push_back(sub());
        return op("unspec", mode(), {v, integer(pick(0, 3))});
      }
      case 10: {
        Node v;
        v.kind = Node::Vec;
        for (int i = pick(1, 2); i > 0; --i) v.kids.push_back(sub());
        return op("parallel", "", {v});
      }
      case 11: return op("mem", mode(), {sub()});
      case 12: return op("subreg", "SI", {sub(), integer(0)});
      case 13: return op("frobnicate", "", {sub()});
      default: return op("set", "", {sub(), sub()});
    }
  }

  std::mt19937_64 rng_;
};

// Expected pattern text and height, built without the library.
struct Abstracted {
  std::string text;
  int height = 1;
};

class Abstractor {
 public:
  Abstracted run(const Node& templ) {
    modes_.clear();
    args_.clear();
    int h = 0;
    std::string s = "[";
    for (std::size_t i = 0; i < templ.kids.size(); ++i) {
      auto [t, kh] = walk(templ.kids[i]);
      s += (i ? " " : "") + t;
      h = std::max(h, kh);
    }
    return {s + "]", std::max(1, h)};
  }

 private:
  std::string arg(const std::string& replaced) {
    auto [it, fresh] = args_.try_emplace(replaced, args_.size());
    return "$arg" + std::to_string(it->second);
  }
  std::string mode(const std::string& m) {
    auto [it, fresh] = modes_.try_emplace(m, modes_.size());
    return "$mode" + std::to_string(it->second);
  }

  // Returns text and contribution to the parent's height.
  std::pair<std::string, int> walk(const Node& n) {
    if (n.kind == Node::Int || n.kind == Node::Str) return {arg(render(n)), 0};
    if (n.kind == Node::Vec) {
      std::string s = "[";
      int h = 0;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        auto [t, kh] = walk(n.kids[i]);
        s += (i ? " " : "") + t;
        h = std::max(h, kh);
      }
      return {s + "]", h};
    }
    if (!kept_codes().count(n.code)) return {arg(render(n)), 1};
    std::string s = "(" + n.code;
    if (!n.mode.empty()) s += ":" + mode(n.mode);
    int h = 0;
    for (const Node& k : n.kids) {
      auto [t, kh] = walk(k);
      s += " " + t;
      h = std::max(h, kh);
    }
    return {s + ")", 1 + h};
  }

  std::map<std::string, std::size_t> modes_;
  std::map<std::string, std::size_t> args_;
};

inline std::string to_md(const std::vector<Node>& exprs) {
  std::string md;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    md += "(define_insn \"g" + std::to_string(i) + "\"\n  " + render(exprs[i]) + "\n  \"\"\n  \"nop\")\n\n";
  }
  return md;
}

// Unique (height, text) pairs with counts, by pairwise comparison.
struct BruteEntry {
  Abstracted pattern;
  std::uint64_t count = 0;
};

inline std::vector<BruteEntry> brute_force_unique(const std::vector<Abstracted>& all) {
  std::vector<BruteEntry> unique;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (all[j].text == all[i].text && all[j].height == all[i].height) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    BruteEntry e{all[i], 0};
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (all[j].text == all[i].text && all[j].height == all[i].height) ++e.count;
    }
    unique.push_back(e);
  }
  return unique;
}

}  // namespace gen
