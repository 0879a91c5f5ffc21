#include "mdpattern/md_reader.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mdpattern {

namespace fs = std::filesystem;

std::string_view form_kind_name(FormKind kind) {
  switch (kind) {
    case FormKind::ConsideredTemplate: return "considered";
    case FormKind::IteratorDef: return "iterator";
    case FormKind::Include: return "include";
    case FormKind::Ignored: return "ignored";
  }
  return "ignored";
}

std::vector<std::string> ReaderOptions::default_considered_heads() {
  return {"define_insn", "define_expand", "define_insn_and_split", "define_split"};
}

FormKind classify_head(std::string_view head, const ReaderOptions& options) {
  if (std::find(options.considered_heads.begin(), options.considered_heads.end(), head) !=
      options.considered_heads.end()) {
    return FormKind::ConsideredTemplate;
  }
  if (head == "define_mode_iterator" || head == "define_code_iterator" ||
      head == "define_mode_attr" || head == "define_code_attr") {
    return FormKind::IteratorDef;
  }
  if (head == "include") return FormKind::Include;
  return FormKind::Ignored;
}

std::vector<TopLevelForm> parse_md(std::string_view source, std::string_view origin,
                                   const ReaderOptions& options) {
  std::vector<TopLevelForm> forms;
  for (SExpr& datum : parse_sexprs(source, origin)) {
    if (!datum.is_list()) {
      throw Error(ErrorCode::UnexpectedToken,
                  "top-level item must be a parenthesized form, found '" + to_string(datum) + "'",
                  datum.location());
    }
    TopLevelForm form;
    form.origin = datum.location();
    const auto& items = datum.items();
    if (!items.empty() && items.front().is_symbol()) form.head = items.front().text();
    form.kind = form.head.empty() ? FormKind::Ignored : classify_head(form.head, options);
    if (items.size() > 1 && (items[1].is_string() || items[1].is_symbol())) {
      form.name = items[1].text();
    }
    form.body = std::move(datum);
    forms.push_back(std::move(form));
  }
  return forms;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

fs::path identity_of(const fs::path& p) {
  std::error_code ec;
  fs::path canonical = fs::weakly_canonical(p, ec);
  return ec ? p.lexically_normal() : canonical;
}

void splice(std::vector<TopLevelForm>& out, std::vector<TopLevelForm> forms,
            const fs::path& base_dir, const ReaderOptions& options, std::vector<fs::path>& chain) {
  for (TopLevelForm& form : forms) {
    if (form.kind != FormKind::Include) {
      out.push_back(std::move(form));
      continue;
    }
    const auto& items = form.body.items();
    if (items.size() != 2 || !items[1].is_string()) {
      throw Error(ErrorCode::UnexpectedToken, "include expects one string argument", form.origin);
    }
    fs::path target = items[1].text();
    if (target.is_relative()) {
      fs::path local = form.origin.file.empty() ? fs::path{} : fs::path(form.origin.file).parent_path();
      fs::path candidate = local / target;
      target = (!local.empty() && fs::exists(candidate)) ? candidate : base_dir / target;
    }
    if (!fs::exists(target)) {
      throw Error(ErrorCode::MissingInclude, target.string(), form.origin);
    }
    const fs::path id = identity_of(target);
    if (std::find(chain.begin(), chain.end(), id) != chain.end()) {
      std::string trail;
      for (const fs::path& p : chain) trail += p.string() + " -> ";
      trail += id.string();
      throw Error(ErrorCode::IncludeCycle, trail, form.origin);
    }
    chain.push_back(id);
    splice(out, parse_md(read_text_file(target), target.string(), options), base_dir, options,
           chain);
    chain.pop_back();
  }
}

}  // namespace

std::vector<TopLevelForm> resolve_includes(std::vector<TopLevelForm> forms,
                                           const fs::path& base_dir, bool enabled,
                                           const ReaderOptions& options) {
  if (!enabled) {
    for (TopLevelForm& form : forms) {
      if (form.kind == FormKind::Include) form.kind = FormKind::Ignored;
    }
    return forms;
  }
  std::vector<fs::path> chain;
  if (!forms.empty() && !forms.front().origin.file.empty() &&
      fs::exists(forms.front().origin.file)) {
    chain.push_back(identity_of(forms.front().origin.file));
  }
  std::vector<TopLevelForm> out;
  out.reserve(forms.size());
  splice(out, std::move(forms), base_dir, options, chain);
  return out;
}

std::vector<TopLevelForm> read_md_file(const fs::path& path, const ReaderOptions& options) {
  auto forms = parse_md(read_text_file(path), path.string(), options);
  if (!options.resolve_includes) return resolve_includes(std::move(forms), {}, false, options);

  std::vector<fs::path> chain{identity_of(path)};
  std::vector<TopLevelForm> out;
  splice(out, std::move(forms), path.parent_path(), options, chain);
  return out;
}

const SExpr& extract_template_vector(const TopLevelForm& form) {
  for (const SExpr& item : form.body.items()) {
    if (item.is_vector()) return item;
  }
  throw Error(ErrorCode::MissingTemplateVector,
              form.head + (form.name.empty() ? std::string() : " \"" + form.name + "\"") +
                  " has no RTL template vector",
              form.origin);
}

std::optional<IteratorDef> iterator_definition(const TopLevelForm& form) {
  if (form.kind != FormKind::IteratorDef) return std::nullopt;
  const auto& items = form.body.items();
  if (items.size() < 3 || !items[1].is_symbol()) return std::nullopt;
  IteratorDef def;
  def.head = form.head;
  def.name = items[1].text();
  def.form = form.body;
  if (items[2].is_vector()) {
    for (const SExpr& member : items[2].items()) {
      if (member.is_symbol()) {
        def.members.push_back(member.text());
      } else if (member.is_list() && !member.items().empty() && member.items().front().is_symbol()) {
        def.members.push_back(member.items().front().text());
      }
    }
  }
  return def;
}

}  // namespace mdpattern
