#include "thfsg/grammar.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace thfsg {

AnnotationSet make_annotation_set(std::vector<Schema> schemata) {
  std::sort(schemata.begin(), schemata.end());
  schemata.erase(std::unique(schemata.begin(), schemata.end()),
                 schemata.end());
  return schemata;
}

namespace {

int count_arrows(const AnnotationSet& as) {
  int n = 0;
  for (const auto& s : as)
    if (std::holds_alternative<ArrowSchema>(s)) ++n;
  return n;
}

bool value_paths_nonempty(const AnnotationSet& as) {
  for (const auto& s : as)
    if (const auto* vs = std::get_if<ValueSchema>(&s))
      if (vs->path.empty()) return false;
  return true;
}

}  // namespace

std::vector<std::string> validate(const Grammar& g) {
  std::vector<std::string> out;
  auto complain = [&](const std::string& msg) { out.push_back(msg); };

  if (!g.categories.count(g.start))
    complain("start symbol '" + g.start + "' is not a declared category");
  for (const auto& c : g.categories)
    if (g.terminals.count(c))
      complain("symbol '" + c + "' is both a category and a terminal");

  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const auto& p = g.productions[i];
    std::string where = "production " + std::to_string(i + 1) + " (" + p.lhs + ")";
    if (p.daughters.empty()) complain(where + ": needs at least one daughter");
    if (!g.categories.count(p.lhs))
      complain(where + ": undeclared category '" + p.lhs + "'");
    for (const auto& d : p.daughters) {
      if (!g.categories.count(d.category))
        complain(where + ": undeclared category '" + d.category + "'");
      int arrows = count_arrows(d.annotations);
      if (arrows != 1)
        complain(where + ": daughter '" + d.category + "' has " +
                 std::to_string(arrows) + " arrow schemata, needs exactly one");
      if (!value_paths_nonempty(d.annotations))
        complain(where + ": daughter '" + d.category +
                 "' has a value schema with an empty path");
    }
  }
  for (std::size_t i = 0; i < g.lexicon.size(); ++i) {
    const auto& l = g.lexicon[i];
    std::string where = "lexicon " + std::to_string(i + 1) + " (" + l.lhs + ")";
    if (!g.categories.count(l.lhs))
      complain(where + ": undeclared category '" + l.lhs + "'");
    if (!l.terminal.empty() && !g.terminals.count(l.terminal))
      complain(where + ": undeclared terminal '" + l.terminal + "'");
    if (count_arrows(l.annotations) != 0)
      complain(where + ": lexicon annotations may not contain arrow schemata");
    if (!value_paths_nonempty(l.annotations))
      complain(where + ": value schema with an empty path");
  }
  return out;
}

bool is_normal_form(const Grammar& g) {
  for (const auto& p : g.productions) {
    if (p.daughters.size() != 2) return false;
    for (const auto& d : p.daughters)
      for (const auto& s : d.annotations)
        if (const auto* as = std::get_if<ArrowSchema>(&s))
          if (as->path.size() > 1) return false;
  }
  return true;
}

std::set<std::string> attribute_symbols(const Grammar& g) {
  std::set<std::string> attrs;
  auto collect = [&](const AnnotationSet& as) {
    for (const auto& s : as) {
      const Path& p = std::holds_alternative<ArrowSchema>(s)
                          ? std::get<ArrowSchema>(s).path
                          : std::get<ValueSchema>(s).path;
      attrs.insert(p.begin(), p.end());
    }
  };
  for (const auto& p : g.productions)
    for (const auto& d : p.daughters) collect(d.annotations);
  for (const auto& l : g.lexicon) collect(l.annotations);
  return attrs;
}

std::set<std::string> used_symbols(const Grammar& g) {
  std::set<std::string> used(g.categories.begin(), g.categories.end());
  used.insert(g.terminals.begin(), g.terminals.end());
  used.insert(g.start);
  return used;
}

std::string fresh_symbol(std::set<std::string>& used, const std::string& base) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "!" + std::to_string(k);
    if (!used.count(candidate)) {
      used.insert(candidate);
      return candidate;
    }
  }
}

Grammar normalize(const Grammar& g) {
  {
    auto diags = validate(g);
    if (!diags.empty())
      throw std::invalid_argument("normalize: invalid grammar: " + diags.front());
  }

  Grammar out = g;
  std::set<std::string> used = used_symbols(g);

  // Step one: shorten arrow paths.  A daughter carrying ^ a1 .. an = _ with
  // n > 1 is replaced by a fresh category chained down to the original one
  // attribute at a time.
  std::vector<ProductionRule> rules = std::move(out.productions);
  std::vector<ProductionRule> chained;
  for (auto& rule : rules) {
    for (auto& d : rule.daughters) {
      const ArrowSchema* arrow = nullptr;
      for (const auto& s : d.annotations)
        if (const auto* as = std::get_if<ArrowSchema>(&s)) arrow = as;
      if (!arrow || arrow->path.size() <= 1) continue;
      Path path = arrow->path;
      std::string original = d.category;
      std::vector<Schema> rest;
      for (const auto& s : d.annotations)
        if (!std::holds_alternative<ArrowSchema>(s)) rest.push_back(s);
      rest.push_back(ArrowSchema{{path.front()}});
      std::string top = fresh_symbol(used, original);
      out.categories.insert(top);
      d.category = top;
      d.annotations = make_annotation_set(std::move(rest));
      std::string prev = top;
      for (std::size_t j = 1; j < path.size(); ++j) {
        std::string next = (j + 1 == path.size()) ? original
                                                  : fresh_symbol(used, original);
        if (j + 1 != path.size()) out.categories.insert(next);
        chained.push_back(ProductionRule{
            prev,
            {Daughter{next, make_annotation_set({ArrowSchema{{path[j]}}})}}});
        prev = next;
      }
    }
  }
  rules.insert(rules.end(), chained.begin(), chained.end());

  // Step two: right-binarize rules with more than two daughters.
  std::vector<ProductionRule> binary;
  for (auto& rule : rules) {
    if (rule.daughters.size() <= 2) {
      binary.push_back(std::move(rule));
      continue;
    }
    std::size_t m = rule.daughters.size();
    std::vector<std::string> fresh;
    for (std::size_t i = 2; i <= m - 1; ++i) {
      std::string c = fresh_symbol(used, rule.lhs);
      out.categories.insert(c);
      fresh.push_back(c);
    }
    AnnotationSet pass = make_annotation_set({ArrowSchema{{}}});
    binary.push_back(ProductionRule{
        rule.lhs, {rule.daughters[0], Daughter{fresh[0], pass}}});
    for (std::size_t i = 0; i + 1 < fresh.size(); ++i) {
      binary.push_back(ProductionRule{
          fresh[i], {rule.daughters[i + 1], Daughter{fresh[i + 1], pass}}});
    }
    binary.push_back(ProductionRule{
        fresh.back(), {rule.daughters[m - 2], rule.daughters[m - 1]}});
  }

  // Step three: pad unary rules with a shared fresh epsilon category.
  std::string eps_cat;
  for (auto& rule : binary) {
    if (rule.daughters.size() != 1) continue;
    if (eps_cat.empty()) {
      eps_cat = fresh_symbol(used, "eps");
      out.categories.insert(eps_cat);
      out.lexicon.push_back(LexiconRule{eps_cat, "", {}});
    }
    rule.daughters.push_back(
        Daughter{eps_cat, make_annotation_set({ArrowSchema{{}}})});
  }

  out.productions = std::move(binary);
  return out;
}

std::string render_schema(const Schema& s) {
  std::ostringstream out;
  out << "^";
  const Path& p = std::holds_alternative<ArrowSchema>(s)
                      ? std::get<ArrowSchema>(s).path
                      : std::get<ValueSchema>(s).path;
  for (const auto& a : p) out << " " << a;
  if (std::holds_alternative<ArrowSchema>(s))
    out << " = _";
  else
    out << " = #" << std::get<ValueSchema>(s).value;
  return out.str();
}

std::string render_annotations(const AnnotationSet& as) {
  std::string out = "{";
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (i) out += ", ";
    out += render_schema(as[i]);
  }
  out += "}";
  return out;
}

}  // namespace thfsg
