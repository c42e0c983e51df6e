#include "thfsg/cstructure.hpp"

#include <algorithm>
#include <sstream>

namespace thfsg {

TreeAddress TreeAddress::parent() const {
  TreeAddress p = *this;
  p.digits.pop_back();
  return p;
}

TreeAddress TreeAddress::child(std::uint32_t i) const {
  TreeAddress c = *this;
  c.digits.push_back(i);
  return c;
}

bool TreeAddress::is_prefix_of(const TreeAddress& other) const {
  if (digits.size() > other.digits.size()) return false;
  return std::equal(digits.begin(), digits.end(), other.digits.begin());
}

std::string TreeAddress::to_string() const {
  bool dotted = std::any_of(digits.begin(), digits.end(),
                            [](std::uint32_t d) { return d > 9; });
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (dotted && i) out += '.';
    out += std::to_string(digits[i]);
  }
  return out;
}

int lex_compare(const TreeAddress& a, const TreeAddress& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

std::vector<std::string> terminal_string(const CStructure& cs) {
  std::vector<std::string> tokens;
  for (const auto& [addr, label] : cs.labels) {
    if (label.kind == LabelKind::Terminal) tokens.push_back(label.symbol);
  }
  return tokens;
}

namespace {

std::uint32_t out_degree(const CStructure& cs, const TreeAddress& addr) {
  std::uint32_t d = 0;
  while (cs.labels.count(addr.child(d + 1))) ++d;
  return d;
}

}  // namespace

std::vector<std::string> validate_cstructure(const CStructure& cs,
                                             const Grammar& g) {
  std::vector<std::string> out;
  auto complain = [&](const TreeAddress& addr, const std::string& msg) {
    out.push_back("node '" + addr.to_string() + "': " + msg);
  };
  if (cs.labels.empty()) {
    out.push_back("empty tree domain");
    return out;
  }
  // Domain closure and annotation domain.
  for (const auto& [addr, label] : cs.labels) {
    if (!addr.is_root()) {
      if (!cs.labels.count(addr.parent()))
        complain(addr, "prefix missing from tree domain");
      TreeAddress left = addr.parent().child(addr.digits.back() - 1);
      if (addr.digits.back() > 1 && !cs.labels.count(left))
        complain(addr, "left sibling missing from tree domain");
      if (addr.digits.back() == 0) complain(addr, "child numbers start at one");
      if (!cs.annotations.count(addr))
        complain(addr, "missing annotation set");
    }
  }
  if (cs.annotations.count(TreeAddress{}))
    out.push_back("node '': the root carries no annotation set");
  for (const auto& [addr, annot] : cs.annotations)
    if (!cs.labels.count(addr)) complain(addr, "annotation outside the domain");

  // Labels.
  auto root = cs.labels.find(TreeAddress{});
  if (root != cs.labels.end() &&
      (root->second.kind != LabelKind::Category ||
       root->second.symbol != g.start))
    out.push_back("node '': root must carry the start symbol");
  for (const auto& [addr, label] : cs.labels) {
    bool leaf = out_degree(cs, addr) == 0;
    if (leaf && label.kind == LabelKind::Category)
      complain(addr, "terminal nodes carry terminal or empty labels");
    if (!leaf && label.kind != LabelKind::Category)
      complain(addr, "internal nodes carry category labels");
    if (label.kind == LabelKind::Terminal && !g.terminals.count(label.symbol))
      complain(addr, "undeclared terminal '" + label.symbol + "'");
    if (label.kind == LabelKind::Category && !g.categories.count(label.symbol))
      complain(addr, "undeclared category '" + label.symbol + "'");
  }
  if (!out.empty()) return out;

  // Rule matching at internal nodes.
  for (const auto& [addr, label] : cs.labels) {
    std::uint32_t m = out_degree(cs, addr);
    if (m == 0) continue;
    const auto& first = cs.labels.at(addr.child(1));
    if (m == 1 && first.kind != LabelKind::Category) {
      // Lexicon expansion.
      std::string term = first.kind == LabelKind::Terminal ? first.symbol : "";
      const AnnotationSet& annot = cs.annotations.at(addr.child(1));
      bool matched = false;
      for (const auto& l : g.lexicon)
        if (l.lhs == label.symbol && l.terminal == term &&
            l.annotations == annot)
          matched = true;
      if (!matched) complain(addr, "no lexicon rule matches this expansion");
      continue;
    }
    ProductionRule shape{label.symbol, {}};
    bool all_categories = true;
    for (std::uint32_t i = 1; i <= m; ++i) {
      const auto& child = cs.labels.at(addr.child(i));
      if (child.kind != LabelKind::Category) all_categories = false;
      shape.daughters.push_back(
          Daughter{child.symbol, cs.annotations.at(addr.child(i))});
    }
    if (!all_categories) {
      complain(addr, "production daughters must be categories");
      continue;
    }
    bool matched = false;
    for (const auto& p : g.productions)
      if (p == shape) matched = true;
    if (!matched) complain(addr, "no production rule matches this expansion");
  }
  return out;
}

EquationSet instantiate(const CStructure& cs) {
  EquationSet eqs;
  for (const auto& [addr, annot] : cs.annotations) {
    std::string self = addr.to_string();
    std::string mother = addr.parent().to_string();
    for (const auto& s : annot) {
      if (const auto* as = std::get_if<ArrowSchema>(&s))
        eqs.push_back(PathEquation{mother, as->path, self, {}});
      else {
        const auto& vs = std::get<ValueSchema>(s);
        eqs.push_back(ValueEquation{mother, vs.path, vs.value});
      }
    }
  }
  return eqs;
}

DescribeResult generated_fs(const CStructure& cs) {
  return describe(instantiate(cs));
}

std::string dump_tree(const CStructure& cs) {
  std::ostringstream out;
  for (const auto& [addr, label] : cs.labels) {
    out << addr.to_string() << " ";
    switch (label.kind) {
      case LabelKind::Category: out << label.symbol; break;
      case LabelKind::Terminal: out << '"' << label.symbol << '"'; break;
      case LabelKind::Empty: out << "\"\""; break;
    }
    out << " ";
    auto it = cs.annotations.find(addr);
    out << render_annotations(it == cs.annotations.end() ? AnnotationSet{}
                                                         : it->second);
    out << "\n";
  }
  return out.str();
}

}  // namespace thfsg
