#ifndef THFSG_CSTRUCTURE_HPP
#define THFSG_CSTRUCTURE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thfsg/feature_structure.hpp"
#include "thfsg/grammar.hpp"

namespace thfsg {

// A tree-domain address: a string of child numbers, empty for the root.
// Ordering is the lexicographic tree order (prefix first, then leftmost
// branch first).
struct TreeAddress {
  std::vector<std::uint32_t> digits;

  auto operator<=>(const TreeAddress&) const = default;

  bool is_root() const { return digits.empty(); }
  TreeAddress parent() const;
  TreeAddress child(std::uint32_t i) const;
  bool is_prefix_of(const TreeAddress& other) const;

  // "" for the root, concatenated digits otherwise; dot-separated when any
  // digit exceeds nine.
  std::string to_string() const;
};

int lex_compare(const TreeAddress& a, const TreeAddress& b);

enum class LabelKind { Category, Terminal, Empty };

struct NodeLabel {
  LabelKind kind;
  std::string symbol;  // unused for Empty
  bool operator==(const NodeLabel&) const = default;
};

// A constituent structure: the label map's key set is the tree domain;
// every non-root address carries an annotation set.
struct CStructure {
  std::map<TreeAddress, NodeLabel> labels;
  std::map<TreeAddress, AnnotationSet> annotations;
  bool operator==(const CStructure&) const = default;
};

// Terminal labels in lexicographic order; empty leaves contribute nothing.
std::vector<std::string> terminal_string(const CStructure& cs);

// Domain closure, label typing, root label and rule matching.
std::vector<std::string> validate_cstructure(const CStructure& cs,
                                             const Grammar& g);

// Substitutes the mother address for the up arrow and the node's own
// address for the down arrow, over all non-root addresses.
EquationSet instantiate(const CStructure& cs);

// describe over the instantiated set; failure is the ungrammaticality signal.
DescribeResult generated_fs(const CStructure& cs);

// One line per address in lexicographic order: "<address> <label> { ... }".
std::string dump_tree(const CStructure& cs);

}  // namespace thfsg

#endif
