#ifndef THFSG_GRAMMAR_HPP
#define THFSG_GRAMMAR_HPP

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "thfsg/feature_structure.hpp"

namespace thfsg {

// Equation schemata: the up arrow becomes the mother, the down arrow the
// node itself once instantiated on a tree.
struct ArrowSchema {
  Path path;  // ^ path = _   (path may be empty)
  auto operator<=>(const ArrowSchema&) const = default;
};

struct ValueSchema {
  Path path;  // ^ path = #value   (path nonempty)
  std::string value;
  auto operator<=>(const ValueSchema&) const = default;
};

using Schema = std::variant<ArrowSchema, ValueSchema>;

// Annotation sets are sets: kept sorted, duplicates collapsed.
using AnnotationSet = std::vector<Schema>;

AnnotationSet make_annotation_set(std::vector<Schema> schemata);

struct Daughter {
  std::string category;
  AnnotationSet annotations;
  bool operator==(const Daughter&) const = default;
};

struct ProductionRule {
  std::string lhs;
  std::vector<Daughter> daughters;
  bool operator==(const ProductionRule&) const = default;
};

struct LexiconRule {
  std::string lhs;
  std::string terminal;  // "" means the empty string
  AnnotationSet annotations;
  bool operator==(const LexiconRule&) const = default;
};

struct Grammar {
  std::string start;
  std::set<std::string> categories;
  std::set<std::string> terminals;
  std::vector<ProductionRule> productions;
  std::vector<LexiconRule> lexicon;
  bool operator==(const Grammar&) const = default;
};

// Structural validation; empty result iff all definitional constraints hold.
std::vector<std::string> validate(const Grammar& g);

// Normal form: binary productions, arrow paths of length at most one.
bool is_normal_form(const Grammar& g);

// Equivalent grammar in normal form: long arrow paths are unchained, wide
// rules right-binarized, unary rules padded with a fresh epsilon category.
// Throws std::invalid_argument on invalid input.
Grammar normalize(const Grammar& g);

// All attribute symbols mentioned in schemata.
std::set<std::string> attribute_symbols(const Grammar& g);

// All symbols a fresh name must avoid (categories, terminals, start).
std::set<std::string> used_symbols(const Grammar& g);

// Smallest "<base>!<k>" not present in `used`; inserts the result.
std::string fresh_symbol(std::set<std::string>& used, const std::string& base);

std::string render_schema(const Schema& s);
std::string render_annotations(const AnnotationSet& as);

}  // namespace thfsg

#endif
