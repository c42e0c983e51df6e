#include "thfsg/algebra.hpp"

#include <stdexcept>

namespace thfsg {

namespace {

void require_valid(const Grammar& g, const char* who) {
  auto diags = validate(g);
  if (!diags.empty())
    throw std::invalid_argument(std::string(who) +
                                ": invalid grammar: " + diags.front());
}

Grammar rename_categories(const Grammar& g, const std::string& prefix) {
  Grammar out = g;
  out.start = prefix + g.start;
  out.categories.clear();
  for (const auto& c : g.categories) out.categories.insert(prefix + c);
  for (auto& p : out.productions) {
    p.lhs = prefix + p.lhs;
    for (auto& d : p.daughters) d.category = prefix + d.category;
  }
  for (auto& l : out.lexicon) l.lhs = prefix + l.lhs;
  return out;
}

// Prefixes the second grammar's categories out of the way when the two
// category sets intersect.
Grammar disjointify(const Grammar& g1, Grammar g2) {
  std::set<std::string> shared;
  for (const auto& c : g2.categories)
    if (g1.categories.count(c)) shared.insert(c);
  if (shared.empty()) return g2;
  for (int k = 2;; ++k) {
    std::string prefix = std::to_string(k) + "!";
    bool clash = false;
    for (const auto& c : g2.categories)
      if (g1.categories.count(prefix + c)) clash = true;
    if (!clash) return rename_categories(g2, prefix);
  }
}

// The `first`/`next` linking attributes, freshened when either grammar
// already uses them.
std::pair<std::string, std::string> linking_attributes(const Grammar& g1,
                                                       const Grammar& g2) {
  std::set<std::string> attrs = attribute_symbols(g1);
  auto more = attribute_symbols(g2);
  attrs.insert(more.begin(), more.end());
  if (!attrs.count("first") && !attrs.count("next")) return {"first", "next"};
  for (int k = 1;; ++k) {
    std::string first = "first!" + std::to_string(k);
    std::string next = "next!" + std::to_string(k);
    if (!attrs.count(first) && !attrs.count(next)) return {first, next};
  }
}

std::string fresh_start(std::set<std::string> used) {
  if (!used.count("S0")) return "S0";
  return fresh_symbol(used, "S0");
}

}  // namespace

Grammar grammar_union(const Grammar& g1, const Grammar& g2) {
  require_valid(g1, "union");
  require_valid(g2, "union");
  Grammar right = disjointify(g1, g2);
  Grammar out;
  out.categories = g1.categories;
  out.categories.insert(right.categories.begin(), right.categories.end());
  out.terminals = g1.terminals;
  out.terminals.insert(right.terminals.begin(), right.terminals.end());
  std::set<std::string> used = out.categories;
  used.insert(out.terminals.begin(), out.terminals.end());
  out.start = fresh_start(used);
  out.categories.insert(out.start);
  AnnotationSet pass = make_annotation_set({ArrowSchema{{}}});
  out.productions.push_back(
      ProductionRule{out.start, {Daughter{g1.start, pass}}});
  out.productions.push_back(
      ProductionRule{out.start, {Daughter{right.start, pass}}});
  out.productions.insert(out.productions.end(), g1.productions.begin(),
                         g1.productions.end());
  out.productions.insert(out.productions.end(), right.productions.begin(),
                         right.productions.end());
  out.lexicon = g1.lexicon;
  out.lexicon.insert(out.lexicon.end(), right.lexicon.begin(),
                     right.lexicon.end());
  return out;
}

Grammar grammar_concat(const Grammar& g1, const Grammar& g2) {
  require_valid(g1, "concat");
  require_valid(g2, "concat");
  Grammar right = disjointify(g1, g2);
  auto [first, next] = linking_attributes(g1, g2);
  Grammar out;
  out.categories = g1.categories;
  out.categories.insert(right.categories.begin(), right.categories.end());
  out.terminals = g1.terminals;
  out.terminals.insert(right.terminals.begin(), right.terminals.end());
  std::set<std::string> used = out.categories;
  used.insert(out.terminals.begin(), out.terminals.end());
  out.start = fresh_start(used);
  out.categories.insert(out.start);
  out.productions.push_back(ProductionRule{
      out.start,
      {Daughter{g1.start, make_annotation_set({ArrowSchema{{first}}})},
       Daughter{right.start, make_annotation_set({ArrowSchema{{next}}})}}});
  out.productions.insert(out.productions.end(), g1.productions.begin(),
                         g1.productions.end());
  out.productions.insert(out.productions.end(), right.productions.begin(),
                         right.productions.end());
  out.lexicon = g1.lexicon;
  out.lexicon.insert(out.lexicon.end(), right.lexicon.begin(),
                     right.lexicon.end());
  return out;
}

Grammar grammar_star(const Grammar& g) {
  require_valid(g, "star");
  auto [first, next] = linking_attributes(g, g);
  Grammar out = g;
  std::set<std::string> used = used_symbols(g);
  out.start = fresh_start(used);
  out.categories.insert(out.start);
  out.productions.insert(
      out.productions.begin(),
      ProductionRule{
          out.start,
          {Daughter{g.start, make_annotation_set({ArrowSchema{{first}}})},
           Daughter{out.start, make_annotation_set({ArrowSchema{{next}}})}}});
  out.lexicon.push_back(LexiconRule{out.start, "", {}});
  return out;
}

Grammar nft_image_grammar(const Grammar& g, const Transducer& m) {
  require_valid(g, "nft_image_grammar");
  if (!is_normal_form(g))
    throw std::invalid_argument(
        "nft_image_grammar: grammar must be in normal form");
  if (g.terminals != m.input_alphabet)
    throw std::invalid_argument(
        "nft_image_grammar: grammar terminals must equal the machine's "
        "input alphabet");
  {
    auto diags = validate_transducer(m);
    if (!diags.empty())
      throw std::invalid_argument("nft_image_grammar: invalid transducer: " +
                                  diags.front());
  }

  auto triple = [](const std::string& q1, const std::string& mid,
                   const std::string& q2) {
    return "(" + q1 + "|" + mid + "|" + q2 + ")";
  };
  auto tilde = [](const std::string& a) {
    return a.empty() ? std::string("~eps") : "~" + a;
  };

  Grammar out;
  out.terminals = m.output_alphabet;
  // Middle components: categories, input symbols and epsilon.
  std::vector<std::string> middles(g.categories.begin(), g.categories.end());
  middles.insert(middles.end(), g.terminals.begin(), g.terminals.end());
  middles.push_back("");
  for (const auto& q1 : m.states)
    for (const auto& mid : middles)
      for (const auto& q2 : m.states)
        out.categories.insert(triple(q1, mid, q2));
  for (const auto& a : m.output_alphabet) out.categories.insert(tilde(a));
  out.categories.insert(tilde(""));
  std::set<std::string> used = out.categories;
  used.insert(out.terminals.begin(), out.terminals.end());
  for (const auto& c : g.categories) used.insert(c);
  out.start = fresh_start(used);
  out.categories.insert(out.start);

  AnnotationSet pass = make_annotation_set({ArrowSchema{{}}});
  std::set<std::string> seen_rules;  // dedup on rendered shape
  auto add_production = [&](ProductionRule rule) {
    std::string key = rule.lhs + " ->";
    for (const auto& d : rule.daughters)
      key += " " + d.category + ":" + render_annotations(d.annotations);
    if (seen_rules.insert(key).second)
      out.productions.push_back(std::move(rule));
  };

  // a) start rules, one per final state
  for (const auto& q : m.finals)
    add_production(ProductionRule{
        out.start, {Daughter{triple(m.initial, g.start, q), pass}}});

  // b) production lifting over all state triples
  for (const auto& p : g.productions)
    for (const auto& q1 : m.states)
      for (const auto& q2 : m.states)
        for (const auto& q3 : m.states)
          add_production(ProductionRule{
              triple(q1, p.lhs, q3),
              {Daughter{triple(q1, p.daughters[0].category, q2),
                        p.daughters[0].annotations},
               Daughter{triple(q2, p.daughters[1].category, q3),
                        p.daughters[1].annotations}}});

  // c) lexicon lifting; the read symbol (possibly epsilon) becomes a
  // category and the annotations gain the pass-through arrow
  for (const auto& l : g.lexicon) {
    std::vector<Schema> schemata(l.annotations.begin(), l.annotations.end());
    schemata.push_back(ArrowSchema{{}});
    AnnotationSet lifted = make_annotation_set(std::move(schemata));
    for (const auto& q1 : m.states)
      for (const auto& q2 : m.states)
        add_production(
            ProductionRule{triple(q1, l.lhs, q2),
                           {Daughter{triple(q1, l.terminal, q2), lifted}}});
  }

  // d) epsilon interposition on both sides of a read
  std::vector<std::string> reads(g.terminals.begin(), g.terminals.end());
  reads.push_back("");
  for (const auto& b : reads)
    for (const auto& q1 : m.states)
      for (const auto& q2 : m.states)
        for (const auto& q3 : m.states) {
          add_production(
              ProductionRule{triple(q1, b, q3),
                             {Daughter{triple(q1, b, q2), pass},
                              Daughter{triple(q2, "", q3), pass}}});
          add_production(
              ProductionRule{triple(q1, b, q3),
                             {Daughter{triple(q1, "", q2), pass},
                              Daughter{triple(q2, b, q3), pass}}});
        }

  // Zero-step case of the extended transition: reading epsilon may leave
  // the state unchanged and write nothing.
  for (const auto& q : m.states)
    add_production(
        ProductionRule{triple(q, "", q), {Daughter{tilde(""), pass}}});

  // e) one rule per transition step, spelling out the written string
  for (const auto& [key, targets] : m.transitions) {
    const auto& [q1, b] = key;
    for (const auto& [q2, written] : targets) {
      ProductionRule rule{triple(q1, b, q2), {}};
      if (written.empty()) {
        rule.daughters.push_back(Daughter{tilde(""), pass});
      } else {
        for (const auto& a : written)
          rule.daughters.push_back(Daughter{tilde(a), pass});
      }
      add_production(std::move(rule));
    }
  }

  // f) tilde lexicon
  for (const auto& a : m.output_alphabet)
    out.lexicon.push_back(LexiconRule{tilde(a), a, {}});
  out.lexicon.push_back(LexiconRule{tilde(""), "", {}});

  return out;
}

}  // namespace thfsg
