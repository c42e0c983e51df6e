#include "thfsg/parser.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace thfsg {

std::uint32_t SearchLimits::chain_bound(const Grammar& g) const {
  if (max_chain > 0) return max_chain;
  return 2 * static_cast<std::uint32_t>(g.categories.size());
}

const char* to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::Accepted: return "accepted";
    case ParseStatus::Rejected: return "rejected";
    case ParseStatus::LimitExceeded: return "limit_exceeded";
  }
  return "unknown";
}

namespace {

struct Deriv {
  int rule;   // index into productions or lexicon
  bool lex;
  std::vector<const Deriv*> kids;
  std::uint32_t size;   // tree-domain nodes in this subtree
  std::uint32_t chain;  // nodes along the same-key path from the top
  std::uint32_t begin = 0, end = 0;      // parse mode
  std::vector<std::string> yield;        // enumerate mode
};

void build_tree(const Grammar& g, const Deriv* d, const TreeAddress& at,
                CStructure& cs) {
  if (d->lex) {
    const auto& l = g.lexicon[static_cast<std::size_t>(d->rule)];
    cs.labels[at] = NodeLabel{LabelKind::Category, l.lhs};
    TreeAddress leaf = at.child(1);
    cs.labels[leaf] = l.terminal.empty()
                          ? NodeLabel{LabelKind::Empty, ""}
                          : NodeLabel{LabelKind::Terminal, l.terminal};
    cs.annotations[leaf] = l.annotations;
    return;
  }
  const auto& p = g.productions[static_cast<std::size_t>(d->rule)];
  cs.labels[at] = NodeLabel{LabelKind::Category, p.lhs};
  for (std::size_t i = 0; i < d->kids.size(); ++i) {
    TreeAddress c = at.child(static_cast<std::uint32_t>(i + 1));
    build_tree(g, d->kids[i], c, cs);
    cs.annotations[c] = p.daughters[i].annotations;
  }
}

CStructure candidate_tree(const Grammar& g, int rule,
                          const std::vector<const Deriv*>& kids) {
  CStructure cs;
  const auto& p = g.productions[static_cast<std::size_t>(rule)];
  cs.labels[TreeAddress{}] = NodeLabel{LabelKind::Category, p.lhs};
  for (std::size_t i = 0; i < kids.size(); ++i) {
    TreeAddress c = TreeAddress{}.child(static_cast<std::uint32_t>(i + 1));
    build_tree(g, kids[i], c, cs);
    cs.annotations[c] = p.daughters[i].annotations;
  }
  return cs;
}

CStructure lexicon_tree(const Grammar& g, int rule) {
  CStructure cs;
  Deriv d{rule, true, {}, 2, 1, 0, 0, {}};
  build_tree(g, &d, TreeAddress{}, cs);
  return cs;
}

int compare_derivs(const Deriv* a, const Deriv* b) {
  if (a->size != b->size) return a->size < b->size ? -1 : 1;
  if (a->lex != b->lex) return a->lex ? -1 : 1;
  if (a->rule != b->rule) return a->rule < b->rule ? -1 : 1;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (int c = compare_derivs(a->kids[i], b->kids[i])) return c;
  return 0;
}

// The feature structure of a subtree as its surroundings can see it: only
// the root address stays named.  Used to collapse derivations that cannot
// differ in any larger context.
std::string context_fs_key(const FeatureStructure& fs) {
  FeatureStructure restricted = fs;
  std::map<std::string, NodeId> names;
  auto it = restricted.names.find("");
  if (it != restricted.names.end()) names[""] = it->second;
  restricted.names = std::move(names);
  return dump_feature_structure(restricted);
}

class Engine {
 public:
  Engine(const Grammar& g, SearchLimits limits, bool dedup_by_fs)
      : g_(g),
        max_chain_(limits.chain_bound(g)),
        max_nodes_(limits.max_nodes),
        max_derivs_(static_cast<std::size_t>(limits.max_nodes) * 64),
        dedup_by_fs_(dedup_by_fs) {}

  bool truncated() const { return truncated_; }
  const std::optional<Inconsistency>& root_failure() const {
    return root_failure_;
  }

 protected:
  // Tests one realization of `rule` over `kids`; stores it when the
  // subtree is new, within bounds and consistent.
  void complete(int rule, const std::vector<const Deriv*>& kids,
                std::uint32_t begin, std::uint32_t end,
                std::vector<std::string> yield, bool root_span) {
    if (!attempted_.emplace(rule, kids).second) return;
    std::uint32_t size = 1;
    for (const Deriv* k : kids) size += k->size;
    if (size > max_nodes_) {
      truncated_ = true;
      return;
    }
    std::uint32_t chain = 1;
    for (const Deriv* k : kids) {
      bool same_key = parse_mode_ ? (k->begin == begin && k->end == end)
                                  : (k->yield == yield);
      if (same_key) chain = std::max(chain, k->chain + 1);
    }
    if (chain > max_chain_) {
      truncated_ = true;
      return;
    }
    CStructure cs = candidate_tree(g_, rule, kids);
    DescribeResult res = generated_fs(cs);
    if (!res.ok()) {
      if (root_span && !root_failure_) root_failure_ = res.failure;
      return;
    }
    store(Deriv{rule, false, kids, size, chain, begin, end, std::move(yield)},
          *res.fs);
  }

  void seed_lexicon(int rule, std::uint32_t begin, std::uint32_t end,
                    std::vector<std::string> yield) {
    CStructure cs = lexicon_tree(g_, rule);
    DescribeResult res = generated_fs(cs);
    if (!res.ok()) return;  // internally clashing annotation set
    store(Deriv{rule, true, {}, 2, 1, begin, end, std::move(yield)}, *res.fs);
  }

  void store(Deriv d, const FeatureStructure& fs) {
    const auto& lhs = d.lex ? g_.lexicon[static_cast<std::size_t>(d.rule)].lhs
                            : g_.productions[static_cast<std::size_t>(d.rule)].lhs;
    if (dedup_by_fs_) {
      auto& keys = fs_keys_[{lhs, d.begin, d.end, d.yield}];
      if (!keys.insert(context_fs_key(fs)).second) return;
    }
    if (arena_.size() >= max_derivs_) {
      truncated_ = true;
      stop_ = true;
      return;
    }
    arena_.push_back(std::move(d));
    added(lhs, &arena_.back());
    changed_ = true;
  }

  virtual void added(const std::string& category, const Deriv* d) = 0;

  const Grammar& g_;
  std::uint32_t max_chain_;
  std::uint32_t max_nodes_;
  std::size_t max_derivs_;
  bool dedup_by_fs_;
  bool parse_mode_ = true;
  bool truncated_ = false;
  bool stop_ = false;
  bool changed_ = false;
  std::deque<Deriv> arena_;
  std::set<std::pair<int, std::vector<const Deriv*>>> attempted_;
  std::map<std::tuple<std::string, std::uint32_t, std::uint32_t,
                      std::vector<std::string>>,
           std::set<std::string>>
      fs_keys_;
  std::optional<Inconsistency> root_failure_;
};

class ParseEngine : public Engine {
 public:
  // When a single parse is wanted, derivations indistinguishable by their
  // context feature structure collapse; any kept witness is as good as a
  // dropped one.  Asking for several parses keeps every tree shape.
  ParseEngine(const Grammar& g, const std::vector<std::string>& tokens,
              SearchLimits limits)
      : Engine(g, limits, limits.max_parses <= 1), tokens_(tokens) {
    parse_mode_ = true;
  }

  void run() {
    std::uint32_t n = static_cast<std::uint32_t>(tokens_.size());
    for (std::size_t i = 0; i < g_.lexicon.size(); ++i) {
      const auto& l = g_.lexicon[i];
      if (l.terminal.empty()) {
        for (std::uint32_t pos = 0; pos <= n; ++pos)
          seed_lexicon(static_cast<int>(i), pos, pos, {});
      } else {
        for (std::uint32_t pos = 0; pos < n; ++pos)
          if (tokens_[pos] == l.terminal)
            seed_lexicon(static_cast<int>(i), pos, pos + 1, {});
      }
    }
    changed_ = true;
    while (changed_ && !stop_) {
      changed_ = false;
      for (std::size_t r = 0; r < g_.productions.size() && !stop_; ++r) {
        for (std::uint32_t b = 0; b <= n && !stop_; ++b) {
          std::vector<const Deriv*> kids;
          realize(static_cast<int>(r), 0, b, b, kids);
        }
      }
    }
  }

  std::vector<const Deriv*> results(const std::string& category,
                                    std::uint32_t begin, std::uint32_t end) {
    std::vector<const Deriv*> out;
    for (const Deriv* d : by_cat_begin_[{category, begin}])
      if (d->end == end) out.push_back(d);
    std::sort(out.begin(), out.end(), [](const Deriv* a, const Deriv* b) {
      return compare_derivs(a, b) < 0;
    });
    return out;
  }

 private:
  void realize(int rule, std::size_t idx, std::uint32_t begin,
               std::uint32_t pos, std::vector<const Deriv*>& kids) {
    if (stop_) return;
    const auto& p = g_.productions[static_cast<std::size_t>(rule)];
    if (idx == p.daughters.size()) {
      bool root_span = p.lhs == g_.start && begin == 0 &&
                       pos == static_cast<std::uint32_t>(tokens_.size());
      complete(rule, kids, begin, pos, {}, root_span);
      return;
    }
    auto it = by_cat_begin_.find({p.daughters[idx].category, pos});
    if (it == by_cat_begin_.end()) return;
    // The vector may grow while we recurse; index-based iteration keeps
    // this round's view stable and later rounds pick up the rest.
    std::size_t count = it->second.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Deriv* d = it->second[i];
      kids.push_back(d);
      realize(rule, idx + 1, begin, d->end, kids);
      kids.pop_back();
    }
  }

  void added(const std::string& category, const Deriv* d) override {
    by_cat_begin_[{category, d->begin}].push_back(d);
  }

  const std::vector<std::string>& tokens_;
  std::map<std::pair<std::string, std::uint32_t>, std::vector<const Deriv*>>
      by_cat_begin_;
};

class EnumerateEngine : public Engine {
 public:
  EnumerateEngine(const Grammar& g, std::size_t max_len, SearchLimits limits)
      : Engine(g, limits, true), max_len_(max_len) {
    parse_mode_ = false;
  }

  void run() {
    for (std::size_t i = 0; i < g_.lexicon.size(); ++i) {
      const auto& l = g_.lexicon[i];
      if (l.terminal.empty())
        seed_lexicon(static_cast<int>(i), 0, 0, {});
      else if (max_len_ >= 1)
        seed_lexicon(static_cast<int>(i), 0, 0, {l.terminal});
    }
    changed_ = true;
    while (changed_ && !stop_) {
      changed_ = false;
      for (std::size_t r = 0; r < g_.productions.size() && !stop_; ++r) {
        std::vector<const Deriv*> kids;
        realize(static_cast<int>(r), 0, 0, kids);
      }
    }
  }

  std::set<std::vector<std::string>> yields(const std::string& category) {
    std::set<std::vector<std::string>> out;
    for (const Deriv* d : by_cat_[category]) out.insert(d->yield);
    return out;
  }

 private:
  void realize(int rule, std::size_t idx, std::size_t len,
               std::vector<const Deriv*>& kids) {
    if (stop_) return;
    const auto& p = g_.productions[static_cast<std::size_t>(rule)];
    if (idx == p.daughters.size()) {
      std::vector<std::string> yield;
      yield.reserve(len);
      for (const Deriv* k : kids)
        yield.insert(yield.end(), k->yield.begin(), k->yield.end());
      complete(rule, kids, 0, 0, std::move(yield), false);
      return;
    }
    auto it = by_cat_.find(p.daughters[idx].category);
    if (it == by_cat_.end()) return;
    std::size_t count = it->second.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Deriv* d = it->second[i];
      if (len + d->yield.size() > max_len_) continue;
      kids.push_back(d);
      realize(rule, idx + 1, len + d->yield.size(), kids);
      kids.pop_back();
    }
  }

  void added(const std::string& category, const Deriv* d) override {
    by_cat_[category].push_back(d);
  }

  std::size_t max_len_;
  std::map<std::string, std::vector<const Deriv*>> by_cat_;
};

}  // namespace

ParseResult parse_all(const Grammar& g, const std::vector<std::string>& tokens,
                      SearchLimits limits) {
  ParseEngine engine(g, tokens, limits);
  engine.run();
  ParseResult result;
  result.truncated = engine.truncated();
  result.root_failure = engine.root_failure();
  auto winners = engine.results(g.start, 0,
                                static_cast<std::uint32_t>(tokens.size()));
  for (const Deriv* d : winners) {
    if (result.parses.size() >= limits.max_parses) break;
    CStructure cs;
    build_tree(g, d, TreeAddress{}, cs);
    DescribeResult fs = generated_fs(cs);
    result.parses.emplace_back(std::move(cs), std::move(*fs.fs));
  }
  if (!winners.empty())
    result.status = ParseStatus::Accepted;
  else
    result.status = engine.truncated() ? ParseStatus::LimitExceeded
                                       : ParseStatus::Rejected;
  return result;
}

ParseResult recognize(const Grammar& g, const std::vector<std::string>& tokens,
                      SearchLimits limits) {
  limits.max_parses = 1;
  return parse_all(g, tokens, limits);
}

EnumerateResult enumerate_language(const Grammar& g, std::size_t max_len,
                                   SearchLimits limits) {
  EnumerateEngine engine(g, max_len, limits);
  engine.run();
  EnumerateResult result;
  result.truncated = engine.truncated();
  result.strings = engine.yields(g.start);
  return result;
}

}  // namespace thfsg
