// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Run directly or through ctest.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "thfsg/algebra.hpp"
#include "thfsg/parser.hpp"
#include "thfsg/text_io.hpp"

using namespace thfsg;

namespace {

using StringSet = std::set<std::vector<std::string>>;

struct Checker {
  std::vector<std::string> failures;

  void require(bool condition, const std::string& what) {
    if (!condition) failures.push_back(what);
  }
};

std::string fixture(const std::string& name) {
  return std::string(THFSG_FIXTURE_DIR) + "/" + name;
}

StringSet enumerated(const Grammar& g, std::size_t max_len) {
  return enumerate_language(g, max_len).strings;
}

std::string show(const std::vector<std::string>& tokens) {
  return format_tokens(tokens);
}

// ---- cross-serial skeletons -------------------------------------------

const std::vector<std::string> kNouns = {"em Hans", "es Hans", "d'chind"};
const std::vector<std::string> kVerbs = {"hälfe", "laa"};

bool pair_matched(const std::string& noun, const std::string& verb) {
  return (verb == "hälfe") == (noun == "em Hans");
}

std::vector<std::string> skeleton(const std::vector<std::string>& nouns,
                                  const std::vector<std::string>& verbs) {
  std::vector<std::string> s = {"x"};
  s.insert(s.end(), nouns.begin(), nouns.end());
  s.push_back("y");
  s.insert(s.end(), verbs.begin(), verbs.end());
  s.push_back("z");
  return s;
}

template <typename Fn>
void for_each_sequence(const std::vector<std::string>& pool, int length,
                       std::vector<std::string>& buffer, Fn&& fn) {
  if (length == 0) {
    fn(buffer);
    return;
  }
  for (const auto& item : pool) {
    buffer.push_back(item);
    for_each_sequence(pool, length - 1, buffer, fn);
    buffer.pop_back();
  }
}

// ---- tree-homomorphism checks ------------------------------------------

bool in_degree_at_most_one(const FeatureStructure& fs) {
  std::vector<int> in_degree(fs.node_count, 0);
  for (NodeId q = 0; q < fs.node_count; ++q)
    for (const auto& [attr, dst] : fs.edges[q]) ++in_degree[dst];
  for (NodeId q = 0; q < fs.node_count; ++q)
    if (in_degree[q] > 1) return false;
  return true;
}

bool domination_preserved(const CStructure& cs, const FeatureStructure& fs) {
  auto reaches = [&fs](NodeId from, NodeId to) {
    std::vector<NodeId> stack{from};
    std::set<NodeId> seen{from};
    while (!stack.empty()) {
      NodeId q = stack.back();
      stack.pop_back();
      if (q == to) return true;
      for (const auto& [attr, dst] : fs.edges[q])
        if (seen.insert(dst).second) stack.push_back(dst);
    }
    return false;
  };
  std::vector<TreeAddress> named;
  for (const auto& [addr, label] : cs.labels)
    if (fs.names.count(addr.to_string())) named.push_back(addr);
  for (const auto& a : named)
    for (const auto& b : named)
      if (a.is_prefix_of(b) &&
          !reaches(fs.names.at(a.to_string()), fs.names.at(b.to_string())))
        return false;
  return true;
}

// Witness c-structures produced while running the suites; criterion six
// checks the homomorphism property over all of them.
std::vector<std::pair<CStructure, FeatureStructure>> g_witnesses;

void collect_witnesses(const Grammar& g, const StringSet& strings,
                       Checker& check) {
  for (const auto& w : strings) {
    ParseResult r = recognize(g, w);
    check.require(r.status == ParseStatus::Accepted,
                  "witness parse failed for: " + show(w));
    if (r.status == ParseStatus::Accepted)
      g_witnesses.push_back(r.parses.front());
  }
}

// ---- random equation sets (criterion seven) ----------------------------

EquationSet random_equations(std::mt19937& rng, int max_eqs) {
  static const std::vector<std::string> names = {"x", "y", "z"};
  static const std::vector<std::string> attrs = {"a", "b", "c"};
  static const std::vector<std::string> values = {"u", "v"};
  auto pick = [&](const std::vector<std::string>& pool) {
    return pool[rng() % pool.size()];
  };
  auto random_path = [&](std::size_t min_len) {
    Path p;
    std::size_t len = min_len + rng() % 3;
    for (std::size_t i = 0; i < len; ++i) p.push_back(pick(attrs));
    return p;
  };
  EquationSet out;
  int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_eqs));
  for (int i = 0; i < count; ++i) {
    if (rng() % 2 == 0)
      out.push_back(PathEquation{pick(names), random_path(0), pick(names),
                                 random_path(0)});
    else
      out.push_back(ValueEquation{pick(names), random_path(1), pick(values)});
  }
  return out;
}

// ---- criteria -----------------------------------------------------------

void criterion_1(Checker& check) {
  Grammar g1 = parse_grammar_file(fixture("g1.thfsg"));
  StringSet expected;
  for (const char* s : {"a c c a", "b c c b", "a a c c c c a a",
                        "a b c c c c a b", "b a c c c c b a",
                        "b b c c c c b b"})
    expected.insert(parse_tokens(s));
  StringSet got = enumerated(g1, 10);
  check.require(got == expected, "enumerate(g1, 10) is not the 6-string set");
  check.require(got.size() == 6, "expected exactly 6 strings");
  collect_witnesses(g1, got, check);
}

void criterion_2(Checker& check) {
  Grammar swiss = parse_grammar_file(fixture("swiss.thfsg"));
  std::mt19937 rng(52);

  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<std::string>> noun_seqs, verb_seqs;
    std::vector<std::string> buffer;
    for_each_sequence(kNouns, n, buffer,
                      [&](const auto& seq) { noun_seqs.push_back(seq); });
    for_each_sequence(kVerbs, n, buffer,
                      [&](const auto& seq) { verb_seqs.push_back(seq); });

    std::vector<std::vector<std::string>> accepted_strings;
    std::vector<std::vector<std::string>> rejected_strings;
    for (const auto& nouns : noun_seqs)
      for (const auto& verbs : verb_seqs) {
        bool matched = true;
        for (int i = 0; i < n; ++i)
          if (!pair_matched(nouns[i], verbs[i])) matched = false;
        auto s = skeleton(nouns, verbs);
        (matched ? accepted_strings : rejected_strings).push_back(s);
      }
    check.require(accepted_strings.size() ==
                      static_cast<std::size_t>(std::pow(3, n)),
                  "matched skeleton count for n=" + std::to_string(n));

    for (const auto& s : accepted_strings) {
      ParseResult r = recognize(swiss, s);
      check.require(r.status == ParseStatus::Accepted,
                    "case-matched skeleton rejected: " + show(s));
      if (r.status == ParseStatus::Accepted)
        g_witnesses.push_back(r.parses.front());
    }
    if (n <= 2) {
      for (const auto& s : rejected_strings)
        check.require(recognize(swiss, s).status == ParseStatus::Rejected,
                      "mismatched skeleton accepted: " + show(s));
    } else {
      std::shuffle(rejected_strings.begin(), rejected_strings.end(), rng);
      std::size_t sample = std::min<std::size_t>(60, rejected_strings.size());
      check.require(sample >= 50, "n=3 mismatch sample too small");
      for (std::size_t i = 0; i < sample; ++i)
        check.require(
            recognize(swiss, rejected_strings[i]).status ==
                ParseStatus::Rejected,
            "mismatched skeleton accepted: " + show(rejected_strings[i]));
    }
  }

  ParseResult good =
      recognize(swiss, parse_tokens("x d'chind 'em Hans' y laa hälfe z"));
  check.require(good.status == ParseStatus::Accepted,
                "the worked cross-serial example must accept");

  ParseResult bad =
      recognize(swiss, parse_tokens("x 'es Hans' d'chind y hälfe laa z"));
  check.require(bad.status == ParseStatus::Rejected,
                "the mismatched example must reject");
  check.require(bad.root_failure.has_value() &&
                    bad.root_failure->kind == InconsistencyKind::ValueClash &&
                    bad.root_failure->witness.find("DAT") != std::string::npos &&
                    bad.root_failure->witness.find("ACC") != std::string::npos,
                "rejection must carry a DAT/ACC value-clash witness");
}

void criterion_3(Checker& check) {
  for (const char* name : {"g1.thfsg", "swiss.thfsg"}) {
    Grammar g = parse_grammar_file(fixture(name));
    Grammar n = normalize(g);
    check.require(is_normal_form(n),
                  std::string(name) + ": normalize output not in normal form");
    check.require(validate(n).empty(),
                  std::string(name) + ": normalize output invalid");
    check.require(enumerated(g, 8) == enumerated(n, 8),
                  std::string(name) + ": normal form changed the language");
  }
}

void criterion_4(Checker& check) {
  Grammar g1 = parse_grammar_file(fixture("g1.thfsg"));
  Grammar d = parse_grammar_file(fixture("d.thfsg"));
  const std::size_t bound = 8;
  StringSet e_g1 = enumerated(g1, bound);
  StringSet e_d = enumerated(d, bound);

  auto union_of = [](const StringSet& a, const StringSet& b) {
    StringSet out = a;
    out.insert(b.begin(), b.end());
    return out;
  };
  auto concat_of = [&](const StringSet& a, const StringSet& b) {
    StringSet out;
    for (const auto& u : a)
      for (const auto& v : b) {
        if (u.size() + v.size() > bound) continue;
        auto w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.insert(std::move(w));
      }
    return out;
  };
  auto star_of = [&](const StringSet& a) {
    StringSet out = {{}};
    for (;;) {
      StringSet next = concat_of(out, a);
      std::size_t before = out.size();
      out.insert(next.begin(), next.end());
      if (out.size() == before) return out;
    }
  };

  Grammar u = grammar_union(g1, d);
  check.require(enumerated(u, bound) == union_of(e_g1, e_d),
                "union(g1, d) enumeration mismatch");
  Grammar uu = grammar_union(g1, g1);
  check.require(enumerated(uu, bound) == e_g1,
                "union(g1, g1) enumeration mismatch");
  Grammar c1 = grammar_concat(g1, d);
  check.require(enumerated(c1, bound) == concat_of(e_g1, e_d),
                "concat(g1, d) enumeration mismatch");
  Grammar c2 = grammar_concat(d, g1);
  check.require(enumerated(c2, bound) == concat_of(e_d, e_g1),
                "concat(d, g1) enumeration mismatch");
  Grammar s1 = grammar_star(g1);
  check.require(enumerated(s1, bound) == star_of(e_g1),
                "star(g1) enumeration mismatch");
  Grammar s2 = grammar_star(d);
  check.require(enumerated(s2, bound) == star_of(e_d),
                "star(d) enumeration mismatch");

  collect_witnesses(u, enumerated(u, 4), check);
  collect_witnesses(c1, enumerated(c1, 5), check);
  collect_witnesses(s1, enumerated(s1, bound), check);
}

void criterion_5(Checker& check) {
  Grammar g1 = parse_grammar_file(fixture("g1.thfsg"));
  Grammar n = normalize(g1);
  const std::size_t bound = 10;
  StringSet source = enumerated(g1, bound);

  struct Case {
    const char* name;
    Transducer machine;
  };
  std::vector<Case> cases;
  cases.push_back({"echo a*c*a*",
                   parse_transducer_file(fixture("astar_cstar_astar.nft"))});
  cases.push_back(
      {"homomorphism a,b->a", parse_transducer_file(fixture("collapse_ab.nft"))});

  for (const auto& [name, machine] : cases) {
    Grammar image = nft_image_grammar(n, machine);
    StringSet got = enumerated(image, bound);

    StringSet oracle;
    for (const auto& w : source) {
      NftOutputs out = nft_outputs(machine, w, bound);
      for (const auto& x : out.outputs)
        if (x.size() <= bound) oracle.insert(x);
    }
    check.require(got == oracle,
                  std::string(name) + ": image enumeration differs from the "
                                      "brute-force image");
    collect_witnesses(image, got, check);
  }

  StringSet expected_echo;
  expected_echo.insert(parse_tokens("a c c a"));
  expected_echo.insert(parse_tokens("a a c c c c a a"));
  Grammar echo_image = nft_image_grammar(
      n, parse_transducer_file(fixture("astar_cstar_astar.nft")));
  check.require(enumerated(echo_image, bound) == expected_echo,
                "echo image must be exactly {acca, aaccccaa}");
}

void criterion_6(Checker& check) {
  check.require(!g_witnesses.empty(), "no witnesses were collected");
  for (const auto& [cs, fs] : g_witnesses) {
    check.require(in_degree_at_most_one(fs),
                  "a generated structure has transition in-degree above one");
    check.require(domination_preserved(cs, fs),
                  "an address prefix does not dominate its extension");
  }
}

void criterion_7(Checker& check) {
  std::mt19937 rng(7301);
  int consistent = 0;
  for (int round = 0; round < 1000; ++round) {
    EquationSet e1 = random_equations(rng, 6);
    EquationSet e2 = random_equations(rng, 6);
    DescribeResult d1 = describe(e1);
    DescribeResult d2 = describe(e2);
    std::string tag = " (round " + std::to_string(round) + ")";

    if (d1.ok()) {
      ++consistent;
      check.require(supports(*d1.fs, e1), "describe must support its input" + tag);
      check.require(check_well_formed(*d1.fs).ok(),
                    "describe output must be well formed" + tag);
    }
    if (d1.ok() && d2.ok()) {
      check.require(subsumes(*d1.fs, *d2.fs) == supports(*d2.fs, e1),
                    "morphism subsumption disagrees with the semantic "
                    "oracle" + tag);
      DescribeResult du = unify(*d1.fs, *d2.fs);
      EquationSet joint = e1;
      joint.insert(joint.end(), e2.begin(), e2.end());
      DescribeResult dj = describe(joint);
      check.require(du.ok() == dj.ok(),
                    "unify and union description disagree on consistency" + tag);
      if (du.ok() && dj.ok())
        check.require(equivalent(*du.fs, *dj.fs),
                      "unify differs from union description" + tag);
    }
    // Least-ness against an enumerated family of supporting structures of
    // at most five nodes.
    if (d1.ok()) {
      for (int variant = 0; variant < 4; ++variant) {
        EquationSet extended = e1;
        EquationSet extra = random_equations(rng, 3);
        extended.insert(extended.end(), extra.begin(), extra.end());
        DescribeResult dx = describe(extended);
        if (!dx.ok() || dx.fs->node_count > 5) continue;
        check.require(supports(*dx.fs, e1),
                      "extended description must support the core set" + tag);
        check.require(subsumes(*d1.fs, *dx.fs),
                      "least model must subsume a supporting structure" + tag);
      }
      EquationSet other = random_equations(rng, 6);
      DescribeResult dm = describe(other);
      if (dm.ok() && dm.fs->node_count <= 5 && supports(*dm.fs, e1))
        check.require(subsumes(*d1.fs, *dm.fs),
                      "least model must subsume an independent supporting "
                      "structure" + tag);
    }
  }
  check.require(consistent >= 300, "too few consistent samples");
}

struct Criterion {
  int number;
  std::string title;
  double time_limit;  // seconds; zero means no stated bound
  std::function<void(Checker&)> body;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "example language enumeration up to length 10", 10.0, criterion_1},
      {2, "cross-serial acceptance and case-clash rejection", 60.0,
       criterion_2},
      {3, "normal form preserves fixture languages", 0.0, criterion_3},
      {4, "union, concatenation and Kleene closure identities", 0.0,
       criterion_4},
      {5, "NFT-image grammars match the brute-force image", 60.0, criterion_5},
      {6, "generated structures are domination-preserving trees", 0.0,
       criterion_6},
      {7, "feature-structure semantics on 1000 random equation sets", 120.0,
       criterion_7},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    Checker check;
    auto start = std::chrono::steady_clock::now();
    criterion.body(check);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.time_limit > 0 && elapsed >= criterion.time_limit)
      check.failures.push_back("time limit of " +
                               std::to_string(criterion.time_limit) +
                               "s exceeded");
    std::ostringstream line;
    line << (check.failures.empty() ? "PASS" : "FAIL") << "  criterion "
         << criterion.number << ": " << criterion.title << " (" << std::fixed
         << std::setprecision(2) << elapsed << "s)";
    std::cout << line.str() << "\n";
    for (const auto& f : check.failures) std::cout << "      " << f << "\n";
    if (!check.failures.empty()) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
