#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "thfsg/feature_structure.hpp"

using namespace thfsg;

namespace {

EquationSet eqs(std::initializer_list<Equation> list) { return {list}; }

Path path(std::initializer_list<const char*> attrs) {
  Path p;
  for (const char* a : attrs) p.push_back(a);
  return p;
}

FeatureStructure must_describe(const EquationSet& e) {
  DescribeResult r = describe(e);
  REQUIRE(r.ok());
  return std::move(*r.fs);
}

// Small random equation sets over three names, three attributes and two
// values; roughly half are consistent.
EquationSet random_equations(std::mt19937& rng, int max_eqs = 6) {
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

}  // namespace

TEST_CASE("transit follows defined paths and is absent otherwise") {
  FeatureStructure single;
  single.node_count = 1;
  single.edges.resize(1);
  single.names["q"] = 0;
  CHECK(transit(single, 0, {}) == 0);

  FeatureStructure fs = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  NodeId root = fs.names.at("x");
  Path a = path({"a"});
  auto leaf = transit(fs, root, a);
  REQUIRE(leaf.has_value());
  CHECK(fs.values.at(*leaf) == "v");
  Path ab = path({"a", "b"});
  CHECK(!transit(fs, root, ab).has_value());
}

TEST_CASE("check_well_formed names offending nodes") {
  SUBCASE("value with an out edge") {
    FeatureStructure raw;
    raw.node_count = 2;
    raw.edges.resize(2);
    raw.names["x"] = 0;
    raw.edges[0]["a"] = 1;
    raw.values[0] = "v";
    auto report = check_well_formed(raw);
    CHECK(report.atomic_violations == std::vector<NodeId>{0});
    CHECK(report.cycle_nodes.empty());
  }
  SUBCASE("self loop") {
    FeatureStructure raw;
    raw.node_count = 1;
    raw.edges.resize(1);
    raw.names["x"] = 0;
    raw.edges[0]["a"] = 0;
    auto report = check_well_formed(raw);
    CHECK(report.cycle_nodes == std::vector<NodeId>{0});
  }
  SUBCASE("unnamed unreached node") {
    FeatureStructure raw;
    raw.node_count = 2;
    raw.edges.resize(2);
    raw.names["x"] = 0;
    auto report = check_well_formed(raw);
    CHECK(report.unreachable_nodes == std::vector<NodeId>{1});
  }
  SUBCASE("well-formed structure is clean") {
    FeatureStructure fs = must_describe(
        eqs({ValueEquation{"x", path({"a"}), "v"},
             PathEquation{"x", path({"b"}), "y", {}}}));
    CHECK(check_well_formed(fs).ok());
  }
}

TEST_CASE("satisfies on both equation shapes") {
  FeatureStructure fs = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  CHECK(satisfies(fs, ValueEquation{"x", path({"a"}), "v"}));
  CHECK(!satisfies(fs, ValueEquation{"x", path({"a"}), "w"}));
  CHECK(!satisfies(fs, ValueEquation{"q", path({"a"}), "v"}));  // unknown name

  FeatureStructure shared = must_describe(eqs({PathEquation{"x", path({"a"}), "y", {}}}));
  CHECK(satisfies(shared, PathEquation{"x", path({"a"}), "y", {}}));
  CHECK(satisfies(shared, PathEquation{"y", {}, "x", path({"a"})}));
  CHECK(!satisfies(shared, PathEquation{"x", path({"b"}), "y", {}}));
}

TEST_CASE("supports is the universal closure; empty set is vacuous") {
  FeatureStructure fs = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  CHECK(supports(fs, {}));
  EquationSet e = eqs({ValueEquation{"x", path({"a"}), "v"},
                       ValueEquation{"x", path({"b"}), "v"}});
  CHECK(!supports(fs, e));  // least model lacks the b edge
}

TEST_CASE("describe: minimal one-equation model") {
  FeatureStructure fs = must_describe(eqs({ValueEquation{"x", path({"lex"}), "b"}}));
  CHECK(fs.node_count == 2);
  NodeId root = fs.names.at("x");
  Path lex = path({"lex"});
  auto leaf = transit(fs, root, lex);
  REQUIRE(leaf.has_value());
  CHECK(fs.values.at(*leaf) == "b");
}

TEST_CASE("describe: instantiated left-subtree chain") {
  // Congruence closure over the instantiated left subtree for "ba": two
  // chain nodes carrying lex values b and a, ending in a $ value.
  EquationSet e = eqs({
      PathEquation{"", {}, "1", {}},
      PathEquation{"1", {}, "11", {}},
      ValueEquation{"11", path({"lex"}), "b"},
      PathEquation{"1", path({"next"}), "12", {}},
      PathEquation{"12", {}, "121", {}},
      ValueEquation{"12", path({"next"}), "$"},
      ValueEquation{"121", path({"lex"}), "a"},
  });
  FeatureStructure fs = must_describe(e);
  CHECK(dump_feature_structure(fs) ==
        "node 0\n"
        "node 1\n"
        "node 2\n"
        "node 3\n"
        "node 4\n"
        "name  -> 0\n"
        "name 1 -> 0\n"
        "name 11 -> 0\n"
        "name 12 -> 1\n"
        "name 121 -> 1\n"
        "edge 0 lex 2\n"
        "edge 0 next 1\n"
        "edge 1 lex 3\n"
        "edge 1 next 4\n"
        "value 2 #b\n"
        "value 3 #a\n"
        "value 4 #$\n");
  CHECK(supports(fs, e));
}

TEST_CASE("describe: inconsistency taxonomy") {
  SUBCASE("atomicity") {
    DescribeResult r = describe(eqs({ValueEquation{"x", path({"a"}), "v"},
                                     ValueEquation{"x", path({"a", "b"}), "v"}}));
    REQUIRE(!r.ok());
    CHECK(r.failure->kind == InconsistencyKind::Atomicity);
  }
  SUBCASE("acyclicity") {
    DescribeResult r = describe(eqs({PathEquation{"x", path({"a"}), "x", {}}}));
    REQUIRE(!r.ok());
    CHECK(r.failure->kind == InconsistencyKind::Acyclicity);
  }
  SUBCASE("value clash carries both values") {
    DescribeResult r = describe(eqs({ValueEquation{"x", path({"a"}), "v"},
                                     ValueEquation{"x", path({"a"}), "w"}}));
    REQUIRE(!r.ok());
    CHECK(r.failure->kind == InconsistencyKind::ValueClash);
    CHECK(r.failure->witness.find("#v") != std::string::npos);
    CHECK(r.failure->witness.find("#w") != std::string::npos);
  }
}

TEST_CASE("subsumes: equation-set inclusion and direction") {
  FeatureStructure small = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  FeatureStructure big = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"},
                                            ValueEquation{"x", path({"b"}), "w"}}));
  CHECK(subsumes(small, big));
  CHECK(!subsumes(big, small));

  // Two descriptions of one set subsume each other whatever the node ids.
  EquationSet e = eqs({PathEquation{"x", path({"a"}), "y", {}},
                       ValueEquation{"y", path({"b"}), "v"}});
  FeatureStructure m1 = must_describe(e);
  FeatureStructure m2 = canonical_form(m1);
  CHECK(subsumes(m1, m2));
  CHECK(subsumes(m2, m1));
}

TEST_CASE("equivalent: reflexive, distinguishes different information") {
  FeatureStructure m = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  CHECK(equivalent(m, m));
  FeatureStructure other = must_describe(eqs({ValueEquation{"x", path({"b"}), "v"}}));
  CHECK(!equivalent(m, other));
}

TEST_CASE("unify: union of describing sets") {
  FeatureStructure m1 = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"}}));
  FeatureStructure m2 = must_describe(eqs({ValueEquation{"x", path({"b"}), "w"}}));
  DescribeResult u = unify(m1, m2);
  REQUIRE(u.ok());
  FeatureStructure both = must_describe(eqs({ValueEquation{"x", path({"a"}), "v"},
                                             ValueEquation{"x", path({"b"}), "w"}}));
  CHECK(equivalent(*u.fs, both));

  DescribeResult idem = unify(m1, m1);
  REQUIRE(idem.ok());
  CHECK(equivalent(*idem.fs, m1));

  FeatureStructure clash = must_describe(eqs({ValueEquation{"x", path({"a"}), "w"}}));
  DescribeResult bad = unify(m1, clash);
  REQUIRE(!bad.ok());
  CHECK(bad.failure->kind == InconsistencyKind::ValueClash);
}

TEST_CASE("canonical_form: idempotent and renaming-invariant") {
  FeatureStructure m = must_describe(eqs({PathEquation{"x", path({"a"}), "y", {}},
                                          ValueEquation{"x", path({"b"}), "v"}}));
  CHECK(canonical_form(canonical_form(m)) == canonical_form(m));

  // Renumber nodes by hand; the canonical dump must not notice.
  FeatureStructure shuffled;
  shuffled.node_count = m.node_count;
  shuffled.edges.resize(m.node_count);
  NodeId last = m.node_count - 1;
  auto perm = [&](NodeId q) { return last - q; };
  for (NodeId q = 0; q < m.node_count; ++q)
    for (const auto& [attr, dst] : m.edges[q])
      shuffled.edges[perm(q)][attr] = perm(dst);
  for (const auto& [q, v] : m.values) shuffled.values[perm(q)] = v;
  for (const auto& [name, q] : m.names) shuffled.names[name] = perm(q);
  CHECK(dump_feature_structure(shuffled) == dump_feature_structure(m));
}

TEST_CASE("properties over random small equation sets") {
  std::mt19937 rng(20240811);
  int consistent_seen = 0;
  for (int round = 0; round < 400; ++round) {
    EquationSet e1 = random_equations(rng);
    EquationSet e2 = random_equations(rng);
    DescribeResult d1 = describe(e1);
    DescribeResult d2 = describe(e2);

    if (d1.ok()) {
      ++consistent_seen;
      CAPTURE(round);
      CHECK(supports(*d1.fs, e1));
      CHECK(check_well_formed(*d1.fs).ok());
      CHECK(subsumes(*d1.fs, *d1.fs));

      EquationSet shuffled = e1;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      DescribeResult ds = describe(shuffled);
      REQUIRE(ds.ok());
      CHECK(equivalent(*d1.fs, *ds.fs));
      CHECK(dump_feature_structure(*d1.fs) == dump_feature_structure(*ds.fs));
    }

    // Morphism subsumption against the semantic oracle: the least model of
    // e1 embeds into the least model of e2 exactly when the latter
    // supports e1.
    if (d1.ok() && d2.ok()) {
      CAPTURE(round);
      CHECK(subsumes(*d1.fs, *d2.fs) == supports(*d2.fs, e1));
      if (subsumes(*d1.fs, *d2.fs) && subsumes(*d2.fs, *d1.fs))
        CHECK(equivalent(*d1.fs, *d2.fs));
    }

    // Distributivity: describe of the union against unify of the parts.
    EquationSet joint = e1;
    joint.insert(joint.end(), e2.begin(), e2.end());
    DescribeResult dj = describe(joint);
    if (d1.ok() && d2.ok()) {
      DescribeResult du = unify(*d1.fs, *d2.fs);
      CAPTURE(round);
      CHECK(dj.ok() == du.ok());
      if (dj.ok() && du.ok()) CHECK(equivalent(*dj.fs, *du.fs));
    } else {
      CHECK(!dj.ok());
    }

    // Least-ness: any structure supporting a superset of e1 is above its
    // description; transitivity along the same chain.
    if (d1.ok()) {
      EquationSet extended = e1;
      EquationSet extra = random_equations(rng, 3);
      extended.insert(extended.end(), extra.begin(), extra.end());
      DescribeResult dx = describe(extended);
      if (dx.ok()) {
        CAPTURE(round);
        CHECK(supports(*dx.fs, e1));
        CHECK(subsumes(*d1.fs, *dx.fs));
        EquationSet more = extended;
        EquationSet extra2 = random_equations(rng, 3);
        more.insert(more.end(), extra2.begin(), extra2.end());
        DescribeResult dm = describe(more);
        if (dm.ok()) {
          CHECK(subsumes(*dx.fs, *dm.fs));
          CHECK(subsumes(*d1.fs, *dm.fs));
        }
      }
    }
  }
  // The generator must exercise the interesting half of the space.
  CHECK(consistent_seen > 100);
}
