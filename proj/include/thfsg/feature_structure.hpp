#ifndef THFSG_FEATURE_STRUCTURE_HPP
#define THFSG_FEATURE_STRUCTURE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace thfsg {

using NodeId = std::uint32_t;

// An attribute path, left to right.  Empty means epsilon.
using Path = std::vector<std::string>;

// Equations come in exactly two shapes: path equality and path value.
struct PathEquation {
  std::string lhs_name;
  Path lhs_path;
  std::string rhs_name;
  Path rhs_path;
  auto operator<=>(const PathEquation&) const = default;
};

struct ValueEquation {
  std::string name;
  Path path;  // nonempty by construction everywhere equations are built
  std::string value;
  auto operator<=>(const ValueEquation&) const = default;
};

using Equation = std::variant<PathEquation, ValueEquation>;
using EquationSet = std::vector<Equation>;

// A feature structure: finite nodes, a name mapping, a partial transition
// function indexed per node, and partial atomic values.  Plain aggregate;
// describe/unify/canonical_form only hand out well-formed values, raw
// construction exists for the diagnostic checker.
struct FeatureStructure {
  NodeId node_count = 0;
  std::map<std::string, NodeId> names;               // name -> node
  std::vector<std::map<std::string, NodeId>> edges;  // node -> attr -> node
  std::map<NodeId, std::string> values;              // node -> value symbol

  bool operator==(const FeatureStructure&) const = default;
};

enum class InconsistencyKind { Atomicity, Acyclicity, ValueClash };

const char* to_string(InconsistencyKind kind);

struct Inconsistency {
  InconsistencyKind kind;
  std::string witness;  // human-readable description of the offending terms
};

// Result of describe/unify: either a well-formed structure or the reason
// the closure broke.
struct DescribeResult {
  std::optional<FeatureStructure> fs;
  std::optional<Inconsistency> failure;

  bool ok() const { return fs.has_value(); }
};

// Extended transition function.  Absence is a value, not an error.
std::optional<NodeId> transit(const FeatureStructure& fs, NodeId start,
                              std::span<const std::string> path);

// Transit starting from a named node; absent if the name is undefined.
std::optional<NodeId> resolve(const FeatureStructure& fs,
                              const std::string& name,
                              std::span<const std::string> path);

struct WellFormedReport {
  std::vector<NodeId> atomic_violations;  // valued nodes with out-edges
  std::vector<NodeId> cycle_nodes;        // nodes on some transition cycle
  std::vector<NodeId> unreachable_nodes;  // not reachable from any name

  bool ok() const {
    return atomic_violations.empty() && cycle_nodes.empty() &&
           unreachable_nodes.empty();
  }
};

WellFormedReport check_well_formed(const FeatureStructure& fs);

bool satisfies(const FeatureStructure& fs, const Equation& eq);
bool supports(const FeatureStructure& fs, const EquationSet& eqs);

// The least structure supporting the set, computed by congruence closure
// over the path prefixes occurring in it.
DescribeResult describe(const EquationSet& eqs);

// Structural subsumption: existence of a node map commuting with names,
// transitions and values.
bool subsumes(const FeatureStructure& m1, const FeatureStructure& m2);
bool equivalent(const FeatureStructure& m1, const FeatureStructure& m2);

// Least upper bound under subsumption; inconsistency taxonomy as describe.
DescribeResult unify(const FeatureStructure& m1, const FeatureStructure& m2);

// Deterministic renumbering: breadth-first from names in sorted order,
// edges in sorted attribute order.  Isomorphic structures with equal name
// sets come out identical.
FeatureStructure canonical_form(const FeatureStructure& fs);

// A canonical equation set the structure supports and describes.
// Values sitting on nodes with no incoming attribute edge are not
// expressible in the equation language; such structures never arise from
// describe and are rejected.
EquationSet describing_equations(const FeatureStructure& fs);

// Canonical text dump (node/name/edge/value lines).
std::string dump_feature_structure(const FeatureStructure& fs);

std::string render_equation(const Equation& eq);

}  // namespace thfsg

#endif
