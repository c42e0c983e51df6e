#include "thfsg/feature_structure.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace thfsg {

const char* to_string(InconsistencyKind kind) {
  switch (kind) {
    case InconsistencyKind::Atomicity: return "atomicity";
    case InconsistencyKind::Acyclicity: return "acyclicity";
    case InconsistencyKind::ValueClash: return "value_clash";
  }
  return "unknown";
}

std::optional<NodeId> transit(const FeatureStructure& fs, NodeId start,
                              std::span<const std::string> path) {
  NodeId q = start;
  for (const auto& attr : path) {
    if (q >= fs.edges.size()) return std::nullopt;
    auto it = fs.edges[q].find(attr);
    if (it == fs.edges[q].end()) return std::nullopt;
    q = it->second;
  }
  return q;
}

std::optional<NodeId> resolve(const FeatureStructure& fs,
                              const std::string& name,
                              std::span<const std::string> path) {
  auto it = fs.names.find(name);
  if (it == fs.names.end()) return std::nullopt;
  return transit(fs, it->second, path);
}

WellFormedReport check_well_formed(const FeatureStructure& fs) {
  WellFormedReport report;
  for (const auto& [q, v] : fs.values) {
    if (q < fs.edges.size() && !fs.edges[q].empty())
      report.atomic_violations.push_back(q);
  }
  // Cycle detection by coloring.
  std::vector<int> color(fs.node_count, 0);  // 0 white, 1 on stack, 2 done
  std::vector<bool> on_cycle(fs.node_count, false);
  std::vector<std::pair<NodeId, std::map<std::string, NodeId>::const_iterator>>
      stack;
  for (NodeId root = 0; root < fs.node_count; ++root) {
    if (color[root] != 0) continue;
    color[root] = 1;
    stack.push_back({root, fs.edges[root].begin()});
    while (!stack.empty()) {
      auto& [q, it] = stack.back();
      if (it == fs.edges[q].end()) {
        color[q] = 2;
        stack.pop_back();
        continue;
      }
      NodeId next = (it++)->second;
      if (color[next] == 0) {
        color[next] = 1;
        stack.push_back({next, fs.edges[next].begin()});
      } else if (color[next] == 1) {
        // Everything from `next` up the stack is on a cycle.
        bool seen = false;
        for (const auto& frame : stack) {
          if (frame.first == next) seen = true;
          if (seen) on_cycle[frame.first] = true;
        }
      }
    }
  }
  for (NodeId q = 0; q < fs.node_count; ++q)
    if (on_cycle[q]) report.cycle_nodes.push_back(q);
  // Reachability from named nodes.
  std::vector<bool> reached(fs.node_count, false);
  std::deque<NodeId> queue;
  for (const auto& [name, q] : fs.names) {
    if (q < fs.node_count && !reached[q]) {
      reached[q] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    NodeId q = queue.front();
    queue.pop_front();
    for (const auto& [attr, next] : fs.edges[q]) {
      if (!reached[next]) {
        reached[next] = true;
        queue.push_back(next);
      }
    }
  }
  for (NodeId q = 0; q < fs.node_count; ++q)
    if (!reached[q]) report.unreachable_nodes.push_back(q);
  return report;
}

bool satisfies(const FeatureStructure& fs, const Equation& eq) {
  if (const auto* pe = std::get_if<PathEquation>(&eq)) {
    auto lhs = resolve(fs, pe->lhs_name, pe->lhs_path);
    auto rhs = resolve(fs, pe->rhs_name, pe->rhs_path);
    return lhs.has_value() && rhs.has_value() && *lhs == *rhs;
  }
  const auto& ve = std::get<ValueEquation>(eq);
  auto node = resolve(fs, ve.name, ve.path);
  if (!node) return false;
  auto it = fs.values.find(*node);
  return it != fs.values.end() && it->second == ve.value;
}

bool supports(const FeatureStructure& fs, const EquationSet& eqs) {
  return std::all_of(eqs.begin(), eqs.end(),
                     [&](const Equation& eq) { return satisfies(fs, eq); });
}

namespace {

std::string render_term(const std::string& name, const Path& path) {
  std::string out = name;
  for (const auto& a : path) {
    out += ' ';
    out += a;
  }
  return out;
}

// Congruence closure over the path prefixes occurring in an equation set.
// Classes are the future nodes; merging two classes merges their
// same-attribute successors.
class Closure {
 public:
  // Returns the class of (name, full path), creating prefix terms and the
  // edges between consecutive prefixes along the way.
  int add_term(const std::string& name, const Path& path) {
    int cls = class_of_term(name, {});
    Path prefix;
    for (const auto& attr : path) {
      prefix.push_back(attr);
      int child = class_of_term(name, prefix);
      link(cls, attr, child);
      cls = find(child);
    }
    return find(cls);
  }

  bool merge(int a, int b) {
    pending_.push_back({a, b});
    return drain();
  }

  bool set_value(int cls, const std::string& value, const std::string& term) {
    cls = find(cls);
    if (values_[cls] && *values_[cls] != value) {
      fail(InconsistencyKind::ValueClash,
           "'" + repr_[cls] + "': #" + *values_[cls] + " vs #" + value +
               " (from '" + term + "')");
      return false;
    }
    values_[cls] = value;
    return true;
  }

  bool failed() const { return failure_.has_value(); }
  const Inconsistency& failure() const { return *failure_; }

  // Post-closure checks (atomicity, acyclicity) and model construction.
  DescribeResult build(const std::vector<std::string>& names);

 private:
  struct Pair {
    int a, b;
  };

  int class_of_term(const std::string& name, const Path& path) {
    auto key = std::make_pair(name, path);
    auto it = term_class_.find(key);
    if (it != term_class_.end()) return find(it->second);
    int id = static_cast<int>(parent_.size());
    parent_.push_back(id);
    succ_.emplace_back();
    values_.emplace_back();
    repr_.push_back(render_term(name, path));
    term_class_.emplace(std::move(key), id);
    if (path.empty()) name_class_[name] = id;
    return id;
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void link(int from, const std::string& attr, int to) {
    from = find(from);
    to = find(to);
    auto it = succ_[from].find(attr);
    if (it == succ_[from].end()) {
      succ_[from][attr] = to;
    } else if (find(it->second) != to) {
      pending_.push_back({it->second, to});
      drain();
    }
  }

  bool drain() {
    while (!pending_.empty() && !failed()) {
      auto [a, b] = pending_.back();
      pending_.pop_back();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      // Union by successor-map size keeps merges near-linear.
      if (succ_[a].size() < succ_[b].size()) std::swap(a, b);
      parent_[b] = a;
      if (values_[b]) {
        if (values_[a] && *values_[a] != *values_[b]) {
          fail(InconsistencyKind::ValueClash,
               "'" + repr_[a] + "': #" + *values_[a] + " vs #" + *values_[b] +
                   " (via '" + repr_[b] + "')");
          return false;
        }
        if (!values_[a]) values_[a] = values_[b];
      }
      for (auto& [attr, child] : succ_[b]) {
        auto it = succ_[a].find(attr);
        if (it == succ_[a].end())
          succ_[a][attr] = child;
        else if (find(it->second) != find(child))
          pending_.push_back({it->second, child});
      }
    }
    return !failed();
  }

  void fail(InconsistencyKind kind, std::string witness) {
    if (!failure_) failure_ = Inconsistency{kind, std::move(witness)};
  }

  std::map<std::pair<std::string, Path>, int> term_class_;
  std::map<std::string, int> name_class_;
  std::vector<int> parent_;
  std::vector<std::map<std::string, int>> succ_;
  std::vector<std::optional<std::string>> values_;
  std::vector<std::string> repr_;
  std::vector<Pair> pending_;
  std::optional<Inconsistency> failure_;
};

DescribeResult Closure::build(const std::vector<std::string>& names) {
  // Atomicity: a valued class may not have successors.
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    int cls = find(static_cast<int>(i));
    if (static_cast<std::size_t>(cls) != i) continue;
    if (values_[cls] && !succ_[cls].empty()) {
      return {std::nullopt,
              Inconsistency{InconsistencyKind::Atomicity,
                            "'" + repr_[cls] + "' has value #" + *values_[cls] +
                                " and attribute '" + succ_[cls].begin()->first +
                                "'"}};
    }
  }
  // Acyclicity over class-level edges.
  std::map<int, int> color;
  std::vector<int> order;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i))
      order.push_back(static_cast<int>(i));
  std::vector<std::pair<int, std::map<std::string, int>::const_iterator>> st;
  for (int root : order) {
    if (color[root] != 0) continue;
    color[root] = 1;
    st.clear();
    st.push_back({root, succ_[root].begin()});
    while (!st.empty()) {
      auto& [cls, it] = st.back();
      if (it == succ_[cls].end()) {
        color[cls] = 2;
        st.pop_back();
        continue;
      }
      int next = find((it++)->second);
      if (color[next] == 1) {
        std::string path = repr_[next];
        return {std::nullopt,
                Inconsistency{InconsistencyKind::Acyclicity,
                              "cycle through '" + path + "'"}};
      }
      if (color[next] == 0) {
        color[next] = 1;
        st.push_back({next, succ_[next].begin()});
      }
    }
  }
  // Assemble the structure.
  FeatureStructure fs;
  std::map<int, NodeId> node_of;
  for (int cls : order) {
    node_of[cls] = fs.node_count++;
  }
  fs.edges.resize(fs.node_count);
  for (int cls : order) {
    NodeId q = node_of[cls];
    for (const auto& [attr, child] : succ_[cls])
      fs.edges[q][attr] = node_of[find(child)];
    if (values_[cls]) fs.values[q] = *values_[cls];
  }
  for (const auto& name : names) fs.names[name] = node_of[find(name_class_[name])];
  return {canonical_form(fs), std::nullopt};
}

DescribeResult describe_impl(const EquationSet& eqs) {
  Closure closure;
  std::set<std::string> names;
  for (const Equation& eq : eqs) {
    if (const auto* pe = std::get_if<PathEquation>(&eq)) {
      int lhs = closure.add_term(pe->lhs_name, pe->lhs_path);
      int rhs = closure.add_term(pe->rhs_name, pe->rhs_path);
      names.insert(pe->lhs_name);
      names.insert(pe->rhs_name);
      if (!closure.merge(lhs, rhs)) break;
    } else {
      const auto& ve = std::get<ValueEquation>(eq);
      int cls = closure.add_term(ve.name, ve.path);
      names.insert(ve.name);
      if (!closure.set_value(cls, ve.value, render_term(ve.name, ve.path)))
        break;
    }
  }
  if (closure.failed()) return {std::nullopt, closure.failure()};
  return closure.build(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace

DescribeResult describe(const EquationSet& eqs) { return describe_impl(eqs); }

bool subsumes(const FeatureStructure& m1, const FeatureStructure& m2) {
  std::vector<std::optional<NodeId>> h(m1.node_count);
  std::deque<NodeId> queue;
  for (const auto& [name, q1] : m1.names) {
    auto it = m2.names.find(name);
    if (it == m2.names.end()) return false;
    if (h[q1]) {
      if (*h[q1] != it->second) return false;
    } else {
      h[q1] = it->second;
      queue.push_back(q1);
    }
  }
  while (!queue.empty()) {
    NodeId q1 = queue.front();
    queue.pop_front();
    NodeId q2 = *h[q1];
    for (const auto& [attr, c1] : m1.edges[q1]) {
      auto it = m2.edges[q2].find(attr);
      if (it == m2.edges[q2].end()) return false;
      if (h[c1]) {
        if (*h[c1] != it->second) return false;
      } else {
        h[c1] = it->second;
        queue.push_back(c1);
      }
    }
  }
  for (const auto& [q1, v] : m1.values) {
    if (!h[q1]) return false;  // cannot happen on describable inputs
    auto it = m2.values.find(*h[q1]);
    if (it == m2.values.end() || it->second != v) return false;
  }
  return true;
}

bool equivalent(const FeatureStructure& m1, const FeatureStructure& m2) {
  return subsumes(m1, m2) && subsumes(m2, m1);
}

EquationSet describing_equations(const FeatureStructure& fs) {
  // Canonical access term per node: breadth-first from names in sorted
  // order, edges in sorted attribute order.
  std::vector<std::optional<std::pair<std::string, Path>>> term(fs.node_count);
  std::deque<NodeId> queue;
  EquationSet eqs;
  for (const auto& [name, q] : fs.names) {
    if (!term[q]) {
      term[q] = std::make_pair(name, Path{});
      queue.push_back(q);
    } else if (term[q]->first != name || !term[q]->second.empty()) {
      eqs.push_back(PathEquation{name, {}, term[q]->first, term[q]->second});
    }
  }
  std::vector<std::pair<NodeId, std::string>> extra_edges;  // non-tree
  while (!queue.empty()) {
    NodeId q = queue.front();
    queue.pop_front();
    for (const auto& [attr, c] : fs.edges[q]) {
      if (!term[c]) {
        Path p = term[q]->second;
        p.push_back(attr);
        term[c] = std::make_pair(term[q]->first, std::move(p));
        queue.push_back(c);
      } else {
        extra_edges.push_back({q, attr});
      }
    }
  }
  for (const auto& [q, attr] : extra_edges) {
    NodeId c = fs.edges[q].at(attr);
    Path p = term[q]->second;
    p.push_back(attr);
    eqs.push_back(
        PathEquation{term[q]->first, p, term[c]->first, term[c]->second});
  }
  for (const auto& [q, v] : fs.values) {
    if (!term[q]) continue;
    if (!term[q]->second.empty()) {
      eqs.push_back(ValueEquation{term[q]->first, term[q]->second, v});
      continue;
    }
    // Named valued node: find any incoming attribute edge to keep the
    // value-equation path nonempty.
    bool emitted = false;
    for (NodeId p = 0; p < fs.node_count && !emitted; ++p) {
      for (const auto& [attr, c] : fs.edges[p]) {
        if (c == q && term[p]) {
          Path path = term[p]->second;
          path.push_back(attr);
          eqs.push_back(ValueEquation{term[p]->first, path, v});
          emitted = true;
          break;
        }
      }
    }
    if (!emitted)
      throw std::invalid_argument(
          "value on a node with no incoming attribute edge is not "
          "expressible as equations");
  }
  // Pin bare leaves so description recreates them.
  for (NodeId q = 0; q < fs.node_count; ++q) {
    if (!term[q]) continue;  // unreachable node in a raw structure
    if (fs.edges[q].empty() && !fs.values.count(q)) {
      eqs.push_back(PathEquation{term[q]->first, term[q]->second,
                                 term[q]->first, term[q]->second});
    }
  }
  return eqs;
}

DescribeResult unify(const FeatureStructure& m1, const FeatureStructure& m2) {
  EquationSet eqs = describing_equations(m1);
  EquationSet eqs2 = describing_equations(m2);
  eqs.insert(eqs.end(), eqs2.begin(), eqs2.end());
  return describe(eqs);
}

FeatureStructure canonical_form(const FeatureStructure& fs) {
  std::vector<std::optional<NodeId>> renumber(fs.node_count);
  std::deque<NodeId> queue;
  NodeId next_id = 0;
  for (const auto& [name, q] : fs.names) {
    if (!renumber[q]) {
      renumber[q] = next_id++;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    NodeId q = queue.front();
    queue.pop_front();
    for (const auto& [attr, c] : fs.edges[q]) {
      if (!renumber[c]) {
        renumber[c] = next_id++;
        queue.push_back(c);
      }
    }
  }
  // Keep unreachable nodes (raw structures only) at the tail, stable.
  for (NodeId q = 0; q < fs.node_count; ++q)
    if (!renumber[q]) renumber[q] = next_id++;
  FeatureStructure out;
  out.node_count = fs.node_count;
  out.edges.resize(fs.node_count);
  for (NodeId q = 0; q < fs.node_count; ++q) {
    NodeId nq = *renumber[q];
    for (const auto& [attr, c] : fs.edges[q]) out.edges[nq][attr] = *renumber[c];
  }
  for (const auto& [q, v] : fs.values) out.values[*renumber[q]] = v;
  for (const auto& [name, q] : fs.names) out.names[name] = *renumber[q];
  return out;
}

std::string dump_feature_structure(const FeatureStructure& fs) {
  FeatureStructure c = canonical_form(fs);
  std::ostringstream out;
  for (NodeId q = 0; q < c.node_count; ++q) out << "node " << q << "\n";
  for (const auto& [name, q] : c.names)
    out << "name " << name << " -> " << q << "\n";
  for (NodeId q = 0; q < c.node_count; ++q)
    for (const auto& [attr, dst] : c.edges[q])
      out << "edge " << q << " " << attr << " " << dst << "\n";
  for (const auto& [q, v] : c.values) out << "value " << q << " #" << v << "\n";
  return out.str();
}

std::string render_equation(const Equation& eq) {
  if (const auto* pe = std::get_if<PathEquation>(&eq)) {
    return render_term(pe->lhs_name, pe->lhs_path) + " = " +
           render_term(pe->rhs_name, pe->rhs_path);
  }
  const auto& ve = std::get<ValueEquation>(eq);
  return render_term(ve.name, ve.path) + " = #" + ve.value;
}

}  // namespace thfsg
