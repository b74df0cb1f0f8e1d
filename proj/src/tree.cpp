#include "treeshift/tree.hpp"

#include <cmath>
#include <map>
#include <set>

#include "treeshift/errors.hpp"

namespace treeshift {

TreeModel::TreeModel(TreeDefinition def)
    : def_(std::make_shared<const TreeDefinition>(std::move(def))) {
  if (!def_->arity || !def_->weight) {
    throw Error("tree '" + def_->name + "' needs arity and weight rules");
  }
  if (def_->kind == TreeKind::unrooted && !def_->spine_child_index) {
    throw Error("unrooted tree '" + def_->name + "' needs a spine rule");
  }
}

TreeModel TreeModel::with_truncation(const Truncation& trunc) const {
  TreeDefinition copy = *def_;
  copy.truncation = trunc;
  return TreeModel(std::move(copy));
}

std::uint32_t TreeModel::spine_child_index(std::uint32_t k) const {
  if (is_rooted()) throw RootedTree("rooted trees have no spine");
  return def_->spine_child_index(k);
}

VertexAddress TreeModel::resolve(std::string_view label_or_address) const {
  if (label_or_address == def_->anchor_label) return {};
  if (!label_or_address.empty() && label_or_address.front() == '(') {
    VertexAddress addr;
    try {
      addr = parse_address(label_or_address);
    } catch (const ParseError& e) {
      throw InvalidAddress(e.what());
    }
    return canonicalize(addr, *this);
  }
  if (def_->labels.resolve) {
    if (auto addr = def_->labels.resolve(label_or_address)) {
      return canonicalize(*addr, *this);
    }
  }
  throw InvalidAddress("unknown vertex '" + std::string(label_or_address) + "' in tree '" +
                       def_->name + "'");
}

std::string TreeModel::display(const VertexAddress& v) const {
  if (v.is_anchor()) return def_->anchor_label;
  if (def_->labels.name) {
    if (auto label = def_->labels.name(v)) return *label;
  }
  return to_string(v);
}

namespace {

// Empty string when `addr` is canonical and every index is in range.
std::string resolution_error(const VertexAddress& addr, const TreeModel& tree) {
  if (tree.is_rooted() && addr.up != 0) {
    return "rooted tree address " + to_string(addr) + " has up > 0";
  }
  if (addr.up > 0 && !addr.path.empty() && addr.path[0] == tree.spine_child_index(addr.up)) {
    return "address " + to_string(addr) + " is not canonical";
  }
  VertexAddress cur{addr.up, {}};
  cur.path.reserve(addr.path.size());
  for (auto idx : addr.path) {
    if (idx >= tree.arity(cur)) {
      return "child index " + std::to_string(idx) + " out of range at " + to_string(cur) +
             " while resolving " + to_string(addr);
    }
    cur.path.push_back(idx);
  }
  return {};
}

}  // namespace

VertexAddress canonicalize(const VertexAddress& addr, const TreeModel& tree) {
  if (tree.is_rooted() && addr.up != 0) {
    throw InvalidAddress("rooted tree address " + to_string(addr) + " has up > 0");
  }
  VertexAddress out = addr;
  std::size_t drop = 0;
  while (out.up > 0 && drop < out.path.size() && out.path[drop] == tree.spine_child_index(out.up)) {
    if (out.path[drop] >= tree.arity(VertexAddress{out.up, {}})) {
      throw InvalidAddress("spine index out of range at " + to_string(VertexAddress{out.up, {}}));
    }
    --out.up;
    ++drop;
  }
  out.path.erase(out.path.begin(), out.path.begin() + static_cast<std::ptrdiff_t>(drop));
  if (auto err = resolution_error(out, tree); !err.empty()) throw InvalidAddress(err);
  return out;
}

bool is_resolvable(const VertexAddress& v, const TreeModel& tree) {
  try {
    return resolution_error(v, tree).empty();
  } catch (const Error&) {
    return false;
  }
}

void require_resolvable(const VertexAddress& v, const TreeModel& tree) {
  if (auto err = resolution_error(v, tree); !err.empty()) throw InvalidAddress(err);
}

std::vector<VertexAddress> children(const VertexAddress& v, const TreeModel& tree) {
  require_resolvable(v, tree);
  const std::size_t count = tree.arity(v);
  std::vector<VertexAddress> out;
  out.reserve(count);
  const bool on_spine = !tree.is_rooted() && v.up > 0 && v.path.empty();
  const std::uint32_t spine = on_spine ? tree.spine_child_index(v.up) : 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (on_spine && i == spine) {
      out.push_back(VertexAddress{v.up - 1, {}});
    } else {
      VertexAddress c = v;
      c.path.push_back(i);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::optional<VertexAddress> parent(const VertexAddress& v, const TreeModel& tree) {
  return p_n(v, 1, tree);
}

std::optional<VertexAddress> p_n(const VertexAddress& v, std::size_t n, const TreeModel& tree) {
  require_resolvable(v, tree);
  if (n <= v.path.size()) {
    return VertexAddress{v.up, {v.path.begin(), v.path.end() - static_cast<std::ptrdiff_t>(n)}};
  }
  if (tree.is_rooted()) return std::nullopt;
  return VertexAddress{static_cast<std::uint32_t>(v.up + (n - v.path.size())), {}};
}

namespace {

class FiberWalker {
 public:
  FiberWalker(const TreeModel& tree, const VertexVisitor& visit, std::size_t cap)
      : tree_(tree), visit_(visit), cap_(cap) {}

  void walk(VertexAddress& cur, std::size_t remaining) {
    if (remaining == 0) {
      if (++visited_ > cap_) {
        throw EnumerationCapExceeded("fiber enumeration exceeded cap of " + std::to_string(cap_) +
                                     " vertices");
      }
      visit_(cur);
      return;
    }
    const std::size_t count = tree_.arity(cur);
    const bool on_spine = !tree_.is_rooted() && cur.up > 0 && cur.path.empty();
    const std::uint32_t spine = on_spine ? tree_.spine_child_index(cur.up) : 0;
    for (std::uint32_t i = 0; i < count; ++i) {
      if (on_spine && i == spine) {
        --cur.up;
        walk(cur, remaining - 1);
        ++cur.up;
      } else {
        cur.path.push_back(i);
        walk(cur, remaining - 1);
        cur.path.pop_back();
      }
    }
  }

 private:
  const TreeModel& tree_;
  const VertexVisitor& visit_;
  std::size_t cap_;
  std::size_t visited_ = 0;
};

class PreorderWalker {
 public:
  PreorderWalker(const TreeModel& tree, const VertexVisitor& visit, std::size_t cap)
      : tree_(tree), visit_(visit), cap_(cap) {}

  void walk(VertexAddress& cur, std::size_t remaining) {
    if (++visited_ > cap_) {
      throw EnumerationCapExceeded("truncation enumeration exceeded cap of " +
                                   std::to_string(cap_) + " vertices");
    }
    visit_(cur);
    if (remaining == 0) return;
    const std::size_t count = tree_.arity(cur);
    const bool on_spine = !tree_.is_rooted() && cur.up > 0 && cur.path.empty();
    const std::uint32_t spine = on_spine ? tree_.spine_child_index(cur.up) : 0;
    for (std::uint32_t i = 0; i < count; ++i) {
      if (on_spine && i == spine) {
        --cur.up;
        walk(cur, remaining - 1);
        ++cur.up;
      } else {
        cur.path.push_back(i);
        walk(cur, remaining - 1);
        cur.path.pop_back();
      }
    }
  }

 private:
  const TreeModel& tree_;
  const VertexVisitor& visit_;
  std::size_t cap_;
  std::size_t visited_ = 0;
};

}  // namespace

void for_each_in_fiber(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                       const VertexVisitor& visit, std::size_t cap) {
  require_resolvable(v, tree);
  VertexAddress cur = v;
  cur.path.reserve(v.path.size() + n);
  FiberWalker(tree, visit, cap).walk(cur, n);
}

std::vector<VertexAddress> chi_n(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                                 std::size_t cap) {
  std::vector<VertexAddress> out;
  for_each_in_fiber(v, n, tree, [&](const VertexAddress& u) { out.push_back(u); }, cap);
  return out;
}

VertexAddress truncation_apex(const TreeModel& tree, const Truncation& trunc) {
  if (tree.is_rooted()) return {};
  return VertexAddress{static_cast<std::uint32_t>(trunc.ancestry), {}};
}

void enumerate(const TreeModel& tree, const Truncation& trunc, const VertexVisitor& visit) {
  VertexAddress cur = truncation_apex(tree, trunc);
  const std::size_t levels = trunc.depth + (tree.is_rooted() ? 0 : trunc.ancestry);
  PreorderWalker(tree, visit, trunc.max_vertices).walk(cur, levels);
}

std::vector<VertexAddress> enumerate(const TreeModel& tree, const Truncation& trunc) {
  std::vector<VertexAddress> out;
  enumerate(tree, trunc, [&](const VertexAddress& v) { out.push_back(v); });
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unique_parent: return "UniqueParentViolation";
    case ViolationKind::circuit: return "CircuitViolation";
    case ViolationKind::disconnected: return "DisconnectedViolation";
    case ViolationKind::zero_weight: return "ZeroWeightViolation";
    case ViolationKind::invalid_address: return "InvalidAddress";
    case ViolationKind::spine_out_of_range: return "SpineIndexViolation";
  }
  return "Unknown";
}

namespace {

void validate_raw_edges(const TreeModel& tree, ValidationReport& report) {
  const auto& edges = tree.raw_edges();
  if (edges.empty()) return;
  std::map<std::string, std::vector<std::string>> parents_of;
  std::map<std::string, std::vector<std::string>> adjacency;
  std::set<std::string> labels{tree.anchor_label()};
  for (const auto& e : edges) {
    parents_of[e.child].push_back(e.parent);
    adjacency[e.parent].push_back(e.child);
    labels.insert(e.parent);
    labels.insert(e.child);
    if (e.parent == e.child) {
      report.violations.push_back({ViolationKind::circuit, e.child, "self-loop edge"});
    }
  }
  for (const auto& [child, parents] : parents_of) {
    if (parents.size() > 1) {
      std::string msg = "vertex has " + std::to_string(parents.size()) + " parents:";
      for (const auto& p : parents) msg += " " + p;
      report.violations.push_back({ViolationKind::unique_parent, child, msg});
    }
  }
  if (tree.is_rooted() && parents_of.count(tree.anchor_label()) != 0) {
    report.violations.push_back(
        {ViolationKind::unique_parent, tree.anchor_label(), "root has a parent"});
  }

  // Directed circuits: iterative DFS with colors.
  std::map<std::string, int> color;
  for (const auto& start : labels) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = adjacency[node];
      if (next < out.size()) {
        const std::string child = out[next++];
        if (color[child] == 1) {
          report.violations.push_back(
              {ViolationKind::circuit, child, "directed circuit through " + node});
        } else if (color[child] == 0) {
          color[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }

  // Undirected connectivity to the anchor.
  std::map<std::string, std::vector<std::string>> undirected;
  for (const auto& e : edges) {
    undirected[e.parent].push_back(e.child);
    undirected[e.child].push_back(e.parent);
  }
  std::set<std::string> seen{tree.anchor_label()};
  std::vector<std::string> frontier{tree.anchor_label()};
  while (!frontier.empty()) {
    auto node = frontier.back();
    frontier.pop_back();
    for (const auto& next : undirected[node]) {
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  for (const auto& label : labels) {
    if (!seen.count(label)) {
      report.violations.push_back(
          {ViolationKind::disconnected, label, "not connected to " + tree.anchor_label()});
    }
  }
}

}  // namespace

ValidationReport validate(const TreeModel& tree, const Truncation& trunc) {
  ValidationReport report;
  validate_raw_edges(tree, report);

  if (!tree.is_rooted()) {
    for (std::uint32_t k = 1; k <= trunc.ancestry; ++k) {
      const VertexAddress spine_vertex{k, {}};
      try {
        if (tree.spine_child_index(k) >= tree.arity(spine_vertex)) {
          report.violations.push_back({ViolationKind::spine_out_of_range, to_string(spine_vertex),
                                       "spine child index exceeds arity"});
        }
      } catch (const std::exception& e) {
        report.violations.push_back(
            {ViolationKind::invalid_address, to_string(spine_vertex), e.what()});
      }
    }
    if (!report.ok()) return report;
  }

  const VertexAddress apex = truncation_apex(tree, trunc);
  const std::int64_t apex_generation = apex.generation();
  try {
    enumerate(tree, trunc, [&](const VertexAddress& v) {
      ++report.vertices_checked;
      const double mu = tree.weight(v);
      if (mu == 0.0) {
        report.violations.push_back(
            {ViolationKind::zero_weight, tree.display(v), "weight is zero"});
      } else if (!std::isfinite(mu)) {
        report.violations.push_back(
            {ViolationKind::zero_weight, tree.display(v), "weight is not a finite number"});
      }
      for (const auto& c : children(v, tree)) {
        auto back = parent(c, tree);
        if (!back || *back != v) {
          report.violations.push_back({ViolationKind::unique_parent, tree.display(c),
                                       "child of " + tree.display(v) + " reports another parent"});
        }
      }
      // Walking up must reach the apex without revisiting a vertex.
      const auto steps = static_cast<std::size_t>(v.generation() - apex_generation);
      auto top = p_n(v, steps, tree);
      if (!top || *top != apex) {
        report.violations.push_back(
            {ViolationKind::disconnected, tree.display(v), "parent chain misses the apex"});
      }
    });
  } catch (const EnumerationCapExceeded&) {
    throw;
  } catch (const std::exception& e) {
    report.violations.push_back({ViolationKind::invalid_address, "", e.what()});
  }
  return report;
}

}  // namespace treeshift
