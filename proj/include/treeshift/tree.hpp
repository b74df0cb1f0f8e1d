#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treeshift/address.hpp"

namespace treeshift {

enum class TreeKind { rooted, unrooted };

/// Finite window of a lazily generated tree.
///
/// Rooted trees: every vertex of depth <= `depth`. Unrooted trees: every
/// descendant of p^{ancestry}(anchor) whose generation relative to the anchor
/// is at most `depth`.
struct Truncation {
  std::size_t depth = 16;
  std::size_t ancestry = 16;
  std::size_t max_vertices = std::size_t{1} << 22;
};

using ArityRule = std::function<std::size_t(const VertexAddress&)>;
using WeightRule = std::function<double(const VertexAddress&)>;
/// For k >= 1: the child index of p^k(anchor) that is p^{k-1}(anchor).
using SpineRule = std::function<std::uint32_t(std::uint32_t)>;

/// Arity and weight depending on depth alone (rooted trees only). Enables
/// closed-form fiber sums: every vertex at depth d + n below a depth-d vertex
/// carries the same weight.
struct RadialProfile {
  std::function<std::size_t(std::size_t)> arity;
  std::function<double(std::size_t)> weight;
};

struct LabelCodec {
  std::function<std::optional<VertexAddress>(std::string_view)> resolve;
  std::function<std::optional<std::string>(const VertexAddress&)> name;
};

struct RawEdge {
  std::string parent;
  std::string child;
};

struct TreeDefinition {
  std::string name;
  TreeKind kind = TreeKind::rooted;
  std::string anchor_label = "anchor";
  ArityRule arity;
  WeightRule weight;
  SpineRule spine_child_index;
  std::optional<RadialProfile> radial;
  LabelCodec labels;
  /// Kept verbatim when the tree came from an explicit edge list, so that
  /// validate() can report violations the address scheme cannot express.
  std::vector<RawEdge> raw_edges;
  Truncation truncation;
};

/// Generator-backed directed tree. Immutable and cheap to copy; safe to
/// share between threads as long as the supplied rules are.
class TreeModel {
 public:
  explicit TreeModel(TreeDefinition def);

  const std::string& name() const { return def_->name; }
  TreeKind kind() const { return def_->kind; }
  bool is_rooted() const { return def_->kind == TreeKind::rooted; }
  const std::string& anchor_label() const { return def_->anchor_label; }
  const Truncation& default_truncation() const { return def_->truncation; }
  const RadialProfile* radial() const {
    return def_->radial ? &*def_->radial : nullptr;
  }
  const std::vector<RawEdge>& raw_edges() const { return def_->raw_edges; }

  /// Same rules, different default truncation.
  TreeModel with_truncation(const Truncation& trunc) const;

  // Raw rule lookups; `v` must be canonical.
  std::size_t arity(const VertexAddress& v) const { return def_->arity(v); }
  double weight(const VertexAddress& v) const { return def_->weight(v); }
  std::uint32_t spine_child_index(std::uint32_t k) const;

  /// Label or textual address to canonical address. Throws InvalidAddress.
  VertexAddress resolve(std::string_view label_or_address) const;
  /// Human-facing name: the label when one exists, the textual address otherwise.
  std::string display(const VertexAddress& v) const;

 private:
  std::shared_ptr<const TreeDefinition> def_;
};

/// Reduced address of the same vertex. Throws InvalidAddress when a child
/// index exceeds the arity or a rooted address has up > 0.
VertexAddress canonicalize(const VertexAddress& addr, const TreeModel& tree);

/// Throws InvalidAddress unless `v` is canonical and resolvable.
void require_resolvable(const VertexAddress& v, const TreeModel& tree);
bool is_resolvable(const VertexAddress& v, const TreeModel& tree);

std::vector<VertexAddress> children(const VertexAddress& v, const TreeModel& tree);
std::optional<VertexAddress> parent(const VertexAddress& v, const TreeModel& tree);

/// n-fold parent; nullopt once a rooted walk passes the root.
std::optional<VertexAddress> p_n(const VertexAddress& v, std::size_t n,
                                 const TreeModel& tree);

using VertexVisitor = std::function<void(const VertexAddress&)>;

inline constexpr std::size_t kDefaultFiberCap = std::size_t{1} << 24;

/// Visits every vertex exactly n generations below v, in canonical DFS order.
/// The address passed to the visitor is only valid during the call.
/// Throws EnumerationCapExceeded after `cap` visits.
void for_each_in_fiber(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                       const VertexVisitor& visit, std::size_t cap = kDefaultFiberCap);

std::vector<VertexAddress> chi_n(const VertexAddress& v, std::size_t n,
                                 const TreeModel& tree, std::size_t cap = kDefaultFiberCap);

/// Preorder walk over the truncation window (apex first).
void enumerate(const TreeModel& tree, const Truncation& trunc, const VertexVisitor& visit);
std::vector<VertexAddress> enumerate(const TreeModel& tree, const Truncation& trunc);

/// Apex of the truncation window: the root, or p^{ancestry}(anchor).
VertexAddress truncation_apex(const TreeModel& tree, const Truncation& trunc);

enum class ViolationKind {
  unique_parent,
  circuit,
  disconnected,
  zero_weight,
  invalid_address,
  spine_out_of_range,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string address;
  std::string message;
};

struct ValidationReport {
  std::size_t vertices_checked = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the directed-tree axioms and nonzero weights on the truncation.
ValidationReport validate(const TreeModel& tree, const Truncation& trunc);

}  // namespace treeshift
