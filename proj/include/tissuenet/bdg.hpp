#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tissuenet/types.hpp"

namespace tissuenet {

/// New node next to `anchor`, also linked to each member of `extra`
/// (a subset of the anchor's neighbors).
struct InsertionPoint {
  ModuleId anchor;
  std::vector<ModuleId> extra;  // sorted

  auto operator<=>(const InsertionPoint&) const = default;
};

/// New node on edge anchor--pulled. The node always links both endpoints and
/// each common neighbor in `keep`; members of `keep` outside `retain` lose their
/// edge to `pulled`, which is thereby pulled away from them.
struct SplitPoint {
  ModuleId anchor;
  ModuleId pulled;
  std::vector<ModuleId> keep;    // sorted
  std::vector<ModuleId> retain;  // sorted subset of keep

  auto operator<=>(const SplitPoint&) const = default;
};

using BdgPlacement = std::variant<InsertionPoint, SplitPoint>;

std::string to_string(const BdgPlacement& p);

/// Undirected simple graph whose node degrees never exceed `bound`. Nodes are
/// module identifiers, so the allocation map is the identity on nodes.
class BdgGraph {
 public:
  explicit BdgGraph(unsigned bound);

  /// Throws SpatialError on self-loops, unknown endpoints or degree overflow.
  static BdgGraph from_edges(unsigned bound, std::span<const ModuleId> nodes,
                             std::span<const std::pair<ModuleId, ModuleId>> edges);

  unsigned bound() const { return bound_; }
  bool contains(ModuleId i) const { return adjacency_.count(i) != 0; }
  std::size_t size() const { return adjacency_.size(); }
  std::vector<ModuleId> nodes() const;
  /// Sorted neighbor list; throws SpatialError(unknown_node).
  const std::vector<ModuleId>& neighbors(ModuleId i) const;
  unsigned degree(ModuleId i) const { return static_cast<unsigned>(neighbors(i).size()); }
  bool adjacent(ModuleId i, ModuleId j) const;
  std::size_t edge_count() const;
  const std::map<ModuleId, std::vector<ModuleId>>& adjacency() const { return adjacency_; }

  bool operator==(const BdgGraph&) const = default;

 private:
  friend BdgGraph apply_insertion(const BdgGraph&, const InsertionPoint&, ModuleId);
  friend BdgGraph apply_split(const BdgGraph&, const SplitPoint&, ModuleId);
  friend BdgGraph remove_node(const BdgGraph&, ModuleId);

  void link(ModuleId a, ModuleId b);
  void unlink(ModuleId a, ModuleId b);

  unsigned bound_;
  std::map<ModuleId, std::vector<ModuleId>> adjacency_;
};

/// Degree bound, symmetry, no self-loops, no parallel edges.
bool satisfies_invariants(const BdgGraph& g);

std::vector<InsertionPoint> insertion_points(const BdgGraph& g, ModuleId i);
std::vector<SplitPoint> split_points(const BdgGraph& g, ModuleId i);

/// Positions offered next to `i`: insertion points, plus split points either
/// always (strict = false) or only when `i` is degree-saturated (strict = true).
std::vector<BdgPlacement> placements(const BdgGraph& g, ModuleId i, bool strict);

BdgGraph apply_insertion(const BdgGraph& g, const InsertionPoint& p, ModuleId k);
BdgGraph apply_split(const BdgGraph& g, const SplitPoint& s, ModuleId k);
BdgGraph apply_placement(const BdgGraph& g, const BdgPlacement& p, ModuleId k);
BdgGraph remove_node(const BdgGraph& g, ModuleId i);

/// Re-positions for `i`, computed on the graph without `i` and anchored at its
/// former neighbors. Applying one with k = i re-adds the node.
std::vector<BdgPlacement> migration_targets(const BdgGraph& g, ModuleId i, bool strict);

/// Shortest-path length; nullopt when disconnected.
std::optional<unsigned> distance(const BdgGraph& g, ModuleId i, ModuleId j);
/// Every node reachable from `i` (other than `i`) with its distance, sorted by id.
std::vector<std::pair<ModuleId, unsigned>> distances_from(const BdgGraph& g, ModuleId i);
/// 1/distance, 0 when disconnected or beyond `cutoff`.
double neighboring(const BdgGraph& g, ModuleId i, ModuleId j,
                   std::optional<unsigned> cutoff = std::nullopt);
std::size_t connected_components(const BdgGraph& g);

}  // namespace tissuenet
