#include "tissuenet/bdg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tissuenet/error.hpp"

namespace tissuenet {

namespace {

[[noreturn]] void unknown_node(ModuleId i) {
  throw SpatialError(SpatialError::Code::unknown_node, "node " + to_string(i) + " is not in the graph");
}

[[noreturn]] void infeasible(const std::string& why) {
  throw SpatialError(SpatialError::Code::infeasible, why);
}

bool contains_sorted(const std::vector<ModuleId>& v, ModuleId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::vector<ModuleId> common_neighbors(const BdgGraph& g, ModuleId i, ModuleId j) {
  std::vector<ModuleId> out;
  const auto& a = g.neighbors(i);
  const auto& b = g.neighbors(j);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Members of `items` selected by the bits of `mask`, in order.
std::vector<ModuleId> subset(const std::vector<ModuleId>& items, unsigned long mask) {
  std::vector<ModuleId> out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (mask & (1ul << k)) out.push_back(items[k]);
  }
  return out;
}

void join(std::ostream& os, const std::vector<ModuleId>& ids) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) os << ',';
    os << to_index(ids[k]);
  }
}

}  // namespace

std::string to_string(const BdgPlacement& p) {
  std::ostringstream os;
  if (const auto* ins = std::get_if<InsertionPoint>(&p)) {
    os << "next(" << to_index(ins->anchor) << ";";
    join(os, ins->extra);
    os << ")";
  } else {
    const auto& s = std::get<SplitPoint>(p);
    os << "split(" << to_index(s.anchor) << "-" << to_index(s.pulled) << ";";
    join(os, s.keep);
    os << ";";
    join(os, s.retain);
    os << ")";
  }
  return os.str();
}

BdgGraph::BdgGraph(unsigned bound) : bound_(bound) {
  if (bound < 2) infeasible("degree bound must be at least 2");
}

BdgGraph BdgGraph::from_edges(unsigned bound, std::span<const ModuleId> nodes,
                              std::span<const std::pair<ModuleId, ModuleId>> edges) {
  BdgGraph g(bound);
  for (auto n : nodes) {
    if (!g.adjacency_.emplace(n, std::vector<ModuleId>{}).second) {
      throw SpatialError(SpatialError::Code::duplicate_node, "duplicate node " + to_string(n));
    }
  }
  for (auto [a, b] : edges) {
    if (a == b) infeasible("self-loop on node " + to_string(a));
    if (!g.contains(a)) unknown_node(a);
    if (!g.contains(b)) unknown_node(b);
    if (g.adjacent(a, b)) infeasible("parallel edge " + to_string(a) + "-" + to_string(b));
    g.link(a, b);
    if (g.degree(a) > bound || g.degree(b) > bound) {
      infeasible("edge " + to_string(a) + "-" + to_string(b) + " exceeds the degree bound");
    }
  }
  return g;
}

std::vector<ModuleId> BdgGraph::nodes() const {
  std::vector<ModuleId> out;
  out.reserve(adjacency_.size());
  for (const auto& [id, adj] : adjacency_) out.push_back(id);
  return out;
}

const std::vector<ModuleId>& BdgGraph::neighbors(ModuleId i) const {
  auto it = adjacency_.find(i);
  if (it == adjacency_.end()) unknown_node(i);
  return it->second;
}

bool BdgGraph::adjacent(ModuleId i, ModuleId j) const { return contains_sorted(neighbors(i), j); }

std::size_t BdgGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& [id, adj] : adjacency_) total += adj.size();
  return total / 2;
}

void BdgGraph::link(ModuleId a, ModuleId b) {
  auto& na = adjacency_.at(a);
  na.insert(std::lower_bound(na.begin(), na.end(), b), b);
  auto& nb = adjacency_.at(b);
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
}

void BdgGraph::unlink(ModuleId a, ModuleId b) {
  auto& na = adjacency_.at(a);
  na.erase(std::lower_bound(na.begin(), na.end(), b));
  auto& nb = adjacency_.at(b);
  nb.erase(std::lower_bound(nb.begin(), nb.end(), a));
}

bool satisfies_invariants(const BdgGraph& g) {
  for (const auto& [id, adj] : g.adjacency()) {
    if (adj.size() > g.bound()) return false;
    if (!std::is_sorted(adj.begin(), adj.end())) return false;
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) return false;
    for (auto other : adj) {
      if (other == id || !g.contains(other)) return false;
      if (!contains_sorted(g.neighbors(other), id)) return false;
    }
  }
  return true;
}

std::vector<InsertionPoint> insertion_points(const BdgGraph& g, ModuleId i) {
  const auto& nbrs = g.neighbors(i);
  std::vector<InsertionPoint> out;
  if (nbrs.size() + 1 > g.bound()) return out;
  std::vector<ModuleId> open;  // neighbors that can take one more edge
  for (auto c : nbrs) {
    if (g.degree(c) + 1 <= g.bound()) open.push_back(c);
  }
  for (unsigned long mask = 0; mask < (1ul << open.size()); ++mask) {
    auto extra = subset(open, mask);
    if (extra.size() + 1 > g.bound()) continue;
    out.push_back({i, std::move(extra)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SplitPoint> split_points(const BdgGraph& g, ModuleId i) {
  std::vector<SplitPoint> out;
  for (auto j : g.neighbors(i)) {
    auto common = common_neighbors(g, i, j);
    for (unsigned long keep_mask = 0; keep_mask < (1ul << common.size()); ++keep_mask) {
      auto keep = subset(common, keep_mask);
      if (keep.size() + 2 > g.bound()) continue;
      std::vector<ModuleId> open;  // kept neighbors that may also stay linked to j
      for (auto c : keep) {
        if (g.degree(c) + 1 <= g.bound()) open.push_back(c);
      }
      for (unsigned long retain_mask = 0; retain_mask < (1ul << open.size()); ++retain_mask) {
        out.push_back({i, j, keep, subset(open, retain_mask)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BdgPlacement> placements(const BdgGraph& g, ModuleId i, bool strict) {
  std::vector<BdgPlacement> out;
  for (auto& p : insertion_points(g, i)) out.emplace_back(std::move(p));
  if (!strict || g.degree(i) >= g.bound()) {
    for (auto& s : split_points(g, i)) out.emplace_back(std::move(s));
  }
  return out;
}

BdgGraph apply_insertion(const BdgGraph& g, const InsertionPoint& p, ModuleId k) {
  if (g.contains(k)) {
    throw SpatialError(SpatialError::Code::duplicate_node, "node " + to_string(k) + " already exists");
  }
  if (g.degree(p.anchor) + 1 > g.bound()) infeasible("anchor " + to_string(p.anchor) + " is saturated");
  if (p.extra.size() + 1 > g.bound()) infeasible("too many extra neighbors");
  for (auto c : p.extra) {
    if (c == p.anchor || !g.adjacent(p.anchor, c)) {
      infeasible("node " + to_string(c) + " is not a neighbor of the anchor");
    }
    if (g.degree(c) + 1 > g.bound()) infeasible("node " + to_string(c) + " is saturated");
  }
  BdgGraph next = g;
  next.adjacency_.emplace(k, std::vector<ModuleId>{});
  next.link(k, p.anchor);
  for (auto c : p.extra) next.link(k, c);
  return next;
}

BdgGraph apply_split(const BdgGraph& g, const SplitPoint& s, ModuleId k) {
  if (g.contains(k)) {
    throw SpatialError(SpatialError::Code::duplicate_node, "node " + to_string(k) + " already exists");
  }
  if (!g.adjacent(s.anchor, s.pulled)) {
    infeasible("no edge " + to_string(s.anchor) + "-" + to_string(s.pulled));
  }
  if (s.keep.size() + 2 > g.bound()) infeasible("new node would exceed the degree bound");
  for (auto c : s.keep) {
    if (!g.adjacent(s.anchor, c) || !g.adjacent(s.pulled, c)) {
      infeasible("node " + to_string(c) + " is not a common neighbor of the split edge");
    }
  }
  for (auto c : s.retain) {
    if (!contains_sorted(s.keep, c)) infeasible("retained node " + to_string(c) + " is not kept");
    if (g.degree(c) + 1 > g.bound()) infeasible("node " + to_string(c) + " is saturated");
  }
  BdgGraph next = g;
  next.unlink(s.anchor, s.pulled);
  next.adjacency_.emplace(k, std::vector<ModuleId>{});
  next.link(k, s.anchor);
  next.link(k, s.pulled);
  for (auto c : s.keep) {
    next.link(k, c);
    if (!contains_sorted(s.retain, c)) next.unlink(c, s.pulled);
  }
  return next;
}

BdgGraph apply_placement(const BdgGraph& g, const BdgPlacement& p, ModuleId k) {
  if (const auto* ins = std::get_if<InsertionPoint>(&p)) return apply_insertion(g, *ins, k);
  return apply_split(g, std::get<SplitPoint>(p), k);
}

BdgGraph remove_node(const BdgGraph& g, ModuleId i) {
  BdgGraph next = g;
  auto adj = g.neighbors(i);
  for (auto other : adj) next.unlink(i, other);
  next.adjacency_.erase(i);
  return next;
}

std::vector<BdgPlacement> migration_targets(const BdgGraph& g, ModuleId i, bool strict) {
  const auto& former = g.neighbors(i);
  BdgGraph rest = remove_node(g, i);
  std::vector<BdgPlacement> out;
  for (auto anchor : former) {
    for (auto& p : placements(rest, anchor, strict)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::pair<ModuleId, unsigned>> distances_from(const BdgGraph& g, ModuleId i) {
  std::map<ModuleId, unsigned> dist;
  std::deque<ModuleId> queue{i};
  dist[i] = 0;
  g.neighbors(i);
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : g.neighbors(u)) {
      if (dist.emplace(v, dist[u] + 1).second) queue.push_back(v);
    }
  }
  dist.erase(i);
  return {dist.begin(), dist.end()};
}

std::optional<unsigned> distance(const BdgGraph& g, ModuleId i, ModuleId j) {
  if (!g.contains(j)) unknown_node(j);
  if (i == j) {
    g.neighbors(i);
    return 0u;
  }
  for (auto [id, d] : distances_from(g, i)) {
    if (id == j) return d;
  }
  return std::nullopt;
}

double neighboring(const BdgGraph& g, ModuleId i, ModuleId j, std::optional<unsigned> cutoff) {
  if (i == j) {
    throw SpatialError(SpatialError::Code::same_identifier,
                       "neighboring is undefined for a module and itself");
  }
  auto d = distance(g, i, j);
  if (!d || (cutoff && *d > *cutoff)) return 0.0;
  return 1.0 / *d;
}

std::size_t connected_components(const BdgGraph& g) {
  std::map<ModuleId, bool> seen;
  std::size_t count = 0;
  for (const auto& [start, adj] : g.adjacency()) {
    if (seen[start]) continue;
    ++count;
    std::deque<ModuleId> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
  }
  return count;
}

}  // namespace tissuenet
