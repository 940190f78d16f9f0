#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tissuenet/bundle.hpp"

namespace tissuenet {

/// Byte string: identifier-sorted module levels packed 4 bits per level,
/// followed by the backend's canonical spatial encoding. Equal keys iff equal
/// states of the same model.
using CanonicalKey = std::string;

CanonicalKey canonical_encode(const BundleState& state);
/// Inverse of canonical_encode; the model supplies the component count and
/// the spatial settings. Throws Error on malformed keys.
BundleState canonical_decode(const BundleSpec& spec, std::string_view key);

std::string to_hex(std::string_view bytes);

struct ExploreLimits {
  std::size_t max_states = 1'000'000;
};

struct GraphEdge {
  std::size_t source;
  Event event;
  std::size_t target;
};

/// Explored state graph. Node 0 is the initial state; node numbers follow
/// breadth-first discovery order.
class StateGraph {
 public:
  std::size_t size() const { return states_.size(); }
  std::size_t initial() const { return 0; }
  const BundleState& state(std::size_t node) const { return states_.at(node); }
  const CanonicalKey& key(std::size_t node) const { return keys_.at(node); }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  /// Indices into edges(), grouped by source node.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_.at(node); }
  std::optional<std::size_t> find(const CanonicalKey& key) const;
  bool truncated() const { return truncated_; }

  std::size_t add_node(CanonicalKey key, BundleState state);
  void add_edge(std::size_t source, Event event, std::size_t target);
  void mark_truncated() { truncated_ = true; }

 private:
  std::vector<BundleState> states_;
  std::vector<CanonicalKey> keys_;
  std::unordered_map<CanonicalKey, std::size_t> index_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  bool truncated_ = false;
};

/// Breadth-first fixed point of bundle successors from `initial`. Stops with
/// truncated() set once `max_states` nodes exist. `jobs` worker threads expand
/// each frontier; the result does not depend on `jobs`.
StateGraph explore(const BundleSpec& spec, const BundleState& initial, ExploreLimits limits = {},
                   unsigned jobs = 1);

using StatePredicate = std::function<bool(const BundleState&)>;

/// Shortest event trace from the initial node to a node satisfying `pred`.
std::optional<std::vector<Event>> query_reach(const StateGraph& graph, const StatePredicate& pred);

/// Binds a predicate over `C@i` levels, `alive(i)` and `count()`; throws SpecError.
StatePredicate make_predicate(const ModuleSpec& module, const Expr& expr);

/// Strongly connected components without outgoing edges, each sorted, listed
/// by smallest node. Throws TruncatedGraphError on a truncated graph.
std::vector<std::vector<std::size_t>> terminal_sccs(const StateGraph& graph);

/// Short one-line rendering of a state for labels and logs.
std::string compact_text(const BundleState& state, const ModuleSpec& module);

void export_dot(const StateGraph& graph, const ModuleSpec& module, std::ostream& os);
void export_json(const StateGraph& graph, const ModuleSpec& module, std::ostream& os);

}  // namespace tissuenet
