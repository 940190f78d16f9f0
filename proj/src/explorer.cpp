#include "tissuenet/explorer.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "tissuenet/error.hpp"
#include "tissuenet/state_json.hpp"

namespace tissuenet {

namespace {

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

std::int64_t unzigzag(std::uint64_t v) {
  return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

class KeyReader {
 public:
  explicit KeyReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) throw Error("truncated canonical key");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      auto b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error("malformed varint in canonical key");
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

constexpr char kGridTag = 'G';
constexpr char kGraphTag = 'B';

}  // namespace

CanonicalKey canonical_encode(const BundleState& state) {
  CanonicalKey key;
  key.push_back(std::holds_alternative<GbfInterface>(state.spatial) ? kGridTag : kGraphTag);
  put_varint(key, state.levels.size());
  for (const auto& [id, levels] : state.levels) {
    put_varint(key, to_index(id));
    for (std::size_t g = 0; g < levels.size(); g += 2) {
      std::uint8_t lo = levels[g] & 0x0f;
      std::uint8_t hi = g + 1 < levels.size() ? (levels[g + 1] & 0x0f) : 0;
      key.push_back(static_cast<char>(lo | (hi << 4)));
    }
  }
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    for (const auto& [id, at] : iface->theta()) {
      put_varint(key, zigzag(at.a));
      put_varint(key, zigzag(at.b));
    }
  } else {
    for (const auto& [id, adj] : std::get<BdgGraph>(state.spatial).adjacency()) {
      put_varint(key, adj.size());
      for (auto n : adj) put_varint(key, to_index(n));
    }
  }
  return key;
}

BundleState canonical_decode(const BundleSpec& spec, std::string_view key) {
  KeyReader in(key);
  const std::size_t width = spec.module.network().size();
  char tag = static_cast<char>(in.byte());
  bool grid = std::holds_alternative<GridSpace>(spec.space);
  if (tag != (grid ? kGridTag : kGraphTag)) throw Error("canonical key is for another backend");

  BundleState state{{}, empty_space(spec)};
  std::vector<ModuleId> ids;
  auto count = in.varint();
  for (std::uint64_t m = 0; m < count; ++m) {
    auto id = module_id(static_cast<unsigned>(in.varint()));
    NetState levels(width);
    for (std::size_t g = 0; g < width; g += 2) {
      auto b = in.byte();
      levels[g] = b & 0x0f;
      if (g + 1 < width) levels[g + 1] = b >> 4;
    }
    ids.push_back(id);
    state.levels.emplace(id, std::move(levels));
  }
  if (grid) {
    auto iface = std::get<GbfInterface>(state.spatial);
    for (auto id : ids) {
      GbfCoord at;
      at.a = static_cast<int>(unzigzag(in.varint()));
      at.b = static_cast<int>(unzigzag(in.varint()));
      iface = iface.allocate(id, at);
    }
    state.spatial = std::move(iface);
  } else {
    std::vector<std::pair<ModuleId, ModuleId>> edges;
    for (auto id : ids) {
      auto degree = in.varint();
      for (std::uint64_t k = 0; k < degree; ++k) {
        auto other = module_id(static_cast<unsigned>(in.varint()));
        if (id < other) edges.emplace_back(id, other);
      }
    }
    state.spatial =
        BdgGraph::from_edges(std::get<GraphSpace>(spec.space).bound, ids, edges);
  }
  if (!in.done()) throw Error("trailing bytes in canonical key");
  return state;
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0x0f]);
  }
  return out;
}

std::optional<std::size_t> StateGraph::find(const CanonicalKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateGraph::add_node(CanonicalKey key, BundleState state) {
  std::size_t id = states_.size();
  index_.emplace(key, id);
  keys_.push_back(std::move(key));
  states_.push_back(std::move(state));
  out_.emplace_back();
  return id;
}

void StateGraph::add_edge(std::size_t source, Event event, std::size_t target) {
  out_.at(source).push_back(edges_.size());
  edges_.push_back({source, std::move(event), target});
}

namespace {

struct Expansion {
  std::vector<Transition> transitions;
  std::vector<CanonicalKey> keys;
};

Expansion expand(const BundleSpec& spec, const BundleState& state) {
  Expansion e;
  e.transitions = successors(spec, state);
  e.keys.reserve(e.transitions.size());
  for (const auto& t : e.transitions) e.keys.push_back(canonical_encode(t.state));
  return e;
}

std::vector<Expansion> expand_frontier(const BundleSpec& spec, const StateGraph& graph,
                                       const std::vector<std::size_t>& frontier, unsigned jobs) {
  std::vector<Expansion> out(frontier.size());
  unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(frontier.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < frontier.size(); ++k) out[k] = expand(spec, graph.state(frontier[k]));
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < frontier.size(); k += workers) {
            out[k] = expand(spec, graph.state(frontier[k]));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

StateGraph explore(const BundleSpec& spec, const BundleState& initial, ExploreLimits limits,
                   unsigned jobs) {
  if (limits.max_states == 0) throw SpecError("max_states must be at least 1");
  check_state(spec, initial);

  StateGraph graph;
  graph.add_node(canonical_encode(initial), initial);
  std::vector<std::size_t> frontier{0};

  // Expansion of a frontier runs in parallel; merging is sequential in
  // frontier order, so numbering and edge order match the one-worker run.
  while (!frontier.empty() && !graph.truncated()) {
    auto expansions = expand_frontier(spec, graph, frontier, jobs);
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      auto& e = expansions[k];
      for (std::size_t t = 0; t < e.transitions.size(); ++t) {
        auto target = graph.find(e.keys[t]);
        if (!target) {
          if (graph.size() >= limits.max_states) {
            graph.mark_truncated();
            continue;
          }
          target = graph.add_node(std::move(e.keys[t]), std::move(e.transitions[t].state));
          next.push_back(*target);
        }
        graph.add_edge(frontier[k], std::move(e.transitions[t].event), *target);
      }
    }
    frontier = std::move(next);
  }
  return graph;
}

std::optional<std::vector<Event>> query_reach(const StateGraph& graph, const StatePredicate& pred) {
  if (graph.size() == 0) return std::nullopt;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(graph.size(), kNone);  // edge index that discovered a node
  std::vector<bool> seen(graph.size(), false);
  std::deque<std::size_t> queue{graph.initial()};
  seen[graph.initial()] = true;

  while (!queue.empty()) {
    auto node = queue.front();
    queue.pop_front();
    if (pred(graph.state(node))) {
      std::vector<Event> trace;
      for (auto n = node; via[n] != kNone; n = graph.edges()[via[n]].source) {
        trace.push_back(graph.edges()[via[n]].event);
      }
      std::reverse(trace.begin(), trace.end());
      return trace;
    }
    for (auto e : graph.out_edges(node)) {
      auto target = graph.edges()[e].target;
      if (!seen[target]) {
        seen[target] = true;
        via[target] = e;
        queue.push_back(target);
      }
    }
  }
  return std::nullopt;
}

namespace {

class PredicateContext : public EvalContext {
 public:
  explicit PredicateContext(const BundleState& state) : state_(state) {}

  std::int64_t level_at(std::size_t component, ModuleId module) const override {
    auto it = state_.levels.find(module);
    return it == state_.levels.end() ? 0 : it->second[component];
  }
  bool alive(ModuleId module) const override { return state_.levels.count(module) != 0; }
  std::int64_t module_count() const override {
    return static_cast<std::int64_t>(state_.levels.size());
  }

 private:
  const BundleState& state_;
};

}  // namespace

StatePredicate make_predicate(const ModuleSpec& module, const Expr& expr) {
  ExprScope scope{module.network().component_names(), {}, true, false};
  std::vector<ExprIssue> issues;
  Expr bound = resolve(expr, scope, issues);
  if (!issues.empty()) throw SpecError(issues.front().message);
  return [bound](const BundleState& state) { return evaluate(bound, PredicateContext(state)) != 0; };
}

std::vector<std::vector<std::size_t>> terminal_sccs(const StateGraph& graph) {
  if (graph.truncated()) throw TruncatedGraphError("terminal SCCs need a complete state graph");
  const std::size_t n = graph.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> sccs;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };

  // Iterative Tarjan; state spaces can be far deeper than the call stack.
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const auto& out = graph.out_edges(frame.node);
      if (frame.next_edge < out.size()) {
        auto w = graph.edges()[out[frame.next_edge++]].target;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[frame.node] = std::min(low[frame.node], index[w]);
        }
        continue;
      }
      auto v = frame.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = sccs.size();
          members.push_back(w);
        } while (w != v);
        sccs.push_back(std::move(members));
      }
    }
  }

  std::vector<bool> closed(sccs.size(), true);
  for (const auto& e : graph.edges()) {
    if (comp[e.source] != comp[e.target]) closed[comp[e.source]] = false;
  }
  std::vector<std::vector<std::size_t>> terminal;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    if (!closed[c]) continue;
    std::sort(sccs[c].begin(), sccs[c].end());
    terminal.push_back(std::move(sccs[c]));
  }
  std::sort(terminal.begin(), terminal.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return terminal;
}

std::string compact_text(const BundleState& state, const ModuleSpec&) {
  std::ostringstream os;
  bool first = true;
  const auto* iface = std::get_if<GbfInterface>(&state.spatial);
  const auto* graph = std::get_if<BdgGraph>(&state.spatial);
  for (const auto& [id, levels] : state.levels) {
    if (!first) os << ' ';
    first = false;
    os << to_index(id);
    if (iface) os << '@' << format_location(iface->location(id));
    os << '[';
    for (std::size_t g = 0; g < levels.size(); ++g) {
      if (g) os << ',';
      os << static_cast<int>(levels[g]);
    }
    os << ']';
    if (graph) {
      os << '{';
      const auto& adj = graph->neighbors(id);
      for (std::size_t k = 0; k < adj.size(); ++k) {
        if (k) os << ',';
        os << to_index(adj[k]);
      }
      os << '}';
    }
  }
  if (first) os << "(empty)";
  return os.str();
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void export_dot(const StateGraph& graph, const ModuleSpec& module, std::ostream& os) {
  os << "digraph states {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t n = 0; n < graph.size(); ++n) {
    os << "  n" << n << " [label=\"" << dot_escape(compact_text(graph.state(n), module)) << "\"";
    if (n == graph.initial()) os << ", penwidth=2";
    os << "];\n";
  }
  for (const auto& e : graph.edges()) {
    os << "  n" << e.source << " -> n" << e.target << " [label=\""
       << dot_escape(to_string(e.event, module)) << "\"];\n";
  }
  os << "}\n";
}

void export_json(const StateGraph& graph, const ModuleSpec& module, std::ostream& os) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < graph.size(); ++n) {
    auto state = state_to_json(module, graph.state(n));
    nodes.push_back({{"id", n},
                     {"key", to_hex(graph.key(n))},
                     {"levels", std::move(state["levels"])},
                     {"spatial", std::move(state["spatial"])}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"src", e.source}, {"event", event_to_json(module, e.event)}, {"dst", e.target}});
  }
  nlohmann::json doc = {{"initial", graph.initial()},
                        {"truncated", graph.truncated()},
                        {"nodes", std::move(nodes)},
                        {"edges", std::move(edges)}};
  os << doc.dump(1) << '\n';
}

}  // namespace tissuenet
