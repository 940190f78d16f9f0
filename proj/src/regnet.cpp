#include "tissuenet/regnet.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

namespace tissuenet {

bool is_valid_component_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

NetworkSpec::NetworkSpec(std::vector<ComponentDecl> components, std::vector<Expr> rules,
                         std::vector<std::string> sigma_names)
    : components_(std::move(components)), sigma_names_(std::move(sigma_names)) {
  if (components_.empty()) throw SpecError("a network needs at least one component");
  if (rules.size() != components_.size()) {
    throw SpecError("every component needs exactly one rule (" +
                    std::to_string(components_.size()) + " components, " +
                    std::to_string(rules.size()) + " rules)");
  }
  std::set<std::string> seen;
  for (const auto& c : components_) {
    if (!is_valid_component_name(c.name)) throw SpecError("invalid component name '" + c.name + "'");
    if (c.max_level > kMaxLevel) {
      throw SpecError("range of '" + c.name + "' exceeds the cap of " + std::to_string(kMaxLevel));
    }
    if (!seen.insert(c.name).second) throw SpecError("duplicate component '" + c.name + "'");
    names_.push_back(c.name);
  }
  for (const auto& s : sigma_names_) {
    if (!is_valid_component_name(s)) throw SpecError("invalid integration name '" + s + "'");
    if (!seen.insert(s).second) throw SpecError("duplicate name '" + s + "'");
  }

  ExprScope scope{names_, sigma_names_};
  std::vector<ExprIssue> issues;
  rules_.reserve(rules.size());
  for (const auto& r : rules) rules_.push_back(resolve(r, scope, issues));
  if (!issues.empty()) throw SpecError(issues.front().message);
}

std::optional<std::size_t> NetworkSpec::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool NetworkSpec::is_valid(const NetState& state) const {
  if (state.size() != components_.size()) return false;
  for (std::size_t g = 0; g < state.size(); ++g) {
    if (state[g] > components_[g].max_level) return false;
  }
  return true;
}

Level eval_target(const NetworkSpec& net, std::size_t g, const EvalContext& ctx) {
  auto value = evaluate(net.rule(g), ctx);
  auto max = static_cast<std::int64_t>(net.component(g).max_level);
  return static_cast<Level>(std::clamp<std::int64_t>(value, 0, max));
}

Level eval_target(const NetworkSpec& net, const NetState& state, std::size_t g) {
  return eval_target(net, g, NetStateContext(state));
}

std::vector<NetSuccessor> successors(const NetworkSpec& net, const NetState& state) {
  std::vector<NetSuccessor> out;
  NetStateContext ctx(state);
  for (std::size_t g = 0; g < net.size(); ++g) {
    Level next = step_toward(state[g], eval_target(net, g, ctx));
    if (next == state[g]) continue;
    NetState s = state;
    s[g] = next;
    out.push_back({g, std::move(s)});
  }
  return out;
}

std::optional<std::size_t> NetGraph::find(const NetState& state) const {
  auto it = std::find(nodes.begin(), nodes.end(), state);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

NetGraph reachable_graph(const NetworkSpec& net, const NetState& initial, std::size_t limit) {
  if (!net.is_valid(initial)) throw SpecError("initial state does not match the network");
  if (limit == 0) throw SpecError("state limit must be at least 1");

  NetGraph graph;
  std::map<NetState, std::size_t> index;
  std::deque<std::size_t> queue;
  graph.nodes.push_back(initial);
  index.emplace(initial, 0);
  queue.push_back(0);

  while (!queue.empty()) {
    std::size_t src = queue.front();
    queue.pop_front();
    auto next = successors(net, graph.nodes[src]);
    for (auto& succ : next) {
      auto it = index.find(succ.state);
      if (it == index.end()) {
        if (graph.nodes.size() == limit) throw NetLimitExceeded(limit, std::move(graph));
        std::size_t id = graph.nodes.size();
        it = index.emplace(succ.state, id).first;
        graph.nodes.push_back(std::move(succ.state));
        queue.push_back(id);
      }
      graph.edges.push_back({src, succ.component, it->second});
    }
  }
  return graph;
}

}  // namespace tissuenet
