#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tissuenet/error.hpp"
#include "tissuenet/expr.hpp"
#include "tissuenet/types.hpp"

namespace tissuenet {

struct ComponentDecl {
  std::string name;
  Level max_level = 1;
};

/// Components with their ranges and one regulation rule each. Rules may
/// reference integration functions by name when the network is the body of
/// a module; a plain network declares none. Immutable once built.
class NetworkSpec {
 public:
  /// Validates names and ranges and binds every rule; throws SpecError.
  NetworkSpec(std::vector<ComponentDecl> components, std::vector<Expr> rules,
              std::vector<std::string> sigma_names = {});

  std::size_t size() const { return components_.size(); }
  const ComponentDecl& component(std::size_t g) const { return components_.at(g); }
  const std::vector<ComponentDecl>& components() const { return components_; }
  const std::vector<std::string>& component_names() const { return names_; }
  const std::vector<std::string>& sigma_names() const { return sigma_names_; }
  const Expr& rule(std::size_t g) const { return rules_.at(g); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool is_valid(const NetState& state) const;

 private:
  std::vector<ComponentDecl> components_;
  std::vector<std::string> names_;
  std::vector<std::string> sigma_names_;
  std::vector<Expr> rules_;
};

bool is_valid_component_name(std::string_view name);

/// One unit toward the target, or no move at the target.
constexpr Level step_toward(Level current, Level target) {
  if (target > current) return static_cast<Level>(current + 1);
  if (target < current) return static_cast<Level>(current - 1);
  return current;
}

/// Target level of component `g`: its rule evaluated in `ctx`, clamped into range.
Level eval_target(const NetworkSpec& net, std::size_t g, const EvalContext& ctx);

/// Same for a plain network read from a bare state vector.
Level eval_target(const NetworkSpec& net, const NetState& state, std::size_t g);

/// Reads component levels from a NetState; used for plain networks.
class NetStateContext : public EvalContext {
 public:
  explicit NetStateContext(const NetState& state) : state_(state) {}
  std::int64_t level(std::size_t component) const override { return state_[component]; }

 private:
  const NetState& state_;
};

struct NetSuccessor {
  std::size_t component;
  NetState state;

  bool operator==(const NetSuccessor&) const = default;
};

/// Asynchronous successors: one per component not at its target, ordered by component.
std::vector<NetSuccessor> successors(const NetworkSpec& net, const NetState& state);

struct NetEdge {
  std::size_t source;
  std::size_t component;
  std::size_t target;

  bool operator==(const NetEdge&) const = default;
};

struct NetGraph {
  std::vector<NetState> nodes;  // nodes[0] is the initial state
  std::vector<NetEdge> edges;

  std::optional<std::size_t> find(const NetState& state) const;
};

class NetLimitExceeded : public Error {
 public:
  NetLimitExceeded(std::size_t limit, NetGraph partial)
      : Error("state limit of " + std::to_string(limit) + " exceeded"),
        partial_(std::move(partial)) {}

  const NetGraph& partial() const { return partial_; }

 private:
  NetGraph partial_;
};

/// Breadth-first closure of successors from `initial`. Throws NetLimitExceeded,
/// carrying the graph built so far, if more than `limit` states are found.
NetGraph reachable_graph(const NetworkSpec& net, const NetState& initial, std::size_t limit);

}  // namespace tissuenet
