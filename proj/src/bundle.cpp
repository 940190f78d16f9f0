#include "tissuenet/bundle.hpp"

#include <algorithm>
#include <set>

#include "tissuenet/error.hpp"

namespace tissuenet {

const char* to_string(IntegrationKind kind) {
  switch (kind) {
    case IntegrationKind::max_round: return "max_round";
    case IntegrationKind::min_round: return "min_round";
    case IntegrationKind::sum_clamp: return "sum_clamp";
  }
  return "?";
}

namespace {

std::vector<std::string> names_of(const std::vector<IntegrationDecl>& decls) {
  std::vector<std::string> out;
  for (const auto& d : decls) out.push_back(d.name);
  return out;
}

Expr resolve_guard(const Expr& e, const NetworkSpec& net, const char* what) {
  ExprScope scope{net.component_names(), net.sigma_names()};
  std::vector<ExprIssue> issues;
  Expr out = resolve(e, scope, issues);
  if (!issues.empty()) throw SpecError(std::string(what) + " guard: " + issues.front().message);
  return out;
}

}  // namespace

ModuleSpec::ModuleSpec(std::vector<ComponentDecl> components, std::vector<Expr> rules,
                       std::vector<IntegrationDecl> integrations, TransformSpec transforms)
    : network_(std::move(components), std::move(rules), names_of(integrations)) {
  for (const auto& d : integrations) {
    auto source = network_.index_of(d.source);
    if (!source) {
      throw SpecError("integration '" + d.name + "' reads unknown component '" + d.source + "'");
    }
    integrations_.push_back({d.name, *source, d.kind});
  }
  if (transforms.apoptosis) {
    transforms_.apoptosis = resolve_guard(*transforms.apoptosis, network_, "apoptosis");
  }
  if (transforms.migration) {
    transforms_.migration = Guard{resolve_guard(transforms.migration->condition, network_, "migration"),
                                  transforms.migration->per_location};
  }
  if (transforms.division) {
    transforms_.division = Guard{resolve_guard(transforms.division->condition, network_, "division"),
                                 transforms.division->per_location};
  }
}

ModuleSpec ModuleSpec::from_network(const NetworkSpec& net) {
  if (!net.sigma_names().empty()) throw SpecError("a plain network cannot reference integrations");
  std::vector<Expr> rules;
  for (std::size_t g = 0; g < net.size(); ++g) rules.push_back(net.rule(g));
  return ModuleSpec(net.components(), std::move(rules));
}

SpatialState empty_space(const BundleSpec& spec) {
  if (const auto* grid = std::get_if<GridSpace>(&spec.space)) {
    return GbfInterface(grid->kind, grid->cutoff);
  }
  return BdgGraph(std::get<GraphSpace>(spec.space).bound);
}

void check_state(const BundleSpec& spec, const BundleState& state) {
  const auto& net = spec.module.network();
  for (const auto& [id, levels] : state.levels) {
    if (to_index(id) >= spec.universe) {
      throw SpecError("module " + to_string(id) + " is outside the identifier universe");
    }
    if (!net.is_valid(levels)) throw SpecError("levels of module " + to_string(id) + " are invalid");
  }
  std::vector<ModuleId> ids;
  for (const auto& [id, levels] : state.levels) ids.push_back(id);

  if (const auto* grid = std::get_if<GridSpace>(&spec.space)) {
    const auto* iface = std::get_if<GbfInterface>(&state.spatial);
    if (!iface) throw SpecError("state has a graph layout but the model uses a grid");
    if (iface->kind() != grid->kind || iface->cutoff() != grid->cutoff) {
      throw SpecError("state grid settings differ from the model");
    }
    if (iface->allocated() != ids) throw SpecError("allocated identifiers differ from module levels");
  } else {
    const auto& space = std::get<GraphSpace>(spec.space);
    const auto* graph = std::get_if<BdgGraph>(&state.spatial);
    if (!graph) throw SpecError("state has a grid layout but the model uses a graph");
    if (graph->bound() != space.bound) throw SpecError("state degree bound differs from the model");
    if (!satisfies_invariants(*graph)) throw SpecError("graph violates the degree bound");
    if (graph->nodes() != ids) throw SpecError("graph nodes differ from module levels");
  }
}

std::string to_string(const Location& where) {
  if (const auto* c = std::get_if<GbfCoord>(&where)) return format_location(*c);
  return to_string(std::get<BdgPlacement>(where));
}

std::string to_string(const Event& event, const ModuleSpec& module) {
  return std::visit(
      [&](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, UpdateEvent>) {
          return "update(" + to_string(e.module) + "," +
                 module.network().component(e.component).name + ")";
        } else if constexpr (std::is_same_v<T, ApoptosisEvent>) {
          return "apoptosis(" + to_string(e.module) + ")";
        } else if constexpr (std::is_same_v<T, MigrationEvent>) {
          return "migration(" + to_string(e.module) + "," + to_string(e.target) + ")";
        } else {
          return "division(" + to_string(e.parent) + "," + to_string(e.child) + "," +
                 to_string(e.target) + ")";
        }
      },
      event);
}

ModuleId acting_module(const Event& event) {
  return std::visit(
      [](const auto& e) -> ModuleId {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, DivisionEvent>) {
          return e.parent;
        } else {
          return e.module;
        }
      },
      event);
}

std::vector<std::pair<ModuleId, unsigned>> neighborhood(const BundleSpec& spec,
                                                        const BundleState& state, ModuleId i) {
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) return iface->neighbors(i);
  const auto& graph = std::get<BdgGraph>(state.spatial);
  auto cutoff = std::get<GraphSpace>(spec.space).cutoff;
  auto all = distances_from(graph, i);
  if (cutoff) {
    std::erase_if(all, [&](const auto& p) { return p.second > *cutoff; });
  }
  return all;
}

std::vector<SigmaArg> sigma_args(const BundleSpec& spec, const BundleState& state, ModuleId i,
                                 std::size_t component) {
  if (!state.levels.count(i)) {
    throw SpatialError(SpatialError::Code::unallocated_identifier,
                       "module " + to_string(i) + " is not allocated");
  }
  std::vector<SigmaArg> args;
  for (auto [j, d] : neighborhood(spec, state, i)) {
    args.push_back({j, d, state.levels.at(j).at(component)});
  }
  return args;
}

Level weighted_level(unsigned distance, Level level) {
  // round(level / distance), halves away from zero; both operands are non-negative.
  return static_cast<Level>((2u * level + distance) / (2u * distance));
}

Level integrate(IntegrationKind kind, Level source_max, std::span<const SigmaArg> args) {
  if (args.empty()) return 0;
  switch (kind) {
    case IntegrationKind::max_round: {
      Level best = 0;
      for (const auto& a : args) best = std::max(best, weighted_level(a.distance, a.level));
      return best;
    }
    case IntegrationKind::min_round: {
      Level best = kMaxLevel;
      for (const auto& a : args) best = std::min(best, weighted_level(a.distance, a.level));
      return best;
    }
    case IntegrationKind::sum_clamp: {
      unsigned total = 0;
      for (const auto& a : args) total += weighted_level(a.distance, a.level);
      return static_cast<Level>(std::min<unsigned>(total, source_max));
    }
  }
  return 0;
}

Level integrate(const BundleSpec& spec, const IntegrationSpec& sigma,
                std::span<const SigmaArg> args) {
  return integrate(sigma.kind, spec.module.network().component(sigma.source).max_level, args);
}

namespace {

/// Evaluation context of one module within a bundle state. Integration values
/// are computed on first use from a neighborhood fetched once.
class ModuleContext : public EvalContext {
 public:
  ModuleContext(const BundleSpec& spec, const BundleState& state, ModuleId i)
      : spec_(spec),
        state_(state),
        levels_(state.levels.at(i)),
        neighbors_(neighborhood(spec, state, i)),
        sigma_cache_(spec.module.integrations().size()) {}

  std::int64_t level(std::size_t component) const override { return levels_[component]; }

  std::int64_t sigma(std::size_t index) const override {
    auto& cached = sigma_cache_[index];
    if (!cached) {
      const auto& s = spec_.module.integrations()[index];
      std::vector<SigmaArg> args;
      args.reserve(neighbors_.size());
      for (auto [j, d] : neighbors_) args.push_back({j, d, state_.levels.at(j)[s.source]});
      cached = integrate(spec_, s, args);
    }
    return *cached;
  }

 private:
  const BundleSpec& spec_;
  const BundleState& state_;
  const NetState& levels_;
  std::vector<std::pair<ModuleId, unsigned>> neighbors_;
  mutable std::vector<std::optional<Level>> sigma_cache_;
};

bool holds(const Expr& guard, const EvalContext& ctx) { return evaluate(guard, ctx) != 0; }

bool disconnects(const BundleSpec& spec, const BdgGraph& before, const BdgGraph& after) {
  const auto* space = std::get_if<GraphSpace>(&spec.space);
  if (!space || !space->forbid_disconnect) return false;
  return connected_components(after) > connected_components(before);
}

void require_allocated(const BundleState& state, ModuleId i) {
  if (!state.levels.count(i)) {
    throw SpatialError(SpatialError::Code::unallocated_identifier,
                       "module " + to_string(i) + " is not allocated");
  }
}

bool strict_placement(const BundleSpec& spec) { return std::get<GraphSpace>(spec.space).strict; }

// Candidate (location, successor spatial state) pairs for moving or adding a
// module next to `i`. Graph candidates that lead to the same graph are merged
// into the first one in placement order.
struct Candidate {
  Location where;
  SpatialState spatial;
};

std::vector<Candidate> dedupe_graphs(std::vector<Candidate> in) {
  std::vector<Candidate> out;
  for (auto& c : in) {
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const Candidate& o) { return o.spatial == c.spatial; });
    if (!seen) out.push_back(std::move(c));
  }
  return out;
}

// Filters candidates through a guard. `actor` is the module whose viewpoint a
// per-location guard takes in the candidate state.
template <typename MakeState>
std::vector<Transition> guarded(const BundleSpec& spec, const BundleState& state, ModuleId i,
                                const Guard& guard, std::vector<Candidate> candidates,
                                ModuleId actor, MakeState make) {
  std::vector<Transition> out;
  if (candidates.empty()) return out;
  if (!guard.per_location) {
    if (!holds(guard.condition, ModuleContext(spec, state, i))) return out;
    for (auto& c : candidates) out.push_back(make(std::move(c)));
    return out;
  }
  for (auto& c : candidates) {
    auto t = make(std::move(c));
    if (holds(guard.condition, ModuleContext(spec, t.state, actor))) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::optional<Transition> update_successor(const BundleSpec& spec, const BundleState& state,
                                           ModuleId i, std::size_t component) {
  require_allocated(state, i);
  const auto& current = state.levels.at(i);
  Level target = eval_target(spec.module.network(), component, ModuleContext(spec, state, i));
  Level next = step_toward(current[component], target);
  if (next == current[component]) return std::nullopt;
  BundleState s = state;
  s.levels[i][component] = next;
  return Transition{UpdateEvent{i, component}, std::move(s)};
}

std::optional<Transition> apoptosis_successor(const BundleSpec& spec, const BundleState& state,
                                              ModuleId i) {
  require_allocated(state, i);
  const auto& guard = spec.module.transforms().apoptosis;
  if (!guard || !holds(*guard, ModuleContext(spec, state, i))) return std::nullopt;
  BundleState s = state;
  s.levels.erase(i);
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    s.spatial = iface->free(i);
  } else {
    const auto& g = std::get<BdgGraph>(state.spatial);
    BdgGraph next = remove_node(g, i);
    if (disconnects(spec, g, next)) return std::nullopt;
    s.spatial = std::move(next);
  }
  return Transition{ApoptosisEvent{i}, std::move(s)};
}

std::vector<Transition> migration_successors(const BundleSpec& spec, const BundleState& state,
                                             ModuleId i) {
  require_allocated(state, i);
  const auto& guard = spec.module.transforms().migration;
  if (!guard) return {};

  std::vector<Candidate> candidates;
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    for (auto c : iface->empty_neighbors(i)) candidates.push_back({c, iface->move(i, c)});
  } else {
    const auto& g = std::get<BdgGraph>(state.spatial);
    BdgGraph rest = remove_node(g, i);
    for (auto& p : migration_targets(g, i, strict_placement(spec))) {
      BdgGraph next = apply_placement(rest, p, i);
      if (next == g || disconnects(spec, g, next)) continue;
      candidates.push_back({std::move(p), std::move(next)});
    }
    candidates = dedupe_graphs(std::move(candidates));
  }

  return guarded(spec, state, i, *guard, std::move(candidates), i, [&](Candidate c) {
    BundleState s{state.levels, std::move(c.spatial)};
    return Transition{MigrationEvent{i, std::move(c.where)}, std::move(s)};
  });
}

std::optional<ModuleId> first_free_identifier(const BundleSpec& spec, const BundleState& state) {
  for (unsigned k = 0; k < spec.universe; ++k) {
    if (!state.levels.count(module_id(k))) return module_id(k);
  }
  return std::nullopt;
}

std::vector<Transition> division_successors(const BundleSpec& spec, const BundleState& state,
                                            ModuleId i) {
  require_allocated(state, i);
  const auto& guard = spec.module.transforms().division;
  if (!guard) return {};
  auto k = first_free_identifier(spec, state);
  if (!k) return {};

  std::vector<Candidate> candidates;
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    for (auto c : iface->empty_neighbors(i)) candidates.push_back({c, iface->allocate(*k, c)});
  } else {
    const auto& g = std::get<BdgGraph>(state.spatial);
    for (auto& p : placements(g, i, strict_placement(spec))) {
      BdgGraph next = apply_placement(g, p, *k);
      candidates.push_back({std::move(p), std::move(next)});
    }
    candidates = dedupe_graphs(std::move(candidates));
  }

  return guarded(spec, state, i, *guard, std::move(candidates), *k, [&](Candidate c) {
    BundleState s{state.levels, std::move(c.spatial)};
    s.levels.emplace(*k, state.levels.at(i));
    return Transition{DivisionEvent{i, *k, std::move(c.where)}, std::move(s)};
  });
}

std::vector<Transition> successors(const BundleSpec& spec, const BundleState& state) {
  std::vector<Transition> out;
  const auto& net = spec.module.network();
  for (const auto& [i, levels] : state.levels) {
    ModuleContext ctx(spec, state, i);
    for (std::size_t g = 0; g < net.size(); ++g) {
      Level next = step_toward(levels[g], eval_target(net, g, ctx));
      if (next == levels[g]) continue;
      BundleState s = state;
      s.levels[i][g] = next;
      out.push_back({UpdateEvent{i, g}, std::move(s)});
    }
    if (auto t = apoptosis_successor(spec, state, i)) out.push_back(std::move(*t));
    for (auto& t : migration_successors(spec, state, i)) out.push_back(std::move(t));
    for (auto& t : division_successors(spec, state, i)) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace tissuenet
