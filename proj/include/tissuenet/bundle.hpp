#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tissuenet/bdg.hpp"
#include "tissuenet/expr.hpp"
#include "tissuenet/gbf.hpp"
#include "tissuenet/regnet.hpp"
#include "tissuenet/types.hpp"

namespace tissuenet {

enum class IntegrationKind { max_round, min_round, sum_clamp };

const char* to_string(IntegrationKind kind);

/// An integration function sigma: collapses the levels of `source` over all
/// neighbors of a module into one level.
struct IntegrationSpec {
  std::string name;
  std::size_t source = 0;
  IntegrationKind kind = IntegrationKind::max_round;
};

struct IntegrationDecl {
  std::string name;
  std::string source;
  IntegrationKind kind = IntegrationKind::max_round;
};

/// Migration/division guard. Whole-set form: evaluated once on the module and
/// either passes every candidate location or none. Per-location form: evaluated
/// once per candidate, on the successor state, from the moved (migration) or
/// newborn (division) module's viewpoint.
struct Guard {
  Expr condition;
  bool per_location = false;
};

struct TransformSpec {
  std::optional<Expr> apoptosis;
  std::optional<Guard> migration;
  std::optional<Guard> division;
};

/// A regulatory network equipped with integration functions and transformation
/// guards. Every module of a bundle shares one ModuleSpec.
class ModuleSpec {
 public:
  /// Resolves all rules and guards; throws SpecError.
  ModuleSpec(std::vector<ComponentDecl> components, std::vector<Expr> rules,
             std::vector<IntegrationDecl> integrations = {}, TransformSpec transforms = {});

  /// A plain network: no inputs, no transformations.
  static ModuleSpec from_network(const NetworkSpec& net);

  const NetworkSpec& network() const { return network_; }
  const std::vector<IntegrationSpec>& integrations() const { return integrations_; }
  const TransformSpec& transforms() const { return transforms_; }

 private:
  NetworkSpec network_;
  std::vector<IntegrationSpec> integrations_;
  TransformSpec transforms_;
};

struct GridSpace {
  GridKind kind = GridKind::square;
  std::optional<unsigned> cutoff;
};

struct GraphSpace {
  unsigned bound = 6;
  std::optional<unsigned> cutoff;
  /// Split points only when a node is degree-saturated.
  bool strict = true;
  /// Reject apoptosis/migration that increases the number of connected components.
  bool forbid_disconnect = false;
};

using SpaceSpec = std::variant<GridSpace, GraphSpace>;

struct BundleSpec {
  ModuleSpec module;
  SpaceSpec space;
  unsigned universe = 16;
};

using SpatialState = std::variant<GbfInterface, BdgGraph>;

/// Component levels of every living module joined with the spatial state.
struct BundleState {
  std::map<ModuleId, NetState> levels;
  SpatialState spatial;

  bool operator==(const BundleState&) const = default;
};

/// Throws SpecError when `state` is not a valid state of `spec`.
void check_state(const BundleSpec& spec, const BundleState& state);

/// An empty spatial state of the kind `spec` describes.
SpatialState empty_space(const BundleSpec& spec);

using Location = std::variant<GbfCoord, BdgPlacement>;

std::string to_string(const Location& where);

struct UpdateEvent {
  ModuleId module;
  std::size_t component;
  bool operator==(const UpdateEvent&) const = default;
};
struct ApoptosisEvent {
  ModuleId module;
  bool operator==(const ApoptosisEvent&) const = default;
};
struct MigrationEvent {
  ModuleId module;
  Location target;
  bool operator==(const MigrationEvent&) const = default;
};
struct DivisionEvent {
  ModuleId parent;
  ModuleId child;
  Location target;
  bool operator==(const DivisionEvent&) const = default;
};

using Event = std::variant<UpdateEvent, ApoptosisEvent, MigrationEvent, DivisionEvent>;

std::string to_string(const Event& event, const ModuleSpec& module);
/// The module an event is fired by.
ModuleId acting_module(const Event& event);

struct Transition {
  Event event;
  BundleState state;
};

/// One argument of an integration function: a neighbor with delta > 0.
struct SigmaArg {
  ModuleId module;
  unsigned distance;
  Level level;

  double delta() const { return 1.0 / distance; }
};

/// Other allocated modules with delta(i, j) > 0 and their distance, sorted by id.
std::vector<std::pair<ModuleId, unsigned>> neighborhood(const BundleSpec& spec,
                                                        const BundleState& state, ModuleId i);

std::vector<SigmaArg> sigma_args(const BundleSpec& spec, const BundleState& state, ModuleId i,
                                 std::size_t component);

/// round(delta * level) with halves rounded away from zero, computed exactly.
Level weighted_level(unsigned distance, Level level);

/// MAX_ROUND / MIN_ROUND / SUM_CLAMP over the arguments; 0 on an empty set.
Level integrate(IntegrationKind kind, Level source_max, std::span<const SigmaArg> args);
Level integrate(const BundleSpec& spec, const IntegrationSpec& sigma,
                std::span<const SigmaArg> args);

std::optional<Transition> update_successor(const BundleSpec& spec, const BundleState& state,
                                           ModuleId i, std::size_t component);
std::optional<Transition> apoptosis_successor(const BundleSpec& spec, const BundleState& state,
                                              ModuleId i);
std::vector<Transition> migration_successors(const BundleSpec& spec, const BundleState& state,
                                             ModuleId i);
std::vector<Transition> division_successors(const BundleSpec& spec, const BundleState& state,
                                            ModuleId i);

/// Interleaving semantics: every enabled event of every module, one per edge,
/// ordered by module, then updates, apoptosis, migrations, divisions.
std::vector<Transition> successors(const BundleSpec& spec, const BundleState& state);

/// Smallest identifier of the universe not allocated in `state`.
std::optional<ModuleId> first_free_identifier(const BundleSpec& spec, const BundleState& state);

}  // namespace tissuenet
