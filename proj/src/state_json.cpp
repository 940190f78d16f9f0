#include "tissuenet/state_json.hpp"

#include <set>

#include "tissuenet/error.hpp"

namespace tissuenet {

using nlohmann::json;

namespace {

json ids_to_json(const std::vector<ModuleId>& ids) {
  json out = json::array();
  for (auto id : ids) out.push_back(to_index(id));
  return out;
}

ModuleId id_from_json(const json& v, unsigned universe) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= universe) {
    throw SpecError("module identifiers must be integers in [0, " + std::to_string(universe) + ")");
  }
  return module_id(v.get<unsigned>());
}

}  // namespace

json state_to_json(const ModuleSpec& module, const BundleState& state) {
  const auto& net = module.network();
  json levels = json::array();
  for (const auto& [id, values] : state.levels) {
    json named = json::object();
    for (std::size_t g = 0; g < values.size(); ++g) named[net.component(g).name] = values[g];
    levels.push_back({{"module", to_index(id)}, {"values", std::move(named)}});
  }
  json spatial = json::array();
  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    for (const auto& [id, at] : iface->theta()) {
      spatial.push_back({{"module", to_index(id)}, {"at", format_location(at)}});
    }
  } else {
    for (const auto& [id, adj] : std::get<BdgGraph>(state.spatial).adjacency()) {
      spatial.push_back({{"module", to_index(id)}, {"adj", ids_to_json(adj)}});
    }
  }
  return {{"levels", std::move(levels)}, {"spatial", std::move(spatial)}};
}

BundleState state_from_json(const BundleSpec& spec, const json& doc) {
  const auto& net = spec.module.network();
  if (!doc.is_object() || !doc.contains("levels") || !doc.contains("spatial") ||
      !doc["levels"].is_array() || !doc["spatial"].is_array()) {
    throw SpecError("a state needs \"levels\" and \"spatial\" arrays");
  }
  BundleState state{{}, empty_space(spec)};
  for (const auto& entry : doc["levels"]) {
    if (!entry.is_object() || !entry.contains("module")) throw SpecError("level entry without module");
    auto id = id_from_json(entry["module"], spec.universe);
    NetState values(net.size(), 0);
    if (entry.contains("values")) {
      if (!entry["values"].is_object()) throw SpecError("\"values\" must be an object");
      for (const auto& [name, v] : entry["values"].items()) {
        auto g = net.index_of(name);
        if (!g) throw SpecError("unknown component '" + name + "'");
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > net.component(*g).max_level) {
          throw SpecError("level of '" + name + "' is out of range");
        }
        values[*g] = static_cast<Level>(v.get<unsigned>());
      }
    }
    if (!state.levels.emplace(id, std::move(values)).second) {
      throw SpecError("module " + to_string(id) + " listed twice");
    }
  }

  if (std::holds_alternative<GridSpace>(spec.space)) {
    auto iface = std::get<GbfInterface>(state.spatial);
    for (const auto& entry : doc["spatial"]) {
      if (!entry.is_object() || !entry.contains("module") || !entry.contains("at") ||
          !entry["at"].is_string()) {
        throw SpecError("grid placements look like {\"module\": 0, \"at\": \"(0,0)\"}");
      }
      auto id = id_from_json(entry["module"], spec.universe);
      auto at = parse_location(entry["at"].get<std::string>());
      if (!at) throw SpecError("bad location literal " + entry["at"].dump());
      try {
        iface = iface.allocate(id, *at);
      } catch (const SpatialError& e) {
        throw SpecError(e.what());
      }
    }
    state.spatial = std::move(iface);
  } else {
    std::vector<ModuleId> nodes;
    std::set<std::pair<ModuleId, ModuleId>> edges;
    for (const auto& entry : doc["spatial"]) {
      if (!entry.is_object() || !entry.contains("module")) {
        throw SpecError("graph nodes look like {\"module\": 0, \"adj\": [1]}");
      }
      auto id = id_from_json(entry["module"], spec.universe);
      nodes.push_back(id);
      if (entry.contains("adj")) {
        for (const auto& other : entry["adj"]) {
          auto j = id_from_json(other, spec.universe);
          edges.insert(std::minmax(id, j));
        }
      }
    }
    std::vector<std::pair<ModuleId, ModuleId>> edge_list(edges.begin(), edges.end());
    try {
      state.spatial = BdgGraph::from_edges(std::get<GraphSpace>(spec.space).bound, nodes, edge_list);
    } catch (const SpatialError& e) {
      throw SpecError(e.what());
    }
  }
  check_state(spec, state);
  return state;
}

json location_to_json(const Location& where) {
  if (const auto* c = std::get_if<GbfCoord>(&where)) return format_location(*c);
  const auto& p = std::get<BdgPlacement>(where);
  if (const auto* ins = std::get_if<InsertionPoint>(&p)) {
    return {{"anchor", to_index(ins->anchor)}, {"extra", ids_to_json(ins->extra)}};
  }
  const auto& s = std::get<SplitPoint>(p);
  return {{"anchor", to_index(s.anchor)},
          {"pulled", to_index(s.pulled)},
          {"keep", ids_to_json(s.keep)},
          {"retain", ids_to_json(s.retain)}};
}

json event_to_json(const ModuleSpec& module, const Event& event) {
  return std::visit(
      [&](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, UpdateEvent>) {
          return {{"kind", "update"},
                  {"module", to_index(e.module)},
                  {"component", module.network().component(e.component).name}};
        } else if constexpr (std::is_same_v<T, ApoptosisEvent>) {
          return {{"kind", "apoptosis"}, {"module", to_index(e.module)}};
        } else if constexpr (std::is_same_v<T, MigrationEvent>) {
          return {{"kind", "migration"}, {"module", to_index(e.module)}, {"target", location_to_json(e.target)}};
        } else {
          return {{"kind", "division"},
                  {"module", to_index(e.parent)},
                  {"child", to_index(e.child)},
                  {"target", location_to_json(e.target)}};
        }
      },
      event);
}

}  // namespace tissuenet
