#include <map>
#include <set>

#include "tissuenet/dsl.hpp"
#include "tissuenet/error.hpp"

namespace tissuenet {

namespace {

constexpr long kDefaultUniverse = 16;
constexpr long kMaxUniverse = 65536;

}  // namespace

ValidateResult validate_model(const ModelDocument& doc) {
  ValidateResult result;
  auto& diags = result.diagnostics;
  auto report = [&](SourcePos pos, std::string message) { diags.push_back({pos, std::move(message)}); };

  if (!doc.backend) report(doc.header_pos, "missing backend clause ('grid' or 'bdg')");
  if (doc.components.empty()) report(doc.header_pos, "a model needs at least one component");

  std::map<std::string, long> high_of;
  for (const auto& c : doc.components) {
    if (c.low != 0) report(c.pos, "range of '" + c.name + "' must start at 0");
    if (c.high < c.low || c.high > kMaxLevel) {
      report(c.pos, "range of '" + c.name + "' must end between " + std::to_string(c.low) +
                        " and " + std::to_string(kMaxLevel));
    }
    high_of.emplace(c.name, c.high);
  }
  std::set<std::string> ruled;
  for (const auto& r : doc.rules) ruled.insert(r.component);
  for (const auto& c : doc.components) {
    if (!ruled.count(c.name)) report(c.pos, "component '" + c.name + "' has no rule");
  }

  long universe = doc.identifiers.value_or(kDefaultUniverse);
  if (universe < 1 || universe > kMaxUniverse) {
    report(doc.identifiers_pos,
           "identifiers must be between 1 and " + std::to_string(kMaxUniverse));
  }

  const bool graph = doc.backend && doc.backend->kind == BackendKind::bdg;
  if (doc.backend) {
    const auto& b = *doc.backend;
    if (b.cutoff && *b.cutoff < 1) report(b.pos, "cutoff must be at least 1");
    if (graph && b.degree < 2) report(b.pos, "degree bound must be at least 2");
  }

  std::map<GbfCoord, long> occupied;
  std::set<long> initialised;
  for (const auto& init : doc.inits) {
    if (init.module < 0 || init.module >= universe) {
      report(init.pos, "module " + std::to_string(init.module) + " is outside the identifier universe [0, " +
                           std::to_string(universe) + ")");
    }
    initialised.insert(init.module);
    if (doc.backend) {
      if (graph && init.at) {
        report(init.at_pos, "graph models place modules with 'edges', not 'at'");
      } else if (!graph && !init.at) {
        report(init.pos, "module " + std::to_string(init.module) + " needs a location ('at (a,b)')");
      }
    }
    if (init.at && !graph) {
      auto [it, fresh] = occupied.emplace(*init.at, init.module);
      if (!fresh) {
        report(init.at_pos, "location " + format_location(*init.at) + " already holds module " +
                                std::to_string(it->second));
      }
    }
    for (const auto& l : init.levels) {
      auto h = high_of.find(l.component);
      if (h != high_of.end() && (l.value < 0 || l.value > h->second)) {
        report(l.pos, "level " + std::to_string(l.value) + " of '" + l.component +
                          "' is outside its range 0.." + std::to_string(h->second));
      }
    }
  }

  std::set<std::pair<long, long>> edge_set;
  std::map<long, unsigned> degree;
  if (!graph && !doc.edges.empty()) {
    report(doc.edges.front().pos, "'edges' is only allowed with a 'bdg' backend");
  }
  if (graph) {
    for (const auto& e : doc.edges) {
      bool ok = true;
      for (long end : {e.a, e.b}) {
        if (!initialised.count(end)) {
          report(e.pos, "edge endpoint " + std::to_string(end) + " has no 'init' clause");
          ok = false;
        }
      }
      if (e.a == e.b) {
        report(e.pos, "self-loop on node " + std::to_string(e.a));
        ok = false;
      }
      if (ok && !edge_set.insert(std::minmax(e.a, e.b)).second) {
        report(e.pos, "duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
        ok = false;
      }
      if (ok) {
        for (long end : {e.a, e.b}) {
          if (++degree[end] == doc.backend->degree + 1) {
            report(e.pos, "node " + std::to_string(end) + " exceeds the degree bound " +
                              std::to_string(doc.backend->degree));
          }
        }
      }
    }
  }
  if (!diags.empty()) return result;

  // Everything the checks above cover holds; the remaining failures come from
  // the core constructors and are reported at the header.
  try {
    std::vector<ComponentDecl> components;
    for (const auto& c : doc.components) components.push_back({c.name, static_cast<Level>(c.high)});
    std::vector<Expr> rules;
    for (const auto& c : doc.components) {
      for (const auto& r : doc.rules) {
        if (r.component == c.name) rules.push_back(r.expr);
      }
    }
    std::vector<IntegrationDecl> sigmas;
    for (const auto& s : doc.sigmas) sigmas.push_back({s.name, s.source, s.kind});
    TransformSpec transforms;
    for (const auto& t : doc.transforms) {
      switch (t.kind) {
        case TransformKind::die: transforms.apoptosis = t.guard; break;
        case TransformKind::migrate: transforms.migration = Guard{t.guard, t.per_location}; break;
        case TransformKind::divide: transforms.division = Guard{t.guard, t.per_location}; break;
      }
    }
    ModuleSpec module(std::move(components), std::move(rules), std::move(sigmas),
                      std::move(transforms));

    const auto& b = *doc.backend;
    SpaceSpec space = graph ? SpaceSpec{GraphSpace{b.degree, b.cutoff, b.strict, b.forbid_disconnect}}
                            : SpaceSpec{GridSpace{b.kind == BackendKind::grid_tri ? GridKind::triangular
                                                                                  : GridKind::square,
                                                  b.cutoff}};
    BundleSpec spec{std::move(module), space, static_cast<unsigned>(universe)};

    const auto& net = spec.module.network();
    BundleState state{{}, empty_space(spec)};
    std::vector<ModuleId> nodes;
    for (const auto& init : doc.inits) {
      NetState levels(net.size(), 0);
      for (const auto& l : init.levels) levels[*net.index_of(l.component)] = static_cast<Level>(l.value);
      auto id = module_id(static_cast<unsigned>(init.module));
      state.levels.emplace(id, std::move(levels));
      nodes.push_back(id);
      if (!graph) state.spatial = std::get<GbfInterface>(state.spatial).allocate(id, *init.at);
    }
    if (graph) {
      std::vector<std::pair<ModuleId, ModuleId>> edges;
      for (const auto& [a, c] : edge_set) {
        edges.emplace_back(module_id(static_cast<unsigned>(a)), module_id(static_cast<unsigned>(c)));
      }
      state.spatial = BdgGraph::from_edges(b.degree, nodes, edges);
    }
    check_state(spec, state);
    result.model = Model{doc.name, std::move(spec), std::move(state)};
  } catch (const Error& e) {
    report(doc.header_pos, e.what());
  }
  return result;
}

ValidateResult load_model(std::string_view text) {
  auto parsed = parse_model(text);
  if (!parsed.ok()) return {std::nullopt, std::move(parsed.diagnostics)};
  return validate_model(*parsed.document);
}

}  // namespace tissuenet
