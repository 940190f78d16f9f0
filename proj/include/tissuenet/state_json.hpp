#pragma once

#include <json.hpp>

#include "tissuenet/bundle.hpp"

namespace tissuenet {

// JSON forms shared by graph export and the command line.
//
// state:    {"levels": [{"module": 0, "values": {"A": 1, ...}}, ...],
//            "spatial": [{"module": 0, "at": "(0,0)"}, ...]}        (grid)
//            "spatial": [{"module": 0, "adj": [1, 7]}, ...]          (graph)
// event:    {"kind": "update", "module": 0, "component": "B"}
//           {"kind": "apoptosis", "module": 0}
//           {"kind": "migration", "module": 0, "target": <location>}
//           {"kind": "division", "module": 0, "child": 3, "target": <location>}
// location: "(a,b)" on grids;
//           {"anchor": 0, "extra": [...]} or
//           {"anchor": 0, "pulled": 6, "keep": [...], "retain": [...]} on graphs

nlohmann::json state_to_json(const ModuleSpec& module, const BundleState& state);
/// Throws SpecError when the document is not a valid state of `spec`.
BundleState state_from_json(const BundleSpec& spec, const nlohmann::json& doc);

nlohmann::json location_to_json(const Location& where);
nlohmann::json event_to_json(const ModuleSpec& module, const Event& event);

}  // namespace tissuenet
