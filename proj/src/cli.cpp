#include "tissuenet/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tissuenet/dsl.hpp"
#include "tissuenet/error.hpp"
#include "tissuenet/explorer.hpp"
#include "tissuenet/render.hpp"
#include "tissuenet/state_json.hpp"

namespace tissuenet {

namespace {

using nlohmann::json;

// Thrown by command bodies; carries the exit code and an already-printed flag.
struct CommandFailure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandFailure{kExitUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw CommandFailure{kExitUsage, "cannot write '" + path + "'"};
  file << text;
}

Model load(const std::string& path, std::ostream& err) {
  auto result = load_model(read_file(path));
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) err << format_diagnostic(d, path) << '\n';
    throw CommandFailure{kExitDiagnostics, {}};
  }
  return std::move(*result.model);
}

BundleState load_state(const Model& model, const std::string& arg) {
  std::string text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
  try {
    return state_from_json(model.spec, json::parse(text));
  } catch (const json::exception& e) {
    throw CommandFailure{kExitDiagnostics, std::string("malformed state JSON: ") + e.what()};
  } catch (const Error& e) {
    throw CommandFailure{kExitDiagnostics, std::string("invalid state: ") + e.what()};
  }
}

struct Options {
  std::string file;
  std::string state;
  std::string out_path;
  std::string dot_path;
  std::string json_path;
  std::string svg_path;
  std::string reach;
  std::size_t max_states = ExploreLimits{}.max_states;
  unsigned jobs = 1;
};

StateGraph explore_model(const Model& model, const Options& opt) {
  return explore(model.spec, model.initial, ExploreLimits{opt.max_states}, opt.jobs);
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load(opt.file, err);
  out << "ok: model \"" << model.name << "\", " << model.initial.levels.size() << " module(s)\n";
  return kExitOk;
}

int cmd_successors(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load(opt.file, err);
  BundleState state = opt.state.empty() ? model.initial : load_state(model, opt.state);
  json list = json::array();
  for (const auto& t : successors(model.spec, state)) {
    list.push_back({{"event", event_to_json(model.spec.module, t.event)},
                    {"state", state_to_json(model.spec.module, t.state)}});
  }
  out << list.dump(2) << '\n';
  return kExitOk;
}

int cmd_explore(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load(opt.file, err);
  auto graph = explore_model(model, opt);
  out << "states=" << graph.size() << " edges=" << graph.edges().size()
      << " truncated=" << (graph.truncated() ? "true" : "false") << '\n';
  if (!opt.out_path.empty()) {
    std::ostringstream os;
    export_json(graph, model.spec.module, os);
    write_output(opt.out_path, os.str(), out);
  }
  if (graph.truncated()) {
    err << "state limit of " << opt.max_states << " reached\n";
    return kExitLimit;
  }
  return kExitOk;
}

int cmd_query(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load(opt.file, err);
  auto parsed = parse_expression(opt.reach);
  if (!parsed.expr) {
    for (const auto& d : parsed.diagnostics) err << format_diagnostic(d, "<reach>") << '\n';
    return kExitDiagnostics;
  }
  StatePredicate pred;
  try {
    pred = make_predicate(model.spec.module, *parsed.expr);
  } catch (const Error& e) {
    throw CommandFailure{kExitDiagnostics, std::string("<reach>: error: ") + e.what()};
  }
  auto graph = explore_model(model, opt);
  auto trace = query_reach(graph, pred);
  if (!trace) {
    out << "unreachable\n";
    if (graph.truncated()) {
      err << "state limit of " << opt.max_states << " reached; the answer may be incomplete\n";
      return kExitLimit;
    }
    return kExitDiagnostics;
  }
  // Replay the events to report the intermediate states.
  const auto& module = model.spec.module;
  BundleState state = model.initial;
  json steps = json::array();
  for (const auto& event : *trace) {
    for (auto& t : successors(model.spec, state)) {
      if (t.event == event) {
        state = std::move(t.state);
        break;
      }
    }
    steps.push_back({{"event", event_to_json(module, event)}, {"state", state_to_json(module, state)}});
  }
  json doc = {{"length", trace->size()},
              {"initial", state_to_json(module, model.initial)},
              {"trace", std::move(steps)}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_export(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.dot_path.empty() && opt.json_path.empty()) {
    throw CommandFailure{kExitUsage, "export needs --dot and/or --json"};
  }
  auto model = load(opt.file, err);
  auto graph = explore_model(model, opt);
  if (!opt.dot_path.empty()) {
    std::ostringstream os;
    export_dot(graph, model.spec.module, os);
    write_output(opt.dot_path, os.str(), out);
  }
  if (!opt.json_path.empty()) {
    std::ostringstream os;
    export_json(graph, model.spec.module, os);
    write_output(opt.json_path, os.str(), out);
  }
  if (graph.truncated()) {
    err << "state limit of " << opt.max_states << " reached; the export is partial\n";
    return kExitLimit;
  }
  return kExitOk;
}

int cmd_render(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load(opt.file, err);
  BundleState state = opt.state.empty() ? model.initial : load_state(model, opt.state);
  write_output(opt.svg_path, render_svg(model.spec, state), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore spatial regulatory network models", "tissuenet"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "Model file")->required();
  };
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--max-states", opt.max_states, "Stop after this many states")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs", opt.jobs, "Worker threads per frontier")->check(CLI::Range(1u, 256u));
  };

  auto* validate = app.add_subcommand("validate", "Check a model and report diagnostics");
  add_file(validate);

  auto* succ = app.add_subcommand("successors", "List the successors of a state as JSON");
  add_file(succ);
  succ->add_option("--state", opt.state, "State as inline JSON or a JSON file");

  auto* expl = app.add_subcommand("explore", "Explore the reachable state graph");
  add_file(expl);
  add_limits(expl);
  expl->add_option("--out", opt.out_path, "Write the graph as JSON ('-' for stdout)");

  auto* query = app.add_subcommand("query", "Shortest trace to a state satisfying a predicate");
  add_file(query);
  add_limits(query);
  query->add_option("--reach", opt.reach, "Predicate, e.g. 'C@0 == 1'")->required();

  auto* exp = app.add_subcommand("export", "Export the explored graph");
  add_file(exp);
  add_limits(exp);
  exp->add_option("--dot", opt.dot_path, "GraphViz output ('-' for stdout)");
  exp->add_option("--json", opt.json_path, "JSON output ('-' for stdout)");

  auto* render = app.add_subcommand("render", "Draw a state as SVG");
  add_file(render);
  render->add_option("--state", opt.state, "State as inline JSON or a JSON file");
  render->add_option("--svg", opt.svg_path, "SVG output ('-' for stdout)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt, out, err);
    if (succ->parsed()) return cmd_successors(opt, out, err);
    if (expl->parsed()) return cmd_explore(opt, out, err);
    if (query->parsed()) return cmd_query(opt, out, err);
    if (exp->parsed()) return cmd_export(opt, out, err);
    return cmd_render(opt, out, err);
  } catch (const CommandFailure& f) {
    if (!f.message.empty()) err << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiagnostics;
  }
}

}  // namespace tissuenet
