#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tissuenet/bundle.hpp"
#include "tissuenet/expr.hpp"
#include "tissuenet/gbf.hpp"
#include "tissuenet/types.hpp"

namespace tissuenet {

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

/// "file:line:col: error: message"
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

enum class BackendKind { grid_square, grid_tri, bdg };

struct BackendClause {
  BackendKind kind = BackendKind::grid_square;
  std::optional<unsigned> cutoff;
  unsigned degree = 0;  // bdg only
  bool strict = true;
  bool forbid_disconnect = false;
  SourcePos pos;
  bool operator==(const BackendClause&) const = default;
};

struct ComponentClause {
  std::string name;
  long low = 0;
  long high = 1;
  SourcePos pos;
  bool operator==(const ComponentClause&) const = default;
};

struct SigmaClause {
  std::string name;
  IntegrationKind kind = IntegrationKind::max_round;
  std::string source;
  SourcePos pos;
  SourcePos source_pos;
  bool operator==(const SigmaClause&) const = default;
};

struct RuleClause {
  std::string component;
  Expr expr;
  SourcePos pos;
  bool operator==(const RuleClause&) const = default;
};

enum class TransformKind { die, migrate, divide };

struct TransformClause {
  TransformKind kind = TransformKind::die;
  Expr guard;
  bool per_location = false;
  SourcePos pos;
  bool operator==(const TransformClause&) const = default;
};

struct EdgeClause {
  long a = 0;
  long b = 0;
  SourcePos pos;
  bool operator==(const EdgeClause&) const = default;
};

struct LevelAssignment {
  std::string component;
  long value = 0;
  SourcePos pos;
  bool operator==(const LevelAssignment&) const = default;
};

struct InitClause {
  long module = 0;
  std::optional<GbfCoord> at;
  std::vector<LevelAssignment> levels;  // unlisted components start at 0
  SourcePos pos;
  SourcePos at_pos;
  bool operator==(const InitClause&) const = default;
};

/// Syntax tree of a model file. Clauses of each kind keep their file order.
struct ModelDocument {
  std::string name;
  SourcePos header_pos;
  std::optional<BackendClause> backend;
  std::optional<long> identifiers;
  SourcePos identifiers_pos;
  std::vector<ComponentClause> components;
  std::vector<SigmaClause> sigmas;
  std::vector<RuleClause> rules;
  std::vector<TransformClause> transforms;
  std::vector<EdgeClause> edges;
  std::vector<InitClause> inits;

  bool operator==(const ModelDocument&) const = default;
};

struct ParseResult {
  std::optional<ModelDocument> document;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return document.has_value() && diagnostics.empty(); }
};

/// Total: malformed input yields diagnostics, never an exception. Besides
/// syntax, checks duplicate declarations and that every name resolves.
ParseResult parse_model(std::string_view text);

/// Canonical text of a document; parsing it yields an equal document.
std::string print_model(const ModelDocument& doc);

/// A checked model, ready for exploration.
struct Model {
  std::string name;
  BundleSpec spec;
  BundleState initial;
};

struct ValidateResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value() && diagnostics.empty(); }
};

/// Ranges, backend settings, initial placement and graph checks; builds the model.
ValidateResult validate_model(const ModelDocument& doc);

/// parse_model followed by validate_model.
ValidateResult load_model(std::string_view text);

struct ExprParseResult {
  std::optional<Expr> expr;
  std::vector<Diagnostic> diagnostics;
};

/// A single expression (rules, guards, `A@0 == 1` style predicates). Names are
/// left unresolved.
ExprParseResult parse_expression(std::string_view text);

}  // namespace tissuenet
