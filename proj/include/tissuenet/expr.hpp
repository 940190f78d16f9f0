#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tissuenet/types.hpp"

namespace tissuenet {

enum class UnaryOp { negate, logical_not };

enum class BinaryOp {
  add,
  subtract,
  multiply,
  equal,
  not_equal,
  less,
  less_equal,
  greater,
  greater_equal,
  logical_and,
  logical_or,
};

enum class Builtin { min, max, alive, count };

/// What a name inside an expression refers to once resolved.
enum class RefKind { unresolved, component, sigma, component_at };

class Expr;

namespace expr_node {

struct Constant {
  std::int64_t value;
};

/// `A` (a local component or an integration function) or `A@3` (component A of module 3).
struct Name {
  std::string name;
  std::optional<unsigned> module;
  RefKind kind = RefKind::unresolved;
  std::size_t index = 0;
};

struct Unary {
  UnaryOp op;
  std::shared_ptr<const Expr> operand;
};

struct Binary {
  BinaryOp op;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
};

struct Call {
  Builtin fn;
  std::vector<Expr> args;
};

}  // namespace expr_node

/// Immutable integer expression tree. Booleans are the integers 0 and 1, so
/// regulation rules, transformation guards and reachability predicates share
/// one language.
class Expr {
 public:
  using Node = std::variant<expr_node::Constant, expr_node::Name, expr_node::Unary,
                            expr_node::Binary, expr_node::Call>;

  Expr() : Expr(constant(0)) {}

  static Expr constant(std::int64_t value, SourcePos pos = {});
  static Expr name(std::string name, SourcePos pos = {});
  static Expr name_at(std::string name, unsigned module, SourcePos pos = {});
  static Expr unary(UnaryOp op, Expr operand, SourcePos pos = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos = {});
  static Expr call(Builtin fn, std::vector<Expr> args, SourcePos pos = {});
  static Expr from_node(Node node, SourcePos pos = {});

  const Node& node() const { return node_->node; }
  SourcePos pos() const { return node_->pos; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Holder {
    Node node;
    SourcePos pos;
  };
  explicit Expr(std::shared_ptr<const Holder> node) : node_(std::move(node)) {}

  std::shared_ptr<const Holder> node_;
};

/// Names visible while resolving an expression.
struct ExprScope {
  std::span<const std::string> components;
  std::span<const std::string> sigmas;
  /// Enables `A@i`, `alive(i)` and `count()` (whole-bundle predicates).
  bool bundle_queries = false;
  /// Enables bare component names and sigma references (module-local rules).
  bool local_names = true;
};

struct ExprIssue {
  SourcePos pos;
  std::string message;
};

/// Binds every name in `expr` against `scope`. Problems are appended to
/// `issues`; the returned tree is only usable when none were added.
Expr resolve(const Expr& expr, const ExprScope& scope, std::vector<ExprIssue>& issues);

/// Supplies the values names resolve to.
class EvalContext {
 public:
  virtual ~EvalContext() = default;
  virtual std::int64_t level(std::size_t component) const;
  virtual std::int64_t sigma(std::size_t index) const;
  virtual std::int64_t level_at(std::size_t component, ModuleId module) const;
  virtual bool alive(ModuleId module) const;
  virtual std::int64_t module_count() const;
};

std::int64_t evaluate(const Expr& expr, const EvalContext& ctx);

/// Infix rendering that parses back to an equal tree.
std::string to_string(const Expr& expr);

/// Visits every name node; used to collect dependencies.
void for_each_name(const Expr& expr, const std::function<void(const expr_node::Name&)>& fn);

}  // namespace tissuenet
