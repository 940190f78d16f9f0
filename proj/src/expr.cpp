#include "tissuenet/expr.hpp"

#include <algorithm>
#include <sstream>

#include "tissuenet/error.hpp"

namespace tissuenet {

using namespace expr_node;

Expr Expr::constant(std::int64_t value, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(Holder{Constant{value}, pos}));
}

Expr Expr::name(std::string name, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(Holder{Name{std::move(name), std::nullopt}, pos}));
}

Expr Expr::name_at(std::string name, unsigned module, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(Holder{Name{std::move(name), module}, pos}));
}

Expr Expr::unary(UnaryOp op, Expr operand, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(
      Holder{Unary{op, std::make_shared<const Expr>(std::move(operand))}, pos}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(
      Holder{Binary{op, std::make_shared<const Expr>(std::move(lhs)),
                    std::make_shared<const Expr>(std::move(rhs))},
             pos}));
}

Expr Expr::call(Builtin fn, std::vector<Expr> args, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(Holder{Call{fn, std::move(args)}, pos}));
}

Expr Expr::from_node(Node node, SourcePos pos) {
  return Expr(std::make_shared<const Holder>(Holder{std::move(node), pos}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(nb);
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Name>) {
          return x.name == y.name && x.module == y.module;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && *x.operand == *y.operand;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else {
          return x.fn == y.fn && x.args == y.args;
        }
      },
      na);
}

namespace {

const char* builtin_name(Builtin fn) {
  switch (fn) {
    case Builtin::min: return "min";
    case Builtin::max: return "max";
    case Builtin::alive: return "alive";
    case Builtin::count: return "count";
  }
  return "?";
}

bool arity_ok(Builtin fn, std::size_t n) {
  switch (fn) {
    case Builtin::min:
    case Builtin::max: return n >= 1;
    case Builtin::alive: return n == 1;
    case Builtin::count: return n == 0;
  }
  return false;
}

Expr resolve_impl(const Expr& expr, const ExprScope& scope, std::vector<ExprIssue>& issues) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return expr;
        } else if constexpr (std::is_same_v<T, Name>) {
          auto find = [](std::span<const std::string> names,
                         const std::string& name) -> std::optional<std::size_t> {
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) return std::nullopt;
            return static_cast<std::size_t>(it - names.begin());
          };
          auto resolved = n;
          if (n.module) {
            if (!scope.bundle_queries) {
              issues.push_back({expr.pos(), "module-qualified reference '" + n.name + "@" +
                                                std::to_string(*n.module) +
                                                "' is only allowed in queries"});
              return expr;
            }
            auto c = find(scope.components, n.name);
            if (!c) {
              issues.push_back({expr.pos(), "unresolved reference to component '" + n.name + "'"});
              return expr;
            }
            resolved.kind = RefKind::component_at;
            resolved.index = *c;
          } else {
            if (!scope.local_names) {
              issues.push_back({expr.pos(), "reference '" + n.name +
                                                "' must name a module, as in '" + n.name + "@0'"});
              return expr;
            }
            if (auto c = find(scope.components, n.name)) {
              resolved.kind = RefKind::component;
              resolved.index = *c;
            } else if (auto s = find(scope.sigmas, n.name)) {
              resolved.kind = RefKind::sigma;
              resolved.index = *s;
            } else {
              issues.push_back({expr.pos(), "unresolved reference to '" + n.name + "'"});
              return expr;
            }
          }
          return Expr::from_node(resolved, expr.pos());
        } else if constexpr (std::is_same_v<T, Unary>) {
          return Expr::unary(n.op, resolve_impl(*n.operand, scope, issues), expr.pos());
        } else if constexpr (std::is_same_v<T, Binary>) {
          return Expr::binary(n.op, resolve_impl(*n.lhs, scope, issues),
                              resolve_impl(*n.rhs, scope, issues), expr.pos());
        } else {
          if ((n.fn == Builtin::alive || n.fn == Builtin::count) && !scope.bundle_queries) {
            issues.push_back({expr.pos(), std::string(builtin_name(n.fn)) +
                                              "() is only allowed in queries"});
          } else if (!arity_ok(n.fn, n.args.size())) {
            issues.push_back({expr.pos(), std::string("wrong number of arguments to ") +
                                              builtin_name(n.fn) + "()"});
          }
          std::vector<Expr> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(resolve_impl(a, scope, issues));
          return Expr::call(n.fn, std::move(args), expr.pos());
        }
      },
      expr.node());
}

}  // namespace

Expr resolve(const Expr& expr, const ExprScope& scope, std::vector<ExprIssue>& issues) {
  return resolve_impl(expr, scope, issues);
}

std::int64_t EvalContext::level(std::size_t) const {
  throw Error("component levels are not available in this context");
}
std::int64_t EvalContext::sigma(std::size_t) const {
  throw Error("integration functions are not available in this context");
}
std::int64_t EvalContext::level_at(std::size_t, ModuleId) const {
  throw Error("module-qualified levels are not available in this context");
}
bool EvalContext::alive(ModuleId) const {
  throw Error("alive() is not available in this context");
}
std::int64_t EvalContext::module_count() const {
  throw Error("count() is not available in this context");
}

std::int64_t evaluate(const Expr& expr, const EvalContext& ctx) {
  return std::visit(
      [&](const auto& n) -> std::int64_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Name>) {
          switch (n.kind) {
            case RefKind::component: return ctx.level(n.index);
            case RefKind::sigma: return ctx.sigma(n.index);
            case RefKind::component_at: return ctx.level_at(n.index, module_id(*n.module));
            case RefKind::unresolved: break;
          }
          throw Error("evaluation of unresolved name '" + n.name + "'");
        } else if constexpr (std::is_same_v<T, Unary>) {
          auto v = evaluate(*n.operand, ctx);
          return n.op == UnaryOp::negate ? -v : static_cast<std::int64_t>(v == 0);
        } else if constexpr (std::is_same_v<T, Binary>) {
          if (n.op == BinaryOp::logical_and) {
            return evaluate(*n.lhs, ctx) != 0 && evaluate(*n.rhs, ctx) != 0;
          }
          if (n.op == BinaryOp::logical_or) {
            return evaluate(*n.lhs, ctx) != 0 || evaluate(*n.rhs, ctx) != 0;
          }
          auto a = evaluate(*n.lhs, ctx);
          auto b = evaluate(*n.rhs, ctx);
          switch (n.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::subtract: return a - b;
            case BinaryOp::multiply: return a * b;
            case BinaryOp::equal: return a == b;
            case BinaryOp::not_equal: return a != b;
            case BinaryOp::less: return a < b;
            case BinaryOp::less_equal: return a <= b;
            case BinaryOp::greater: return a > b;
            case BinaryOp::greater_equal: return a >= b;
            default: break;
          }
          return 0;
        } else {
          switch (n.fn) {
            case Builtin::min:
            case Builtin::max: {
              if (n.args.empty()) throw Error("min/max need at least one argument");
              auto best = evaluate(n.args.front(), ctx);
              for (std::size_t k = 1; k < n.args.size(); ++k) {
                auto v = evaluate(n.args[k], ctx);
                best = n.fn == Builtin::min ? std::min(best, v) : std::max(best, v);
              }
              return best;
            }
            case Builtin::alive: {
              auto v = evaluate(n.args.at(0), ctx);
              if (v < 0 || v > 0xffff) return 0;
              return ctx.alive(module_id(static_cast<unsigned>(v)));
            }
            case Builtin::count: return ctx.module_count();
          }
          return 0;
        }
      },
      expr.node());
}

namespace {

// Binding strength used by the printer; mirrors the parser's precedence table.
int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node())) {
    switch (b->op) {
      case BinaryOp::logical_or: return 1;
      case BinaryOp::logical_and: return 2;
      case BinaryOp::equal:
      case BinaryOp::not_equal: return 3;
      case BinaryOp::less:
      case BinaryOp::less_equal:
      case BinaryOp::greater:
      case BinaryOp::greater_equal: return 4;
      case BinaryOp::add:
      case BinaryOp::subtract: return 5;
      case BinaryOp::multiply: return 6;
    }
  }
  if (std::holds_alternative<Unary>(e.node())) return 7;
  return 8;
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::subtract: return "-";
    case BinaryOp::multiply: return "*";
    case BinaryOp::equal: return "==";
    case BinaryOp::not_equal: return "!=";
    case BinaryOp::less: return "<";
    case BinaryOp::less_equal: return "<=";
    case BinaryOp::greater: return ">";
    case BinaryOp::greater_equal: return ">=";
    case BinaryOp::logical_and: return "and";
    case BinaryOp::logical_or: return "or";
  }
  return "?";
}

void print(std::ostream& os, const Expr& e);

void print_child(std::ostream& os, const Expr& child, int min_prec) {
  if (precedence(child) < min_prec) {
    os << '(';
    print(os, child);
    os << ')';
  } else {
    print(os, child);
  }
}

void print(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, Name>) {
          os << n.name;
          if (n.module) os << '@' << *n.module;
        } else if constexpr (std::is_same_v<T, Unary>) {
          os << (n.op == UnaryOp::negate ? "-" : "not ");
          // "- -3" must not fold into a literal when reparsed.
          bool wrap = precedence(*n.operand) < 7 ||
                      (n.op == UnaryOp::negate &&
                       std::holds_alternative<Constant>(n.operand->node()));
          if (wrap) {
            os << '(';
            print(os, *n.operand);
            os << ')';
          } else {
            print(os, *n.operand);
          }
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = precedence(e);
          print_child(os, *n.lhs, p);
          os << ' ' << op_text(n.op) << ' ';
          print_child(os, *n.rhs, p + 1);
        } else {
          os << builtin_name(n.fn) << '(';
          for (std::size_t k = 0; k < n.args.size(); ++k) {
            if (k) os << ", ";
            print(os, n.args[k]);
          }
          os << ')';
        }
      },
      e.node());
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::ostringstream os;
  print(os, expr);
  return os.str();
}

void for_each_name(const Expr& expr, const std::function<void(const Name&)>& fn) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Name>) {
          fn(n);
        } else if constexpr (std::is_same_v<T, Unary>) {
          for_each_name(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, Binary>) {
          for_each_name(*n.lhs, fn);
          for_each_name(*n.rhs, fn);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) for_each_name(a, fn);
        }
      },
      expr.node());
}

}  // namespace tissuenet
