#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "dsl_lexer.hpp"
#include "tissuenet/dsl.hpp"

namespace tissuenet {

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::ostringstream os;
  os << file << ':' << d.pos.line << ':' << d.pos.column << ": error: " << d.message;
  return os.str();
}

namespace dsl {
namespace {

constexpr std::array<std::string_view, 7> kReservedNames{"and", "or",    "not",  "min",
                                                         "max", "alive", "count"};
constexpr std::array<std::string_view, 12> kClauseWords{
    "model",  "grid", "bdg",     "identifiers", "component", "sigma",
    "rule",   "die",  "migrate", "divide",      "edges",     "init"};

struct SyntaxError {
  Diagnostic diagnostic;
};

std::string join_expected(std::initializer_list<std::string_view> items) {
  std::string out;
  std::size_t k = 0;
  for (auto item : items) {
    if (k++) out += k == items.size() ? " or " : ", ";
    out += item;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::vector<Diagnostic>& diagnostics() { return diags_; }

  ModelDocument parse_document(bool& empty) {
    ModelDocument doc;
    skip_separators();
    empty = at(Tok::end);
    if (empty) {
      diags_.push_back({{1, 1}, "missing model header"});
      return doc;
    }
    if (!at_word("model")) {
      diags_.push_back({peek().pos, "missing model header (expected 'model \"name\"', found " +
                                        describe(peek()) + ")"});
    }
    bool seen_header = false;
    while (!at(Tok::end)) {
      try {
        clause(doc, seen_header);
        if (!at(Tok::newline) && !at(Tok::semicolon) && !at(Tok::end)) {
          fail("expected end of clause (newline or ';')");
        }
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diagnostic);
        recover();
      }
      skip_separators();
    }
    return doc;
  }

  Expr parse_standalone_expression() {
    skip_newlines();
    Expr e = expression();
    skip_newlines();
    if (!at(Tok::end)) fail("expected an operator or end of expression");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(idx_ + ahead, tokens_.size() - 1)];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view w) const { return at(Tok::ident) && peek().text == w; }
  Token next() {
    Token t = peek();
    if (idx_ + 1 < tokens_.size()) ++idx_;
    return t;
  }

  // End-of-input positions are reported at the last real token so they stay inside the text.
  SourcePos pos_of(const Token& t) const {
    if (t.kind != Tok::end) return t.pos;
    for (std::size_t k = tokens_.size(); k-- > 0;) {
      if (tokens_[k].kind != Tok::end) return tokens_[k].pos;
    }
    return {1, 1};
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError{{pos_of(peek()), expected + ", found " + describe(peek())}};
  }
  [[noreturn]] void fail_at(SourcePos pos, std::string message) const {
    throw SyntaxError{{pos, std::move(message)}};
  }

  Token expect(Tok kind, std::string_view what = {}) {
    if (!at(kind)) fail("expected " + (what.empty() ? describe(kind) : std::string(what)));
    return next();
  }
  Token expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "'");
    return next();
  }
  std::string name(std::string_view what) { return expect(Tok::ident, what).text; }
  long integer(std::string_view what) { return expect(Tok::integer, what).value; }
  long signed_integer(std::string_view what) {
    bool neg = false;
    if (at(Tok::minus)) {
      next();
      neg = true;
    }
    long v = integer(what);
    return neg ? -v : v;
  }

  void skip_separators() {
    while (at(Tok::newline) || at(Tok::semicolon)) next();
  }
  void skip_newlines() {
    while (at(Tok::newline)) next();
  }
  void recover() {
    int depth = 0;
    while (!at(Tok::end)) {
      if (at(Tok::lbrace)) ++depth;
      if (at(Tok::rbrace) && depth > 0) --depth;
      if (depth == 0 && (at(Tok::newline) || at(Tok::semicolon))) return;
      next();
    }
  }

  void clause(ModelDocument& doc, bool& seen_header) {
    if (!at(Tok::ident)) fail("expected a clause keyword");
    const Token kw = peek();
    const std::string& w = kw.text;
    if (w == "model") {
      next();
      std::string title = expect(Tok::string, "a quoted model name").text;
      if (seen_header) fail_at(kw.pos, "duplicate model header");
      seen_header = true;
      doc.name = std::move(title);
      doc.header_pos = kw.pos;
    } else if (w == "grid") {
      next();
      BackendClause b;
      b.pos = kw.pos;
      if (at_word("square")) {
        b.kind = BackendKind::grid_square;
      } else if (at_word("tri")) {
        b.kind = BackendKind::grid_tri;
      } else {
        fail("expected 'square' or 'tri'");
      }
      next();
      if (at_word("cutoff")) {
        next();
        b.cutoff = static_cast<unsigned>(integer("a cutoff distance"));
      }
      set_backend(doc, b);
    } else if (w == "bdg") {
      next();
      BackendClause b;
      b.kind = BackendKind::bdg;
      b.pos = kw.pos;
      expect_word("degree");
      b.degree = static_cast<unsigned>(integer("a degree bound"));
      std::set<std::string> seen;
      while (at(Tok::ident)) {
        const Token opt = next();
        if (!seen.insert(opt.text).second) fail_at(opt.pos, "option '" + opt.text + "' given twice");
        if (opt.text == "cutoff") {
          b.cutoff = static_cast<unsigned>(integer("a cutoff distance"));
        } else if (opt.text == "strict") {
          if (seen.count("all-splits")) fail_at(opt.pos, "'strict' conflicts with 'all-splits'");
          b.strict = true;
        } else if (opt.text == "all-splits") {
          if (seen.count("strict")) fail_at(opt.pos, "'all-splits' conflicts with 'strict'");
          b.strict = false;
        } else if (opt.text == "forbid-disconnect") {
          b.forbid_disconnect = true;
        } else {
          fail_at(opt.pos, "expected " +
                               join_expected({"'cutoff'", "'strict'", "'all-splits'",
                                              "'forbid-disconnect'"}) +
                               ", found '" + opt.text + "'");
        }
      }
      set_backend(doc, b);
    } else if (w == "identifiers") {
      next();
      long n = integer("the number of identifiers");
      if (doc.identifiers) fail_at(kw.pos, "duplicate 'identifiers' clause");
      doc.identifiers = n;
      doc.identifiers_pos = kw.pos;
    } else if (w == "component") {
      next();
      ComponentClause c;
      c.pos = peek().pos;
      c.name = name("a component name");
      c.low = integer("the lower bound of a range");
      expect(Tok::dotdot);
      c.high = integer("the upper bound of a range");
      doc.components.push_back(std::move(c));
    } else if (w == "sigma") {
      next();
      SigmaClause s;
      s.pos = peek().pos;
      s.name = name("an integration function name");
      expect(Tok::equals);
      if (at_word("max_round")) {
        s.kind = IntegrationKind::max_round;
      } else if (at_word("min_round")) {
        s.kind = IntegrationKind::min_round;
      } else if (at_word("sum_clamp")) {
        s.kind = IntegrationKind::sum_clamp;
      } else {
        fail("expected " + join_expected({"'max_round'", "'min_round'", "'sum_clamp'"}));
      }
      next();
      expect_word("of");
      s.source_pos = peek().pos;
      s.source = name("a component name");
      doc.sigmas.push_back(std::move(s));
    } else if (w == "rule") {
      next();
      RuleClause r;
      r.pos = peek().pos;
      r.component = name("a component name");
      expect(Tok::assign);
      r.expr = expression();
      doc.rules.push_back(std::move(r));
    } else if (w == "die" || w == "migrate" || w == "divide") {
      next();
      TransformClause t;
      t.pos = kw.pos;
      t.kind = w == "die" ? TransformKind::die
                          : (w == "migrate" ? TransformKind::migrate : TransformKind::divide);
      expect_word("when");
      t.guard = expression();
      if (at_word("per-location")) {
        if (t.kind == TransformKind::die) fail("'per-location' applies to migrate and divide only");
        next();
        t.per_location = true;
      }
      doc.transforms.push_back(std::move(t));
    } else if (w == "edges") {
      next();
      edges(doc);
    } else if (w == "init") {
      next();
      init(doc);
    } else {
      std::string list;
      for (auto c : kClauseWords) list += (list.empty() ? "'" : ", '") + std::string(c) + "'";
      fail("expected a clause keyword (" + list + ")");
    }
  }

  void set_backend(ModelDocument& doc, const BackendClause& b) {
    if (doc.backend) fail_at(b.pos, "duplicate backend clause");
    doc.backend = b;
  }

  void edges(ModelDocument& doc) {
    expect(Tok::lbrace);
    skip_newlines();
    if (at(Tok::rbrace)) {
      next();
      return;
    }
    while (true) {
      EdgeClause e;
      e.pos = peek().pos;
      e.a = integer("a node identifier");
      expect(Tok::minus);
      e.b = integer("a node identifier");
      doc.edges.push_back(e);
      skip_newlines();
      if (at(Tok::comma)) {
        next();
        skip_newlines();
        continue;
      }
      expect(Tok::rbrace, "',' or '}'");
      return;
    }
  }

  void init(ModelDocument& doc) {
    InitClause c;
    c.pos = peek().pos;
    c.module = integer("a module identifier");
    if (at_word("at")) {
      next();
      c.at_pos = peek().pos;
      expect(Tok::lparen);
      long a = signed_integer("a coordinate");
      expect(Tok::comma);
      long b = signed_integer("a coordinate");
      expect(Tok::rparen);
      c.at = GbfCoord{static_cast<int>(a), static_cast<int>(b)};
    }
    while (at(Tok::ident)) {
      LevelAssignment l;
      l.pos = peek().pos;
      l.component = next().text;
      expect(Tok::equals);
      l.value = signed_integer("a level");
      c.levels.push_back(std::move(l));
    }
    doc.inits.push_back(std::move(c));
  }

  // Precedence climbing, loosest first: or, and, equality, relational, additive,
  // multiplicative, unary.
  Expr expression() { return disjunction(); }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(Tok::oror) || at_word("or")) {
      SourcePos p = next().pos;
      lhs = Expr::binary(BinaryOp::logical_or, lhs, conjunction(), p);
    }
    return lhs;
  }
  Expr conjunction() {
    Expr lhs = equality();
    while (at(Tok::andand) || at_word("and")) {
      SourcePos p = next().pos;
      lhs = Expr::binary(BinaryOp::logical_and, lhs, equality(), p);
    }
    return lhs;
  }
  Expr equality() {
    Expr lhs = relational();
    while (at(Tok::eqeq) || at(Tok::ne)) {
      Token op = next();
      lhs = Expr::binary(op.kind == Tok::eqeq ? BinaryOp::equal : BinaryOp::not_equal, lhs,
                         relational(), op.pos);
    }
    return lhs;
  }
  Expr relational() {
    Expr lhs = additive();
    while (at(Tok::lt) || at(Tok::le) || at(Tok::gt) || at(Tok::ge)) {
      Token op = next();
      BinaryOp bop = op.kind == Tok::lt   ? BinaryOp::less
                     : op.kind == Tok::le ? BinaryOp::less_equal
                     : op.kind == Tok::gt ? BinaryOp::greater
                                          : BinaryOp::greater_equal;
      lhs = Expr::binary(bop, lhs, additive(), op.pos);
    }
    return lhs;
  }
  Expr additive() {
    Expr lhs = multiplicative();
    while (at(Tok::plus) || at(Tok::minus)) {
      Token op = next();
      lhs = Expr::binary(op.kind == Tok::plus ? BinaryOp::add : BinaryOp::subtract, lhs,
                         multiplicative(), op.pos);
    }
    return lhs;
  }
  Expr multiplicative() {
    Expr lhs = unary();
    while (at(Tok::star)) {
      SourcePos p = next().pos;
      lhs = Expr::binary(BinaryOp::multiply, lhs, unary(), p);
    }
    return lhs;
  }
  Expr unary() {
    if (at(Tok::minus)) {
      SourcePos p = next().pos;
      if (at(Tok::integer)) return Expr::constant(-next().value, p);
      return Expr::unary(UnaryOp::negate, unary(), p);
    }
    if (at(Tok::bang) || at_word("not")) {
      SourcePos p = next().pos;
      return Expr::unary(UnaryOp::logical_not, unary(), p);
    }
    return primary();
  }
  Expr primary() {
    const Token t = peek();
    if (t.kind == Tok::integer) {
      next();
      return Expr::constant(t.value, t.pos);
    }
    if (t.kind == Tok::lparen) {
      next();
      Expr inner = expression();
      expect(Tok::rparen);
      return inner;
    }
    if (t.kind == Tok::ident && t.text != "and" && t.text != "or" && t.text != "not") {
      next();
      if (at(Tok::lparen)) return call(t);
      if (at(Tok::at)) {
        next();
        long m = integer("a module identifier");
        return Expr::name_at(t.text, static_cast<unsigned>(m), t.pos);
      }
      return Expr::name(t.text, t.pos);
    }
    fail("expected an integer, a name, a function call or '('");
  }
  Expr call(const Token& fn_tok) {
    Builtin fn;
    if (fn_tok.text == "min") {
      fn = Builtin::min;
    } else if (fn_tok.text == "max") {
      fn = Builtin::max;
    } else if (fn_tok.text == "alive") {
      fn = Builtin::alive;
    } else if (fn_tok.text == "count") {
      fn = Builtin::count;
    } else {
      fail_at(fn_tok.pos, "unknown function '" + fn_tok.text + "'");
    }
    expect(Tok::lparen);
    std::vector<Expr> args;
    if (!at(Tok::rparen)) {
      args.push_back(expression());
      while (at(Tok::comma)) {
        next();
        args.push_back(expression());
      }
    }
    expect(Tok::rparen, "',' or ')'");
    return Expr::call(fn, std::move(args), fn_tok.pos);
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
  std::vector<Diagnostic> diags_;
};

bool reserved(const std::string& name) {
  return std::find(kReservedNames.begin(), kReservedNames.end(), name) != kReservedNames.end();
}

const char* transform_word(TransformKind k) {
  switch (k) {
    case TransformKind::die: return "die";
    case TransformKind::migrate: return "migrate";
    case TransformKind::divide: return "divide";
  }
  return "?";
}

// Duplicate declarations and name resolution.
void check_names(const ModelDocument& doc, std::vector<Diagnostic>& diags) {
  std::map<std::string, SourcePos> declared;
  std::vector<std::string> components;
  std::vector<std::string> sigmas;
  for (const auto& c : doc.components) {
    if (reserved(c.name)) {
      diags.push_back({c.pos, "'" + c.name + "' is a reserved word"});
    } else if (!declared.emplace(c.name, c.pos).second) {
      diags.push_back({c.pos, "duplicate declaration of '" + c.name + "'"});
    } else {
      components.push_back(c.name);
    }
  }
  std::set<std::string> component_set(components.begin(), components.end());
  for (const auto& s : doc.sigmas) {
    if (reserved(s.name)) {
      diags.push_back({s.pos, "'" + s.name + "' is a reserved word"});
    } else if (!declared.emplace(s.name, s.pos).second) {
      diags.push_back({s.pos, "duplicate declaration of '" + s.name + "'"});
    } else {
      sigmas.push_back(s.name);
    }
    if (!component_set.count(s.source)) {
      diags.push_back({s.source_pos, "unresolved reference to component '" + s.source + "'"});
    }
  }

  ExprScope scope{components, sigmas};
  auto check_expr = [&](const Expr& e) {
    std::vector<ExprIssue> issues;
    resolve(e, scope, issues);
    for (auto& issue : issues) diags.push_back({issue.pos, std::move(issue.message)});
  };

  std::set<std::string> ruled;
  for (const auto& r : doc.rules) {
    if (!component_set.count(r.component)) {
      diags.push_back({r.pos, "unresolved reference to component '" + r.component + "'"});
    } else if (!ruled.insert(r.component).second) {
      diags.push_back({r.pos, "duplicate rule for '" + r.component + "'"});
    }
    check_expr(r.expr);
  }

  std::set<TransformKind> transforms;
  for (const auto& t : doc.transforms) {
    if (!transforms.insert(t.kind).second) {
      diags.push_back({t.pos, std::string("duplicate '") + transform_word(t.kind) + "' clause"});
    }
    check_expr(t.guard);
  }

  std::set<long> modules;
  for (const auto& init : doc.inits) {
    if (!modules.insert(init.module).second) {
      diags.push_back({init.pos, "module " + std::to_string(init.module) + " initialised twice"});
    }
    std::set<std::string> assigned;
    for (const auto& l : init.levels) {
      if (!component_set.count(l.component)) {
        diags.push_back({l.pos, "unresolved reference to component '" + l.component + "'"});
      } else if (!assigned.insert(l.component).second) {
        diags.push_back({l.pos, "'" + l.component + "' assigned twice"});
      }
    }
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace
}  // namespace dsl

ParseResult parse_model(std::string_view text) {
  ParseResult result;
  auto tokens = dsl::lex(text, result.diagnostics);
  dsl::Parser parser(std::move(tokens));
  bool empty = false;
  ModelDocument doc = parser.parse_document(empty);
  auto& syntax = parser.diagnostics();
  result.diagnostics.insert(result.diagnostics.end(), syntax.begin(), syntax.end());
  if (empty) return result;
  dsl::check_names(doc, result.diagnostics);
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.pos.line, a.pos.column) < std::tie(b.pos.line, b.pos.column);
                   });
  result.document = std::move(doc);
  return result;
}

ExprParseResult parse_expression(std::string_view text) {
  ExprParseResult result;
  auto tokens = dsl::lex(text, result.diagnostics);
  dsl::Parser parser(std::move(tokens));
  try {
    Expr e = parser.parse_standalone_expression();
    if (result.diagnostics.empty()) result.expr = std::move(e);
  } catch (const dsl::SyntaxError& e) {
    result.diagnostics.push_back(e.diagnostic);
  }
  return result;
}

std::string print_model(const ModelDocument& doc) {
  std::ostringstream os;
  os << "model " << dsl::quote(doc.name) << '\n';
  if (doc.backend) {
    const auto& b = *doc.backend;
    if (b.kind == BackendKind::bdg) {
      os << "bdg degree " << b.degree;
      if (b.cutoff) os << " cutoff " << *b.cutoff;
      if (!b.strict) os << " all-splits";
      if (b.forbid_disconnect) os << " forbid-disconnect";
    } else {
      os << "grid " << (b.kind == BackendKind::grid_square ? "square" : "tri");
      if (b.cutoff) os << " cutoff " << *b.cutoff;
    }
    os << '\n';
  }
  if (doc.identifiers) os << "identifiers " << *doc.identifiers << '\n';
  for (const auto& c : doc.components) {
    os << "component " << c.name << ' ' << c.low << ".." << c.high << '\n';
  }
  for (const auto& s : doc.sigmas) {
    os << "sigma " << s.name << " = " << to_string(s.kind) << " of " << s.source << '\n';
  }
  for (const auto& r : doc.rules) os << "rule " << r.component << " := " << to_string(r.expr) << '\n';
  for (const auto& t : doc.transforms) {
    os << dsl::transform_word(t.kind) << " when " << to_string(t.guard);
    if (t.per_location) os << " per-location";
    os << '\n';
  }
  if (!doc.edges.empty()) {
    os << "edges {";
    for (std::size_t k = 0; k < doc.edges.size(); ++k) {
      os << (k ? ", " : " ") << doc.edges[k].a << '-' << doc.edges[k].b;
    }
    os << " }\n";
  }
  for (const auto& init : doc.inits) {
    os << "init " << init.module;
    if (init.at) os << " at " << format_location(*init.at);
    for (const auto& l : init.levels) os << ' ' << l.component << '=' << l.value;
    os << '\n';
  }
  return os.str();
}

}  // namespace tissuenet
