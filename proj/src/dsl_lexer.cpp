#include "dsl_lexer.hpp"

#include <array>
#include <cctype>

namespace tissuenet::dsl {

namespace {

constexpr std::array<std::string_view, 3> kHyphenated{"per-location", "forbid-disconnect",
                                                      "all-splits"};
constexpr long kMaxLiteral = 1'000'000'000;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

}  // namespace

std::string describe(Tok kind) {
  switch (kind) {
    case Tok::ident: return "identifier";
    case Tok::integer: return "integer";
    case Tok::string: return "string";
    case Tok::newline: return "end of line";
    case Tok::semicolon: return "';'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::at: return "'@'";
    case Tok::assign: return "':='";
    case Tok::equals: return "'='";
    case Tok::eqeq: return "'=='";
    case Tok::ne: return "'!='";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::gt: return "'>'";
    case Tok::ge: return "'>='";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::bang: return "'!'";
    case Tok::andand: return "'&&'";
    case Tok::oror: return "'||'";
    case Tok::dotdot: return "'..'";
    case Tok::end: return "end of input";
  }
  return "token";
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case Tok::ident: return "'" + tok.text + "'";
    case Tok::integer: return "'" + std::to_string(tok.value) + "'";
    case Tok::string: return "string \"" + tok.text + "\"";
    default: return describe(tok.kind);
  }
}

std::vector<Token> lex(std::string_view text, std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto peek = [&](std::size_t ahead = 0) -> char {
    return i + ahead < text.size() ? text[i + ahead] : '\0';
  };
  auto push = [&](Tok kind, SourcePos pos, std::size_t width) {
    out.push_back({kind, {}, 0, pos});
    advance(width);
  };

  while (i < text.size()) {
    char c = text[i];
    SourcePos pos{line, col};
    if (c == ' ' || c == '\t' || c == '\r') {
      advance();
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
    } else if (c == '\n') {
      push(Tok::newline, pos, 1);
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance();
      std::string word(text.substr(start, i - start));
      if (peek() == '-' && ident_start(peek(1))) {
        std::size_t k = i + 1;
        while (k < text.size() && ident_char(text[k])) ++k;
        std::string joined = word + std::string(text.substr(i, k - i));
        for (auto kw : kHyphenated) {
          if (joined == kw) {
            advance(k - i);
            word = joined;
            break;
          }
        }
      }
      out.push_back({Tok::ident, std::move(word), 0, pos});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      long value = 0;
      bool overflow = false;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i] - '0');
        if (value > kMaxLiteral) {
          overflow = true;
          value = kMaxLiteral;
        }
        advance();
      }
      if (overflow) diagnostics.push_back({pos, "integer literal is too large"});
      out.push_back({Tok::integer, {}, value, pos});
    } else if (c == '"') {
      advance();
      std::string contents;
      bool closed = false;
      while (i < text.size() && text[i] != '\n') {
        if (text[i] == '"') {
          advance();
          closed = true;
          break;
        }
        if (text[i] == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
          advance();
        }
        contents.push_back(text[i]);
        advance();
      }
      if (!closed) diagnostics.push_back({pos, "unterminated string literal"});
      out.push_back({Tok::string, std::move(contents), 0, pos});
    } else {
      char n = peek(1);
      switch (c) {
        case ';': push(Tok::semicolon, pos, 1); break;
        case '(': push(Tok::lparen, pos, 1); break;
        case ')': push(Tok::rparen, pos, 1); break;
        case '{': push(Tok::lbrace, pos, 1); break;
        case '}': push(Tok::rbrace, pos, 1); break;
        case ',': push(Tok::comma, pos, 1); break;
        case '@': push(Tok::at, pos, 1); break;
        case '+': push(Tok::plus, pos, 1); break;
        case '-': push(Tok::minus, pos, 1); break;
        case '*': push(Tok::star, pos, 1); break;
        case ':':
          if (n == '=') {
            push(Tok::assign, pos, 2);
          } else {
            diagnostics.push_back({pos, "unexpected ':' (did you mean ':='?)"});
            advance();
          }
          break;
        case '=': n == '=' ? push(Tok::eqeq, pos, 2) : push(Tok::equals, pos, 1); break;
        case '!': n == '=' ? push(Tok::ne, pos, 2) : push(Tok::bang, pos, 1); break;
        case '<': n == '=' ? push(Tok::le, pos, 2) : push(Tok::lt, pos, 1); break;
        case '>': n == '=' ? push(Tok::ge, pos, 2) : push(Tok::gt, pos, 1); break;
        case '&':
          if (n == '&') {
            push(Tok::andand, pos, 2);
          } else {
            diagnostics.push_back({pos, "unexpected '&' (did you mean '&&'?)"});
            advance();
          }
          break;
        case '|':
          if (n == '|') {
            push(Tok::oror, pos, 2);
          } else {
            diagnostics.push_back({pos, "unexpected '|' (did you mean '||'?)"});
            advance();
          }
          break;
        case '.':
          if (n == '.') {
            push(Tok::dotdot, pos, 2);
          } else {
            diagnostics.push_back({pos, "unexpected '.'"});
            advance();
          }
          break;
        default: {
          std::string shown = std::isprint(static_cast<unsigned char>(c))
                                  ? std::string(1, c)
                                  : "byte 0x" + std::to_string(static_cast<unsigned char>(c));
          diagnostics.push_back({pos, "unexpected character " + shown});
          advance();
        }
      }
    }
  }
  out.push_back({Tok::end, {}, 0, {line, col}});
  return out;
}

}  // namespace tissuenet::dsl
