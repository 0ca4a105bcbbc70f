#include "dippl/lang.hpp"

#include <cctype>
#include <sstream>

namespace dippl {

SyntaxError::SyntaxError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident,
  Number,
  KwSkip,
  KwIf,
  KwElse,
  KwObserve,
  KwFlip,
  KwTrue,
  KwFalse,
  Semi,
  Assign,
  Tilde,
  LParen,
  RParen,
  LBrace,
  RBrace,
  OrOr,
  AndAnd,
  Bang,
  End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::KwSkip: return "'skip'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwObserve: return "'observe'";
    case Tok::KwFlip: return "'flip'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "':='";
    case Tok::Tilde: return "'~'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::OrOr: return "'||'";
    case Tok::AndAnd: return "'&&'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, {}, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = keyword(t.text);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.text = number();
      } else {
        t.kind = punct(c);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static Tok keyword(const std::string& s) {
    if (s == "skip") return Tok::KwSkip;
    if (s == "if") return Tok::KwIf;
    if (s == "else") return Tok::KwElse;
    if (s == "observe") return Tok::KwObserve;
    if (s == "flip") return Tok::KwFlip;
    if (s == "true") return Tok::KwTrue;
    if (s == "false") return Tok::KwFalse;
    return Tok::Ident;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool at(char c, std::size_t off = 0) const { return pos_ + off < src_.size() && src_[pos_ + off] == c; }

  bool digit_at(std::size_t off) const {
    return pos_ + off < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + off]));
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (at('/') && at('/', 1)) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string number() {
    std::size_t start = pos_;
    while (digit_at(0)) advance();
    if (at('.') && digit_at(1)) {
      advance();
      while (digit_at(0)) advance();
    } else if (at('/') && digit_at(1)) {
      advance();
      while (digit_at(0)) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  Tok punct(char c) {
    std::size_t line = line_, col = col_;
    auto two = [&](char second, Tok kind) {
      if (!at(second, 1)) {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance();
      advance();
      return kind;
    };
    switch (c) {
      case ';': advance(); return Tok::Semi;
      case '~': advance(); return Tok::Tilde;
      case '(': advance(); return Tok::LParen;
      case ')': advance(); return Tok::RParen;
      case '{': advance(); return Tok::LBrace;
      case '}': advance(); return Tok::RBrace;
      case '!': advance(); return Tok::Bang;
      case ':': return two('=', Tok::Assign);
      case '|': return two('|', Tok::OrOr);
      case '&': return two('&', Tok::AndAnd);
      default: break;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  StmtPtr program() {
    auto s = stmt();
    expect(Tok::End);
    return s;
  }

  ExprPtr standalone_expr() {
    auto e = expr();
    expect(Tok::End);
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool check(Tok k) const { return peek().kind == k; }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok k) {
    if (!check(k)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::Ident || t.kind == Tok::Number ? "'" + t.text + "'" : describe(t.kind);
    throw SyntaxError("expected " + what + ", found " + found, t.line, t.column);
  }

  Token expect(Tok k) {
    if (!check(k)) fail(describe(k));
    return take();
  }

  // A statement list ends at end of input or at a closing brace.
  bool at_list_end() const { return check(Tok::End) || check(Tok::RBrace); }

  StmtPtr stmt() {
    std::vector<StmtPtr> parts;
    parts.push_back(atom());
    while (accept(Tok::Semi)) {
      if (at_list_end()) break;
      parts.push_back(atom());
    }
    return stmt::seq(std::move(parts));
  }

  StmtPtr atom() {
    switch (peek().kind) {
      case Tok::KwSkip:
        take();
        return stmt::skip();
      case Tok::KwIf: {
        take();
        auto cond = expr();
        expect(Tok::LBrace);
        auto then_branch = stmt();
        expect(Tok::RBrace);
        expect(Tok::KwElse);
        expect(Tok::LBrace);
        auto else_branch = stmt();
        expect(Tok::RBrace);
        return stmt::if_else(cond, then_branch, else_branch);
      }
      case Tok::KwObserve: {
        take();
        expect(Tok::LParen);
        auto cond = expr();
        expect(Tok::RParen);
        return stmt::observe(cond);
      }
      case Tok::Ident: {
        auto target = take().text;
        if (accept(Tok::Assign)) return stmt::assign(target, expr());
        if (accept(Tok::Tilde)) {
          expect(Tok::KwFlip);
          expect(Tok::LParen);
          auto num = expect(Tok::Number);
          expect(Tok::RParen);
          Rational theta;
          if (!parse_rational(num.text, theta)) {
            throw ValueError("invalid probability '" + num.text + "' at " + std::to_string(num.line) +
                             ":" + std::to_string(num.column));
          }
          if (theta < 0 || theta > 1) {
            throw ValueError("probability " + num.text + " at " + std::to_string(num.line) + ":" +
                             std::to_string(num.column) + " is outside [0, 1]");
          }
          return stmt::flip(target, theta, flips_++);
        }
        fail("':=' or '~'");
      }
      default:
        fail("statement");
    }
  }

  ExprPtr expr() {
    auto lhs = and_expr();
    while (accept(Tok::OrOr)) lhs = expr::lor(lhs, and_expr());
    return lhs;
  }

  ExprPtr and_expr() {
    auto lhs = not_expr();
    while (accept(Tok::AndAnd)) lhs = expr::land(lhs, not_expr());
    return lhs;
  }

  ExprPtr not_expr() {
    if (accept(Tok::Bang)) return expr::lnot(not_expr());
    switch (peek().kind) {
      case Tok::KwTrue: take(); return expr::constant(true);
      case Tok::KwFalse: take(); return expr::constant(false);
      case Tok::Ident: return expr::var(take().text);
      case Tok::LParen: {
        take();
        auto e = expr();
        expect(Tok::RParen);
        return e;
      }
      default: fail("expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t flips_ = 0;
};

}  // namespace

Program parse(std::string_view source) {
  Parser parser(Lexer(source).run());
  return make_program(parser.program());
}

ExprPtr parse_expr(std::string_view source) {
  Parser parser(Lexer(source).run());
  return parser.standalone_expr();
}

}  // namespace dippl
