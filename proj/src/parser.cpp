#include <cctype>
#include <charconv>
#include <cmath>

#include "asymcomp/expression.hpp"

namespace asymcomp {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {

// Recursive descent over
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := NUMBER | IDENT | '?' IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) fail("expected expression, got end of input");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("expected operator or end of input, got '") +
                                   text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (true) {
      if (accept('+')) {
        lhs = Expr::binary('+', lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary('-', lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = Expr::binary('*', lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary('/', lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::neg(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) return Expr::binary('^', base, parse_unary());
    return base;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string parse_ident() {
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t int_digits = digits();
    std::size_t frac_digits = 0;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      frac_digits = digits();
    }
    if (int_digits + frac_digits == 0) {
      pos_ = start;
      fail("expected number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || !std::isfinite(value)) {
      std::size_t end = pos_;
      pos_ = start;
      fail("number literal out of range: " + std::string(text_.substr(start, end - start)));
    }
    (void)ptr;
    return Expr::number(value);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected number, identifier, '?name' or '(', got end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '?') {
      ++pos_;
      return Expr::pattern_var(parse_ident());
    }
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (ident_start(c)) {
      std::size_t name_pos = pos_;
      std::string name = parse_ident();
      if (!accept('(')) return Expr::var(std::move(name));
      std::vector<Expr> args;
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      if (!accept(')')) fail("expected ',' or ')' in argument list of '" + name + "'");
      if (auto arity = builtin_arity(name); arity && *arity != args.size()) {
        pos_ = name_pos;
        fail("builtin '" + name + "' takes " + std::to_string(*arity) + " argument(s), got " +
             std::to_string(args.size()));
      }
      return Expr::call(std::move(name), std::move(args));
    }
    fail(std::string("expected number, identifier, '?name' or '(', got '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer: higher binds tighter.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Binary:
      switch (e.op()) {
        case '+': case '-': return 1;
        case '*': case '/': return 2;
        default: return 4;
      }
    case NodeKind::Unary:
      return 3;
    default:
      return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_at(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Number:
      out += format_number(e.value());
      return;
    case NodeKind::Var:
      out += e.name();
      return;
    case NodeKind::PatternVar:
      out += '?';
      out += e.name();
      return;
    case NodeKind::Unary:
      out += '-';
      print_at(e.children()[0], 3, out);
      return;
    case NodeKind::Call: {
      out += e.name();
      out += '(';
      bool first = true;
      for (const auto& arg : e.children()) {
        if (!first) out += ", ";
        first = false;
        print(arg, out);
      }
      out += ')';
      return;
    }
    case NodeKind::Binary: {
      const auto& lhs = e.children()[0];
      const auto& rhs = e.children()[1];
      switch (e.op()) {
        case '+':
        case '-':
          print_at(lhs, 1, out);
          out += ' ';
          out += e.op();
          out += ' ';
          print_at(rhs, 2, out);
          return;
        case '*':
        case '/':
          print_at(lhs, 2, out);
          out += e.op();
          print_at(rhs, 3, out);
          return;
        default:
          print_at(lhs, 5, out);
          out += '^';
          print_at(rhs, 3, out);
          return;
      }
    }
  }
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string format(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace asymcomp
