#include "asymcomp/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace asymcomp {

Expr Expr::number(double value) {
  if (!std::isfinite(value) || value < 0.0 || std::signbit(value)) {
    throw std::invalid_argument("number literal must be finite and non-negative");
  }
  return Expr(std::make_shared<const Node>(Node{NodeKind::Number, value, {}, 0, {}}));
}

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Var, 0.0, std::move(name), 0, {}}));
}

Expr Expr::pattern_var(std::string name) {
  return Expr(
      std::make_shared<const Node>(Node{NodeKind::PatternVar, 0.0, std::move(name), 0, {}}));
}

Expr Expr::neg(Expr child) {
  return Expr(std::make_shared<const Node>(
      Node{NodeKind::Unary, 0.0, {}, '-', {std::move(child)}}));
}

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
  switch (op) {
    case '+': case '-': case '*': case '/': case '^':
      break;
    default:
      throw std::invalid_argument(std::string("unknown binary operator '") + op + "'");
  }
  return Expr(std::make_shared<const Node>(
      Node{NodeKind::Binary, 0.0, {}, op, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(std::string name, std::vector<Expr> args) {
  if (auto arity = builtin_arity(name); arity && *arity != args.size()) {
    throw std::invalid_argument("builtin '" + name + "' takes " + std::to_string(*arity) +
                                " argument(s), got " + std::to_string(args.size()));
  }
  return Expr(std::make_shared<const Node>(
      Node{NodeKind::Call, 0.0, std::move(name), 0, std::move(args)}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.op != y.op || x.name != y.name) return false;
  if (x.kind == NodeKind::Number && x.value != y.value) return false;
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) return false;
  }
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary('+', std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary('-', std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary('*', std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary('/', std::move(a), std::move(b)); }

Signature Signature::parse(std::string_view text) {
  if (text == "leaf") return leaf();
  auto slash = text.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
    throw std::invalid_argument("signature must look like name/arity: " + std::string(text));
  }
  std::size_t arity = 0;
  auto digits = text.substr(slash + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("bad arity in signature: " + std::string(text));
  }
  return {std::string(text.substr(0, slash)), arity};
}

std::string Signature::to_string() const {
  if (is_leaf()) return "leaf";
  return name + "/" + std::to_string(arity);
}

std::optional<std::size_t> builtin_arity(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, std::size_t>, 13> kBuiltins{{
      {"sin", 1}, {"cos", 1}, {"exp", 1}, {"ln", 1}, {"log2", 1}, {"sqrt", 1}, {"abs", 1},
      {"floor", 1}, {"ceil", 1}, {"min", 2}, {"max", 2}, {"mod", 2}, {"factorial", 1},
  }};
  for (const auto& [n, a] : kBuiltins) {
    if (n == name) return a;
  }
  return std::nullopt;
}

std::optional<Bindings> match_pattern(const Expr& pattern, const Expr& subject) {
  Bindings bindings;
  auto go = [&](auto&& self, const Expr& p, const Expr& s) -> bool {
    if (p.kind() == NodeKind::PatternVar) {
      auto [it, inserted] = bindings.try_emplace(p.name(), s);
      return inserted || it->second == s;
    }
    if (p.kind() != s.kind() || p.op() != s.op() || p.name() != s.name()) return false;
    if (p.kind() == NodeKind::Number && p.value() != s.value()) return false;
    auto pc = p.children();
    auto sc = s.children();
    if (pc.size() != sc.size()) return false;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      if (!self(self, pc[i], sc[i])) return false;
    }
    return true;
  };
  if (!go(go, pattern, subject)) return std::nullopt;
  return bindings;
}

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> children) {
  switch (e.kind()) {
    case NodeKind::Unary:
      return Expr::neg(std::move(children[0]));
    case NodeKind::Binary:
      return Expr::binary(e.op(), std::move(children[0]), std::move(children[1]));
    case NodeKind::Call:
      return Expr::call(e.name(), std::move(children));
    default:
      return e;
  }
}

}  // namespace

Expr substitute(const Expr& tmpl, const Bindings& bindings) {
  if (tmpl.kind() == NodeKind::PatternVar) {
    auto it = bindings.find(tmpl.name());
    if (it == bindings.end()) {
      throw SubstitutionError("unbound pattern variable ?" + tmpl.name());
    }
    return it->second;
  }
  if (tmpl.is_leaf()) return tmpl;
  std::vector<Expr> children;
  children.reserve(tmpl.children().size());
  for (const auto& c : tmpl.children()) children.push_back(substitute(c, bindings));
  return rebuild(tmpl, std::move(children));
}

std::pair<Signature, std::vector<Expr>> decompose_top(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Number:
    case NodeKind::Var:
    case NodeKind::PatternVar:
      return {Signature::leaf(), {}};
    case NodeKind::Unary:
    case NodeKind::Binary: {
      auto children = std::vector<Expr>(e.children().begin(), e.children().end());
      return {Signature{std::string(1, e.op()), children.size()}, std::move(children)};
    }
    case NodeKind::Call: {
      auto children = std::vector<Expr>(e.children().begin(), e.children().end());
      return {Signature{e.name(), children.size()}, std::move(children)};
    }
  }
  return {Signature::leaf(), {}};
}

namespace {

void collect(const Expr& e, NodeKind kind, std::set<std::string>& out) {
  if (e.kind() == kind) out.insert(e.name());
  for (const auto& c : e.children()) collect(c, kind, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, NodeKind::Var, out);
  return out;
}

std::set<std::string> pattern_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, NodeKind::PatternVar, out);
  return out;
}

}  // namespace asymcomp
