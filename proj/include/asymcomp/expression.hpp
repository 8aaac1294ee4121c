#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asymcomp {

enum class NodeKind { Number, Var, Unary, Binary, Call, PatternVar };

/// Immutable expression tree. Copies share structure.
///
/// Numbers are non-negative literals; negation is always an explicit Unary
/// node so that formatting and parsing agree.
class Expr {
 public:
  struct Node {
    NodeKind kind;
    double value = 0.0;
    std::string name;  // Var, PatternVar (without '?'), Call
    char op = 0;       // Unary ('-'), Binary (+ - * / ^)
    std::vector<Expr> children;
  };

  static Expr number(double value);
  static Expr var(std::string name);
  static Expr pattern_var(std::string name);
  static Expr neg(Expr child);
  static Expr binary(char op, Expr lhs, Expr rhs);
  static Expr call(std::string name, std::vector<Expr> args);

  NodeKind kind() const { return node_->kind; }
  double value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  char op() const { return node_->op; }
  std::span<const Expr> children() const { return node_->children; }
  bool is_leaf() const {
    return kind() == NodeKind::Number || kind() == NodeKind::Var;
  }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);

/// Operation name plus arity of an expression's root. Leaves (numbers and
/// variables) share the distinguished leaf signature, which has an empty name.
struct Signature {
  std::string name;
  std::size_t arity = 0;

  static Signature leaf() { return {}; }
  /// Parses "name/arity"; "leaf" yields the leaf signature.
  static Signature parse(std::string_view text);

  bool is_leaf() const { return name.empty(); }
  std::string to_string() const;

  auto operator<=>(const Signature&) const = default;
};

using Bindings = std::map<std::string, Expr>;
using VarValues = std::map<std::string, double>;

enum class EvalMode { Linear, Log };

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, Domain, Overflow, UnknownFunction };
  EvalError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SubstitutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arity of a builtin function, or nullopt when `name` is not a builtin.
std::optional<std::size_t> builtin_arity(std::string_view name);

Expr parse(std::string_view text);
std::string format(const Expr& e);
/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Linear mode returns the value, log mode its natural logarithm. Log mode
/// keeps every intermediate as (sign, ln|v|) so 2^n and factorial(n) stay
/// finite far beyond the double range.
double evaluate(const Expr& e, const VarValues& vars, EvalMode mode = EvalMode::Linear);

std::optional<Bindings> match_pattern(const Expr& pattern, const Expr& subject);
Expr substitute(const Expr& tmpl, const Bindings& bindings);
std::pair<Signature, std::vector<Expr>> decompose_top(const Expr& e);

std::set<std::string> free_variables(const Expr& e);
std::set<std::string> pattern_variables(const Expr& e);

}  // namespace asymcomp
