#include <cmath>
#include <limits>
#include <numbers>

#include "asymcomp/expression.hpp"

namespace asymcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// ln of the largest finite double, rounded down.
constexpr double kMaxLog = 709.78;
// Above 2^52 every double is an integer.
constexpr double kIntegralLog = 52.0 * std::numbers::ln2;

[[noreturn]] void domain(const std::string& what) {
  throw EvalError(EvalError::Kind::Domain, what);
}

[[noreturn]] void overflow(const std::string& what) {
  throw EvalError(EvalError::Kind::Overflow, what + " overflows the linear range; use log mode");
}

double lookup(const Expr& e, const VarValues& vars) {
  auto it = vars.find(e.name());
  if (it == vars.end()) {
    throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable '" + e.name() + "'");
  }
  return it->second;
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

double factorial_linear(double x) {
  if (!(x > -1.0)) domain("factorial of " + format_number(x));
  if (is_integer(x) && x <= 170.0) {
    double acc = 1.0;
    for (int k = 2; k <= static_cast<int>(x); ++k) acc *= k;
    return acc;
  }
  double v = std::tgamma(x + 1.0);
  if (!std::isfinite(v)) overflow("factorial");
  return v;
}

double math_mod(double a, double b) {
  if (b == 0.0) domain("mod by zero");
  return a - b * std::floor(a / b);
}

// ---------------------------------------------------------------------------
// Linear domain

double eval_linear(const Expr& e, const VarValues& vars);

double checked(double v, const char* what) {
  if (std::isnan(v)) domain(std::string("undefined result in ") + what);
  if (std::isinf(v)) overflow(what);
  return v;
}

double call_linear(const Expr& e, const VarValues& vars) {
  const auto& f = e.name();
  auto args = e.children();
  auto arg = [&](std::size_t i) { return eval_linear(args[i], vars); };
  if (f == "sin") return std::sin(arg(0));
  if (f == "cos") return std::cos(arg(0));
  if (f == "exp") return checked(std::exp(arg(0)), "exp");
  if (f == "ln" || f == "log2") {
    double x = arg(0);
    if (!(x > 0.0)) domain(f + " of non-positive value " + format_number(x));
    return f == "ln" ? std::log(x) : std::log2(x);
  }
  if (f == "sqrt") {
    double x = arg(0);
    if (x < 0.0) domain("sqrt of negative value");
    return std::sqrt(x);
  }
  if (f == "abs") return std::fabs(arg(0));
  if (f == "floor") return std::floor(arg(0));
  if (f == "ceil") return std::ceil(arg(0));
  if (f == "min") return std::fmin(arg(0), arg(1));
  if (f == "max") return std::fmax(arg(0), arg(1));
  if (f == "mod") return math_mod(arg(0), arg(1));
  if (f == "factorial") return factorial_linear(arg(0));
  throw EvalError(EvalError::Kind::UnknownFunction, "unknown function '" + f + "'");
}

double eval_linear(const Expr& e, const VarValues& vars) {
  switch (e.kind()) {
    case NodeKind::Number:
      return e.value();
    case NodeKind::Var:
      return lookup(e, vars);
    case NodeKind::PatternVar:
      throw EvalError(EvalError::Kind::UnboundVariable,
                      "pattern variable ?" + e.name() + " cannot be evaluated");
    case NodeKind::Unary:
      return -eval_linear(e.children()[0], vars);
    case NodeKind::Call:
      return call_linear(e, vars);
    case NodeKind::Binary: {
      double a = eval_linear(e.children()[0], vars);
      double b = eval_linear(e.children()[1], vars);
      switch (e.op()) {
        case '+': return checked(a + b, "addition");
        case '-': return checked(a - b, "subtraction");
        case '*': return checked(a * b, "multiplication");
        case '/':
          if (b == 0.0) domain("division by zero");
          return checked(a / b, "division");
        default:
          if (a == 0.0 && b < 0.0) domain("zero raised to a negative power");
          if (a < 0.0 && !is_integer(b)) domain("negative base with non-integer exponent");
          return checked(std::pow(a, b), "power");
      }
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Log domain: value = sign * exp(mag)

struct SignedLog {
  int sign = 0;
  double mag = -kInf;

  static SignedLog of(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  double linear(const char* what) const {
    if (sign == 0) return 0.0;
    if (mag > kMaxLog) overflow(what);
    return sign * std::exp(mag);
  }
};

SignedLog negate(SignedLog a) { return {-a.sign, a.mag}; }

SignedLog add(SignedLog a, SignedLog b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.mag < b.mag) std::swap(a, b);
  double d = b.mag - a.mag;
  if (a.sign == b.sign) return {a.sign, a.mag + std::log1p(std::exp(d))};
  if (d == 0.0) return {};
  return {a.sign, a.mag + std::log1p(-std::exp(d))};
}

SignedLog multiply(SignedLog a, SignedLog b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.mag + b.mag};
}

int compare(SignedLog a, SignedLog b) {
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  if (a.sign == 0 || a.mag == b.mag) return 0;
  bool larger_mag = a.mag > b.mag;
  return (larger_mag == (a.sign > 0)) ? 1 : -1;
}

SignedLog power(SignedLog base, double exponent) {
  if (exponent == 0.0) return {1, 0.0};
  if (base.sign == 0) {
    if (exponent < 0.0) domain("zero raised to a negative power");
    return {};
  }
  int sign = 1;
  if (base.sign < 0) {
    if (!is_integer(exponent)) domain("negative base with non-integer exponent");
    sign = std::fmod(std::fabs(exponent), 2.0) == 1.0 ? -1 : 1;
  }
  double mag = exponent * base.mag;
  if (std::isnan(mag)) domain("undefined power");
  if (std::isinf(mag)) overflow("power");
  return {sign, mag};
}

SignedLog eval_log(const Expr& e, const VarValues& vars);

SignedLog call_log(const Expr& e, const VarValues& vars) {
  const auto& f = e.name();
  auto args = e.children();
  auto arg = [&](std::size_t i) { return eval_log(args[i], vars); };
  if (f == "exp") {
    double x = arg(0).linear("exp argument");
    return {1, x};
  }
  if (f == "ln" || f == "log2") {
    SignedLog x = arg(0);
    if (x.sign <= 0) domain(f + " of non-positive value");
    return SignedLog::of(f == "ln" ? x.mag : x.mag / std::numbers::ln2);
  }
  if (f == "sqrt") {
    SignedLog x = arg(0);
    if (x.sign < 0) domain("sqrt of negative value");
    return {x.sign, x.mag / 2.0};
  }
  if (f == "abs") {
    SignedLog x = arg(0);
    return {x.sign == 0 ? 0 : 1, x.mag};
  }
  if (f == "floor" || f == "ceil") {
    SignedLog x = arg(0);
    if (x.sign == 0 || x.mag >= kIntegralLog) return x;
    double v = x.linear(f.c_str());
    return SignedLog::of(f == "floor" ? std::floor(v) : std::ceil(v));
  }
  if (f == "min" || f == "max") {
    SignedLog a = arg(0);
    SignedLog b = arg(1);
    int c = compare(a, b);
    return (f == "min") == (c <= 0) ? a : b;
  }
  if (f == "factorial") {
    double x = arg(0).linear("factorial argument");
    if (!(x > -1.0)) domain("factorial of " + format_number(x));
    return {1, std::lgamma(x + 1.0)};
  }
  if (f == "sin" || f == "cos" || f == "mod") {
    return SignedLog::of(call_linear(e, vars));
  }
  throw EvalError(EvalError::Kind::UnknownFunction, "unknown function '" + f + "'");
}

SignedLog eval_log(const Expr& e, const VarValues& vars) {
  switch (e.kind()) {
    case NodeKind::Number:
      return SignedLog::of(e.value());
    case NodeKind::Var:
      return SignedLog::of(lookup(e, vars));
    case NodeKind::PatternVar:
      throw EvalError(EvalError::Kind::UnboundVariable,
                      "pattern variable ?" + e.name() + " cannot be evaluated");
    case NodeKind::Unary:
      return negate(eval_log(e.children()[0], vars));
    case NodeKind::Call:
      return call_log(e, vars);
    case NodeKind::Binary: {
      SignedLog a = eval_log(e.children()[0], vars);
      SignedLog b = eval_log(e.children()[1], vars);
      switch (e.op()) {
        case '+': return add(a, b);
        case '-': return add(a, negate(b));
        case '*': return multiply(a, b);
        case '/':
          if (b.sign == 0) domain("division by zero");
          return multiply(a, {b.sign, -b.mag});
        default:
          return power(a, b.linear("exponent"));
      }
    }
  }
  return {};
}

}  // namespace

double evaluate(const Expr& e, const VarValues& vars, EvalMode mode) {
  if (mode == EvalMode::Linear) return eval_linear(e, vars);
  SignedLog v = eval_log(e, vars);
  if (v.sign <= 0) domain("ln of non-positive value " + format(e));
  return v.mag;
}

}  // namespace asymcomp
