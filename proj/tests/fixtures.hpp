#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "asymcomp/comparator.hpp"
#include "asymcomp/expression.hpp"

namespace fixtures {

/// Base services for every arithmetic operator, one Taylor formula for sin.
inline const char* kArithmeticRegistry = R"J({
  "services": [
    {"id": "add", "operation": "+", "arity": 2, "impl": "p1 + p2"},
    {"id": "sub", "operation": "-", "arity": 2, "impl": "p1 - p2"},
    {"id": "neg", "operation": "-", "arity": 1, "impl": "-p1"},
    {"id": "mul", "operation": "*", "arity": 2, "impl": "p1*p2"},
    {"id": "div", "operation": "/", "arity": 2, "impl": "p1/p2"},
    {"id": "pow", "operation": "^", "arity": 2, "impl": "p1^p2"}
  ],
  "formulas": [
    {"id": "taylor_sin", "lhs": "sin(?x)", "rhs": "?x - ?x^3/6", "error": "abs(?x)^5/120"}
  ]
})J";

/// Two numeric candidates for sin/1 and nothing else that covers sin.
inline const char* kNumericRegistry = R"J({
  "services": [
    {"id": "add", "operation": "+", "arity": 2, "impl": "p1 + p2"},
    {"id": "mul", "operation": "*", "arity": 2, "impl": "p1*p2"}
  ],
  "numeric_services": [
    {"id": "sin_quadratic", "operation": "sin", "arity": 1, "complexity": "n^2",
     "impl": "sin(p1)"},
    {"id": "sin_nlogn", "operation": "sin", "arity": 1, "complexity": "n*log2(n)",
     "impl": "sin(p1)"}
  ]
})J";

/// The function families the comparator is expected to get right.
inline std::vector<std::string> catalog() {
  return {"n",     "n^2",          "n^3",           "n*log2(n)", "2^n",  "factorial(n)",
          "3*n+5", "sqrt(n)",      "log2(n) + 1",   "n^2*log2(n)", "3^n"};
}

/// Piecewise f(n) = n on [10, 20], n! elsewhere.
inline asymcomp::ComplexityFn piecewise_factorial() {
  return asymcomp::ComplexityFn::from_log_callable("piecewise(n, n!)", [](double x) {
    if (x >= 10.0 && x <= 20.0) return std::log(x);
    return std::lgamma(x + 1.0);
  });
}

/// max(1000 + floor(2^ceil(n*sin(n mod 1000))), n): continuous in its last
/// part but neither increasing nor decreasing.
inline asymcomp::ComplexityFn oscillating_power() {
  return asymcomp::ComplexityFn::parse("max(1000 + floor(2^ceil(n*sin(mod(n, 1000)))), n)");
}

/// Random expression over + - * / ^ in the variables x and y. Exponents are
/// small integer literals so evaluation stays real.
class ArithmeticGenerator {
 public:
  explicit ArithmeticGenerator(unsigned seed) : rng_(seed) {}

  asymcomp::Expr operator()(int depth) {
    using asymcomp::Expr;
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
    switch (pick(rng_)) {
      case 0: return Expr::var(coin() ? "x" : "y");
      case 1: return Expr::number(literal());
      case 2: return Expr::binary('+', (*this)(depth - 1), (*this)(depth - 1));
      case 3: return Expr::binary('-', (*this)(depth - 1), (*this)(depth - 1));
      case 4: return Expr::binary('*', (*this)(depth - 1), (*this)(depth - 1));
      case 5: return Expr::binary('/', (*this)(depth - 1), (*this)(depth - 1));
      default: {
        std::uniform_int_distribution<int> power(0, 3);
        return Expr::binary('^', (*this)(depth - 1), Expr::number(power(rng_)));
      }
    }
  }

  double binding() { return std::uniform_real_distribution<double>(0.5, 2.0)(rng_); }

 private:
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }
  double literal() {
    std::uniform_int_distribution<int> whole(1, 9);
    return coin() ? whole(rng_) : whole(rng_) / 4.0;
  }

  std::mt19937 rng_;
};

}  // namespace fixtures
