#include <cmath>
#include <functional>

#include "asymcomp/composer.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace asymcomp;
using nlohmann::json;

namespace {

using Kind = PlanNode::Kind;

void visit(const PlanNodePtr& n, const std::function<void(const PlanNode&)>& fn) {
  fn(*n);
  for (const auto& a : n->args) visit(a, fn);
}

int count_kind(const Plan& p, Kind kind) {
  int count = 0;
  visit(p.root, [&](const PlanNode& n) { count += n.kind == kind; });
  return count;
}

CompositionError composition_error(const std::string& text, const Registry& reg) {
  try {
    compose(parse(text), reg);
  } catch (const CompositionError& e) {
    return e;
  }
  FAIL("composition unexpectedly succeeded: " << text);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("compose examples") {
  auto reg = Registry::from_json(fixtures::kArithmeticRegistry);

  auto sum = compose(parse("x + y"), reg);
  CHECK(sum.root->kind == Kind::Invoke);
  CHECK(sum.root->name == "add");
  REQUIRE(sum.root->args.size() == 2);
  CHECK(sum.root->args[0]->kind == Kind::Var);
  CHECK(sum.root->args[0]->name == "x");
  CHECK(sum.root->args[1]->name == "y");
  CHECK(sum.errors.empty());
  CHECK(execute_plan(sum, {{"x", 1}, {"y", 2}}) == 3.0);

  auto taylor = compose(parse("sin(x) + x^2"), reg);
  CHECK(taylor.root->name == "add");
  const auto& approx = *taylor.root->args[0];
  REQUIRE(approx.kind == Kind::Approx);
  CHECK(approx.name == "taylor_sin");
  CHECK(*approx.target == parse("sin(x)"));
  CHECK(*approx.error == parse("abs(x)^5/120"));
  CHECK(count_kind(taylor, Kind::Numeric) == 0);
  visit(approx.args.front(), [](const PlanNode& n) { CHECK(n.kind != Kind::Approx); });
  REQUIRE(taylor.errors.size() == 1);
  CHECK(taylor.errors[0].formula == "taylor_sin");

  for (double x : {0.05, 0.1, 0.2}) {
    double got = execute_plan(taylor, {{"x", x}});
    double oracle = x - x * x * x / 6 + x * x;
    double bound = std::pow(x, 5) / 120;
    CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(got - (std::sin(x) + x * x)) <= bound);
    CHECK(evaluate(taylor.errors[0].error, {{"x", x}}) == doctest::Approx(bound));
  }

  auto gamma = composition_error("gamma(x)", reg);
  CHECK(gamma.reason() == CompositionError::Reason::Uncoverable);
  CHECK(gamma.signature() == Signature{"gamma", 1});
  CHECK(gamma.path().empty());

  auto leaf = compose(parse("x"), reg);
  CHECK(leaf.root->kind == Kind::Var);
  CHECK(execute_plan(leaf, {{"x", 7}}) == 7.0);
}

TEST_CASE("failures report the leftmost innermost sub-description") {
  auto reg = Registry::from_json(fixtures::kArithmeticRegistry);
  auto both = composition_error("gamma(x) + beta(y)", reg);
  CHECK(both.signature() == Signature{"gamma", 1});
  CHECK(both.path() == std::vector<std::string>{"0"});

  auto nested = composition_error("gamma(beta(x))", reg);
  CHECK(nested.signature() == Signature{"beta", 1});
  CHECK(nested.path() == std::vector<std::string>{"0"});

  auto deep = composition_error("x * (1 + cos(y))", reg);
  CHECK(deep.signature() == Signature{"cos", 1});
  CHECK(deep.expr() == parse("cos(y)"));
  CHECK(deep.path() == std::vector<std::string>{"1", "1"});

  // failure inside a formula's right-hand side
  auto inner = Registry::from_json(R"J({
    "services": [{"id": "add", "operation": "+", "arity": 2, "impl": "p1 + p2"}],
    "formulas": [{"id": "shift", "lhs": "f(?x)", "rhs": "?x + g(?x)", "error": "0"}]})J");
  auto via = composition_error("f(y)", inner);
  CHECK(via.signature() == Signature{"g", 1});
  CHECK(via.path() == std::vector<std::string>{"approx:shift", "1"});
}

TEST_CASE("formula depth cap") {
  auto reg = Registry::from_json(R"J({"formulas": [
    {"id": "loop", "lhs": "g(?x)", "rhs": "g(?x)", "error": "0"}]})J");
  auto err = composition_error("g(x)", reg);
  CHECK(err.reason() == CompositionError::Reason::DepthExceeded);
  CHECK(err.path().size() == static_cast<std::size_t>(kMaxFormulaDepth));

  // a chain of exactly the cap depth still composes
  std::string doc = R"J({"services": [{"id": "neg", "operation": "-", "arity": 1, "impl": "-p1"}],
    "formulas": [)J";
  for (int i = 0; i < kMaxFormulaDepth; ++i) {
    auto k = std::to_string(i);
    std::string rhs = i + 1 < kMaxFormulaDepth ? "h" + std::to_string(i + 1) + "(?x)" : "-?x";
    if (i) doc += ",";
    doc += "{\"id\": \"r" + k + "\", \"lhs\": \"h" + k + "(?x)\", \"rhs\": \"" + rhs +
           "\", \"error\": \"0\"}";
  }
  doc += "]}";
  auto chain = Registry::from_json(doc);
  auto plan = compose(parse("h0(x)"), chain);
  CHECK(count_kind(plan, Kind::Approx) == kMaxFormulaDepth);
  CHECK(execute_plan(plan, {{"x", 2}}) == -2.0);
}

TEST_CASE("cascade priority") {
  auto reg = Registry::from_json(R"J({
    "services": [{"id": "mul", "operation": "*", "arity": 2, "impl": "p1*p2"}],
    "formulas": [{"id": "sin_small", "lhs": "sin(?x)", "rhs": "?x", "error": "abs(?x)^3/6"},
                 {"id": "cos_sq", "lhs": "cos(?x)", "rhs": "sq(?x)", "error": "0"}],
    "numeric_services": [
      {"id": "mul_fast", "operation": "*", "arity": 2, "complexity": "n", "impl": "p1*p2"},
      {"id": "sin_num", "operation": "sin", "arity": 1, "complexity": "n", "impl": "sin(p1)"},
      {"id": "cos_num", "operation": "cos", "arity": 1, "complexity": "n", "impl": "cos(p1)"}]})J");

  auto base = compose(parse("x*y"), reg);
  CHECK(base.root->kind == Kind::Invoke);
  CHECK(count_kind(base, Kind::Numeric) == 0);

  auto formula = compose(parse("sin(x)"), reg);
  CHECK(formula.root->kind == Kind::Approx);

  // the formula's rhs cannot be composed, so the numeric service takes over
  auto fallback = compose(parse("cos(x)"), reg);
  CHECK(fallback.root->kind == Kind::Numeric);
  CHECK(fallback.root->name == "cos_num");
  CHECK(fallback.errors.empty());
  CHECK(execute_plan(fallback, {{"x", 0.5}}) == doctest::Approx(std::cos(0.5)));
}

TEST_CASE("numeric selection") {
  auto reg = Registry::from_json(fixtures::kNumericRegistry);
  auto plan = compose(parse("sin(x) + 1"), reg);
  int numeric = 0;
  visit(plan.root, [&](const PlanNode& n) {
    if (n.kind != Kind::Numeric) return;
    ++numeric;
    CHECK(n.name == reg.find_best_numeric({"sin", 1})->id);
    CHECK(n.name == "sin_nlogn");
    CHECK(n.complexity == "n*log2(n)");
  });
  CHECK(numeric == 1);
  CHECK(execute_plan(plan, {{"x", 0.3}}) == doctest::Approx(std::sin(0.3) + 1));
}

TEST_CASE("validity left for run time") {
  auto reg = load_registry(ASYMCOMP_TEST_DATA "/registry.json");
  auto plan = compose(parse("sin(x)"), reg);
  REQUIRE(plan.root->kind == Kind::Approx);
  REQUIRE(plan.root->assumes);
  CHECK(*plan.root->assumes == parse("1 - abs(x)"));
  CHECK(execute_plan(plan, {{"x", 0.5}}) == doctest::Approx(0.5 - 0.125 / 6));
  CHECK_THROWS_AS(execute_plan(plan, {{"x", 2}}), PlanError);

  // decided at composition time: literal argument inside the region
  auto literal = compose(parse("sin(0.5)"), reg);
  CHECK(literal.root->kind == Kind::Approx);
  CHECK_FALSE(literal.root->assumes);
  // outside the region the formula is skipped and nothing else covers sin
  CHECK(composition_error("sin(3)", reg).signature() == Signature{"sin", 1});
}

TEST_CASE("execute_plan") {
  auto reg = Registry::from_json(fixtures::kArithmeticRegistry);
  CHECK(execute_plan(compose(parse("2 + 3"), reg), {}) == 5.0);
  CHECK(execute_plan(compose(parse("-x^2"), reg), {{"x", 3}}) == -9.0);

  try {
    execute_plan(compose(parse("x + y"), reg), {{"x", 1}});
    FAIL("expected an unbound variable error");
  } catch (const PlanError& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
    CHECK(std::string(e.what()).find("/1") != std::string::npos);
  }
  auto sqrt_reg = Registry::from_json(R"J({"services": [
    {"id": "root", "operation": "sqrt", "arity": 1, "impl": "sqrt(p1)"}]})J");
  CHECK_THROWS_AS(execute_plan(compose(parse("sqrt(x)"), sqrt_reg), {{"x", -1}}), PlanError);
}

TEST_CASE("property: plans of base services agree with direct evaluation") {
  auto reg = Registry::from_json(fixtures::kArithmeticRegistry);
  fixtures::ArithmeticGenerator gen(20240611);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Expr e = gen(4);
    auto plan = compose(e, reg);
    CHECK(count_kind(plan, Kind::Approx) == 0);
    for (int b = 0; b < 5; ++b) {
      VarValues vars{{"x", gen.binding()}, {"y", gen.binding()}};
      double direct = 0.0;
      try {
        direct = evaluate(e, vars);
      } catch (const EvalError&) {
        CHECK_THROWS_AS(execute_plan(plan, vars), PlanError);
        continue;
      }
      double got = execute_plan(plan, vars);
      CHECK_MESSAGE(std::abs(got - direct) <= 1e-9 * std::max(1.0, std::abs(direct)), format(e));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("emit_plan") {
  auto reg = Registry::from_json(fixtures::kArithmeticRegistry);
  auto leaves = json::parse(emit_plan(compose(parse("x + 2"), reg)));
  CHECK(leaves == json::parse(R"J({"root": {"invoke": "add", "args": [{"var": "x"}, {"num": "2"}]},
                                  "errors": []})J"));

  auto taylor = json::parse(emit_plan(compose(parse("sin(x) + x^2"), reg)));
  const auto& approx = taylor["root"]["args"][0];
  CHECK(approx["approx"] == "sin(x)");
  CHECK(approx["formula"] == "taylor_sin");
  CHECK(approx["error"] == "abs(x)^5/120");
  CHECK(approx["inner"]["invoke"] == "sub");
  CHECK(taylor["errors"] == json::parse(R"J([{"formula": "taylor_sin", "error": "abs(x)^5/120"}])J"));

  auto numeric = Registry::from_json(fixtures::kNumericRegistry);
  auto num = json::parse(emit_plan(compose(parse("sin(x)"), numeric)));
  CHECK(num["root"] == json::parse(
      R"J({"numeric": "sin_nlogn", "complexity": "n*log2(n)", "args": [{"var": "x"}]})J"));

  auto text = emit_plan(compose(parse("sin(x) * (x - 0.25)"), reg));
  CHECK(text == emit_plan(compose(parse("sin(x) * (x - 0.25)"), reg)));
}

TEST_CASE("read_plan round-trips") {
  auto reg = load_registry(ASYMCOMP_TEST_DATA "/registry.json");
  for (const char* text : {"x + y", "sin(x) + x^2", "exp(x) * 2", "-(x / 4)", "sin(x^2 - 1/2)"}) {
    auto plan = compose(parse(text), reg);
    auto emitted = emit_plan(plan);
    auto back = read_plan(emitted, reg);
    CHECK(emit_plan(back) == emitted);
    VarValues vars{{"x", 0.3}, {"y", 1.5}};
    CHECK(execute_plan(back, vars) == execute_plan(plan, vars));
  }
  CHECK_THROWS_AS(read_plan("{", reg), PlanError);
  CHECK_THROWS_AS(read_plan(R"J({"root": {"invoke": "nope", "args": []}})J", reg), PlanError);
  CHECK_THROWS_AS(read_plan(R"J({"root": {"mystery": 1}})J", reg), PlanError);
  CHECK_THROWS_AS(read_plan(R"J({"errors": []})J", reg), PlanError);
}
