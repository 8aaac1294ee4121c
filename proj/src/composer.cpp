#include "asymcomp/composer.hpp"

#include "json.hpp"

namespace asymcomp {

using nlohmann::json;

namespace {

std::shared_ptr<PlanNode> make_node(PlanNode::Kind kind) {
  auto n = std::make_shared<PlanNode>();
  n->kind = kind;
  return n;
}

std::string join_path(const std::vector<std::string>& path) {
  std::string out = "/";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '/';
    out += path[i];
  }
  return out;
}

std::string describe(CompositionError::Reason reason, const Expr& e, const Signature& sig,
                     const std::vector<std::string>& path) {
  std::string what = reason == CompositionError::Reason::Uncoverable
                         ? "no service, formula or numeric service for "
                         : "formula depth limit reached at ";
  return what + sig.to_string() + " in '" + format(e) + "' at " + join_path(path);
}

class Composer {
 public:
  explicit Composer(const Registry& reg) : reg_(reg) {}

  PlanNodePtr node(const Expr& e, std::vector<std::string>& path, int depth) {
    switch (e.kind()) {
      case NodeKind::Number: {
        auto n = make_node(PlanNode::Kind::Number);
        n->number = e.value();
        return n;
      }
      case NodeKind::Var: {
        auto n = make_node(PlanNode::Kind::Var);
        n->name = e.name();
        return n;
      }
      case NodeKind::PatternVar:
        throw std::invalid_argument("cannot compose a pattern: " + format(e));
      default:
        break;
    }

    auto [sig, children] = decompose_top(e);
    if (const auto* svc = reg_.find_service(sig)) {
      auto n = make_node(PlanNode::Kind::Invoke);
      n->name = svc->id;
      n->impl = svc->impl;
      n->args = compose_children(children, path, depth);
      return n;
    }

    std::optional<CompositionError> deferred;
    if (auto match = reg_.find_formula(e)) {
      const auto& f = *match->formula;
      if (depth >= kMaxFormulaDepth) {
        deferred.emplace(CompositionError::Reason::DepthExceeded, e, sig, path);
      } else {
        path.push_back("approx:" + f.id);
        try {
          auto inner = node(substitute(f.rhs, match->bindings), path, depth + 1);
          path.pop_back();
          auto n = make_node(PlanNode::Kind::Approx);
          n->name = f.id;
          n->args.push_back(std::move(inner));
          n->target = e;
          n->error = substitute(f.error, match->bindings);
          if (f.validity) {
            Expr check = substitute(*f.validity, match->bindings);
            if (!free_variables(check).empty()) n->assumes = std::move(check);
          }
          return n;
        } catch (const CompositionError& err) {
          path.pop_back();
          deferred = err;
        }
      }
    }

    if (const auto* num = reg_.find_best_numeric(sig)) {
      auto n = make_node(PlanNode::Kind::Numeric);
      n->name = num->id;
      n->impl = num->impl;
      n->complexity = num->complexity.label();
      n->args = compose_children(children, path, depth);
      return n;
    }
    if (deferred) throw *deferred;

    // Report the innermost failure: a failing child takes precedence.
    compose_children(children, path, depth);
    throw CompositionError(CompositionError::Reason::Uncoverable, e, sig, path);
  }

 private:
  std::vector<PlanNodePtr> compose_children(const std::vector<Expr>& children,
                                            std::vector<std::string>& path, int depth) {
    std::vector<PlanNodePtr> out;
    for (std::size_t i = 0; i < children.size(); ++i) {
      path.push_back(std::to_string(i));
      out.push_back(node(children[i], path, depth));
      path.pop_back();
    }
    return out;
  }

  const Registry& reg_;
};

void collect_errors(const PlanNodePtr& n, std::vector<ErrorAnnotation>& out) {
  for (const auto& a : n->args) collect_errors(a, out);
  if (n->kind == PlanNode::Kind::Approx) out.push_back({n->name, *n->error});
}

double run(const PlanNode& n, const VarValues& vars, std::vector<std::string>& path) {
  auto fail = [&](const std::string& message) -> PlanError {
    return PlanError(message + " at " + join_path(path));
  };
  switch (n.kind) {
    case PlanNode::Kind::Number:
      return n.number;
    case PlanNode::Kind::Var: {
      auto it = vars.find(n.name);
      if (it == vars.end()) throw fail("unbound variable '" + n.name + "'");
      return it->second;
    }
    case PlanNode::Kind::Approx: {
      if (n.assumes) {
        double v = 0.0;
        try {
          v = evaluate(*n.assumes, vars);
        } catch (const EvalError& e) {
          throw fail("validity of formula '" + n.name + "' cannot be checked: " + e.what());
        }
        if (!(v > 0.0)) throw fail("validity of formula '" + n.name + "' does not hold");
      }
      path.push_back("approx:" + n.name);
      double v = run(*n.args.front(), vars, path);
      path.pop_back();
      return v;
    }
    case PlanNode::Kind::Invoke:
    case PlanNode::Kind::Numeric: {
      VarValues params;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        path.push_back(std::to_string(i));
        params["p" + std::to_string(i + 1)] = run(*n.args[i], vars, path);
        path.pop_back();
      }
      try {
        return evaluate(*n.impl, params);
      } catch (const EvalError& e) {
        throw fail("service '" + n.name + "' failed: " + e.what());
      }
    }
  }
  return 0.0;
}

json node_json(const PlanNode& n) {
  switch (n.kind) {
    case PlanNode::Kind::Number:
      return {{"num", format_number(n.number)}};
    case PlanNode::Kind::Var:
      return {{"var", n.name}};
    case PlanNode::Kind::Invoke:
    case PlanNode::Kind::Numeric: {
      json args = json::array();
      for (const auto& a : n.args) args.push_back(node_json(*a));
      if (n.kind == PlanNode::Kind::Invoke) return {{"invoke", n.name}, {"args", args}};
      return {{"numeric", n.name}, {"args", args}, {"complexity", n.complexity}};
    }
    case PlanNode::Kind::Approx: {
      json j = {{"approx", format(*n.target)},
                {"formula", n.name},
                {"error", format(*n.error)},
                {"inner", node_json(*n.args.front())}};
      if (n.assumes) j["assumes"] = format(*n.assumes);
      return j;
    }
  }
  return nullptr;
}

PlanNodePtr node_from_json(const json& j, const Registry& reg) {
  auto text = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw PlanError(std::string("plan node is missing string field '") + key + "'");
    }
    return j.at(key).get<std::string>();
  };
  auto args = [&]() {
    std::vector<PlanNodePtr> out;
    if (!j.contains("args") || !j.at("args").is_array()) {
      throw PlanError("plan node is missing array field 'args'");
    }
    for (const auto& a : j.at("args")) out.push_back(node_from_json(a, reg));
    return out;
  };
  if (!j.is_object()) throw PlanError("plan node must be a JSON object");
  if (j.contains("num")) {
    Expr e = parse(text("num"));
    if (e.kind() != NodeKind::Number) throw PlanError("'num' must hold a number literal");
    auto n = make_node(PlanNode::Kind::Number);
    n->number = e.value();
    return n;
  }
  if (j.contains("var")) {
    auto n = make_node(PlanNode::Kind::Var);
    n->name = text("var");
    return n;
  }
  if (j.contains("invoke")) {
    auto n = make_node(PlanNode::Kind::Invoke);
    n->name = text("invoke");
    const auto* svc = reg.service_by_id(n->name);
    if (!svc) throw PlanError("plan references unknown service '" + n->name + "'");
    n->impl = svc->impl;
    n->args = args();
    return n;
  }
  if (j.contains("numeric")) {
    auto n = make_node(PlanNode::Kind::Numeric);
    n->name = text("numeric");
    const auto* svc = reg.numeric_by_id(n->name);
    if (!svc) throw PlanError("plan references unknown numeric service '" + n->name + "'");
    n->impl = svc->impl;
    n->complexity = text("complexity");
    n->args = args();
    return n;
  }
  if (j.contains("approx")) {
    auto n = make_node(PlanNode::Kind::Approx);
    n->name = text("formula");
    if (!reg.formula_by_id(n->name)) {
      throw PlanError("plan references unknown formula '" + n->name + "'");
    }
    n->target = parse(text("approx"));
    n->error = parse(text("error"));
    if (j.contains("assumes")) n->assumes = parse(text("assumes"));
    if (!j.contains("inner")) throw PlanError("approx node is missing 'inner'");
    n->args.push_back(node_from_json(j.at("inner"), reg));
    return n;
  }
  throw PlanError("unrecognized plan node: " + j.dump());
}

}  // namespace

CompositionError::CompositionError(Reason reason, Expr expr, Signature sig,
                                   std::vector<std::string> path)
    : std::runtime_error(describe(reason, expr, sig, path)),
      reason_(reason),
      expr_(std::move(expr)),
      sig_(std::move(sig)),
      path_(std::move(path)) {}

Plan compose(const Expr& e, const Registry& reg) {
  std::vector<std::string> path;
  Plan plan;
  plan.root = Composer(reg).node(e, path, 0);
  collect_errors(plan.root, plan.errors);
  return plan;
}

double execute_plan(const Plan& plan, const VarValues& vars) {
  std::vector<std::string> path;
  return run(*plan.root, vars, path);
}

std::string emit_plan(const Plan& plan) {
  json errors = json::array();
  for (const auto& a : plan.errors) {
    errors.push_back({{"formula", a.formula}, {"error", format(a.error)}});
  }
  json doc = {{"root", node_json(*plan.root)}, {"errors", errors}};
  return doc.dump(2);
}

Plan read_plan(std::string_view json_text, const Registry& reg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PlanError(std::string("malformed plan JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("root")) throw PlanError("plan must have a 'root' node");
  Plan plan;
  plan.root = node_from_json(doc.at("root"), reg);
  collect_errors(plan.root, plan.errors);
  return plan;
}

}  // namespace asymcomp
