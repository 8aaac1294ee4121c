#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymcomp/expression.hpp"
#include "asymcomp/registry.hpp"

namespace asymcomp {

struct PlanNode;
using PlanNodePtr = std::shared_ptr<const PlanNode>;

/// One node of a composed evaluation plan.
struct PlanNode {
  enum class Kind { Number, Var, Invoke, Numeric, Approx };

  Kind kind = Kind::Number;
  double number = 0.0;            // Number
  std::string name;               // Var name, service id, numeric id or formula id
  std::vector<PlanNodePtr> args;  // Invoke/Numeric arguments; Approx: the inner plan
  std::optional<Expr> impl;       // Invoke/Numeric, over p1..pArity
  std::string complexity;         // Numeric
  std::optional<Expr> target;     // Approx: the sub-expression being approximated
  std::optional<Expr> error;      // Approx: instantiated error bound
  std::optional<Expr> assumes;    // Approx: instantiated validity left for run time
};

struct ErrorAnnotation {
  std::string formula;
  Expr error;
};

struct Plan {
  PlanNodePtr root;
  std::vector<ErrorAnnotation> errors;
};

/// Raised when some sub-expression has no service, formula or numeric
/// service able to compute it.
class CompositionError : public std::runtime_error {
 public:
  enum class Reason { Uncoverable, DepthExceeded };
  CompositionError(Reason reason, Expr expr, Signature sig, std::vector<std::string> path);

  Reason reason() const { return reason_; }
  const Expr& expr() const { return expr_; }
  const Signature& signature() const { return sig_; }
  const std::vector<std::string>& path() const { return path_; }

 private:
  Reason reason_;
  Expr expr_;
  Signature sig_;
  std::vector<std::string> path_;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Formula applications allowed along one root-to-leaf path.
inline constexpr int kMaxFormulaDepth = 8;

Plan compose(const Expr& e, const Registry& reg);
double execute_plan(const Plan& plan, const VarValues& vars);

std::string emit_plan(const Plan& plan);
/// Reads emit_plan output back; service implementations come from `reg`.
Plan read_plan(std::string_view json_text, const Registry& reg);

}  // namespace asymcomp
