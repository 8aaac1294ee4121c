#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymcomp/classifier.hpp"
#include "asymcomp/expression.hpp"

namespace asymcomp {

/// A service computing one operation. `impl` is written over p1..pArity.
struct BaseService {
  std::string id;
  Signature signature;
  std::string description;
  Expr impl;
};

/// Rewrite lhs -> rhs with a bound on the deviation it introduces.
/// `validity`, when present, must evaluate to a positive value for the
/// formula to apply.
struct ApproxFormula {
  std::string id;
  Expr lhs;
  Expr rhs;
  Expr error;
  std::optional<Expr> validity;
};

/// A numerical-methods service; `complexity` is its cost in problem size n.
struct NumericService {
  std::string id;
  Signature signature;
  ComplexityFn complexity;
  Expr impl;
};

struct FormulaMatch {
  const ApproxFormula* formula;
  Bindings bindings;
};

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Registry {
 public:
  /// Parses and validates a registry document; numeric candidates are
  /// classified per signature up front.
  static Registry from_json(std::string_view text, const ComparatorConfig& cfg = {});

  const std::vector<BaseService>& services() const { return services_; }
  const std::vector<ApproxFormula>& formulas() const { return formulas_; }
  const std::vector<NumericService>& numeric_services() const { return numeric_; }

  const BaseService* find_service(const Signature& sig) const;
  /// First formula in document order whose lhs matches `e` at the root and
  /// whose validity is not refuted by literal bindings.
  std::optional<FormulaMatch> find_formula(const Expr& e) const;
  /// Lowest-id member of the lowest growth class registered for `sig`.
  const NumericService* find_best_numeric(const Signature& sig) const;
  const ClassifiedLibrary* numeric_classes(const Signature& sig) const;

  const BaseService* service_by_id(std::string_view id) const;
  const ApproxFormula* formula_by_id(std::string_view id) const;
  const NumericService* numeric_by_id(std::string_view id) const;

 private:
  std::vector<BaseService> services_;
  std::vector<ApproxFormula> formulas_;
  std::vector<NumericService> numeric_;
  std::map<Signature, std::size_t> service_index_;
  std::map<Signature, ClassifiedLibrary> numeric_index_;
};

Registry load_registry(const std::filesystem::path& path, const ComparatorConfig& cfg = {});

}  // namespace asymcomp
