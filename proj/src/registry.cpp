#include "asymcomp/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace asymcomp {

using nlohmann::json;

namespace {

// Field access with record-qualified diagnostics.
class Record {
 public:
  Record(const json& j, std::string where, std::initializer_list<std::string_view> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected a JSON object");
    for (const auto& [key, _] : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail("unknown key '" + key + "'");
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw RegistryError(where_ + ": " + message);
  }
  [[noreturn]] void fail(std::string_view field, const std::string& message) const {
    throw RegistryError(where_ + ", field '" + std::string(field) + "': " + message);
  }

  bool has(std::string_view key) const { return j_.contains(key); }

  std::string string(std::string_view key) const {
    if (!j_.contains(key)) fail(key, "missing");
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    auto s = v.get<std::string>();
    if (s.empty()) fail(key, "must not be empty");
    return s;
  }

  std::size_t count(std::string_view key) const {
    if (!j_.contains(key)) fail(key, "missing");
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  Expr expr(std::string_view key) const {
    try {
      return parse(string(key));
    } catch (const ParseError& e) {
      fail(key, e.what());
    }
  }

  void with_id(const std::string& id) { where_ += " (id '" + id + "')"; }

 private:
  const json& j_;
  std::string where_;
};

const json& array_field(const json& doc, std::string_view key) {
  static const json empty = json::array();
  if (!doc.contains(key)) return empty;
  const auto& v = doc.at(key);
  if (!v.is_array()) throw RegistryError("registry: '" + std::string(key) + "' must be an array");
  return v;
}

void check_params(const Record& rec, std::string_view field, const Expr& impl,
                  std::size_t arity) {
  for (const auto& v : free_variables(impl)) {
    bool ok = v.size() > 1 && v[0] == 'p' &&
              std::all_of(v.begin() + 1, v.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (ok) {
      auto index = std::stoul(v.substr(1));
      ok = index >= 1 && index <= arity;
    }
    if (!ok) rec.fail(field, "variable '" + v + "' is not one of p1..p" + std::to_string(arity));
  }
  if (!pattern_variables(impl).empty()) rec.fail(field, "pattern variables are not allowed");
}

void check_subset(const Record& rec, std::string_view field, const Expr& e,
                  const std::set<std::string>& allowed) {
  for (const auto& v : pattern_variables(e)) {
    if (!allowed.contains(v)) rec.fail(field, "pattern variable ?" + v + " does not occur in lhs");
  }
  for (const auto& v : free_variables(e)) {
    rec.fail(field, "plain variable '" + v + "' is not allowed in a formula template");
  }
}

}  // namespace

Registry Registry::from_json(std::string_view text, const ComparatorConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RegistryError(std::string("registry: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw RegistryError("registry: top level must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "services" && key != "formulas" && key != "numeric_services") {
      throw RegistryError("registry: unknown key '" + key + "'");
    }
  }

  Registry reg;
  std::set<std::string> ids;
  auto claim = [&](Record& rec, const std::string& id) {
    rec.with_id(id);
    if (!ids.insert(id).second) rec.fail("id", "duplicate id '" + id + "'");
  };

  const auto& services = array_field(doc, "services");
  for (std::size_t i = 0; i < services.size(); ++i) {
    Record rec(services[i], "services[" + std::to_string(i) + "]",
               {"id", "operation", "arity", "impl", "description"});
    auto id = rec.string("id");
    claim(rec, id);
    Signature sig{rec.string("operation"), rec.count("arity")};
    Expr impl = rec.expr("impl");
    check_params(rec, "impl", impl, sig.arity);
    std::string description = rec.has("description") ? rec.string("description") : "";
    if (reg.service_index_.contains(sig)) {
      rec.fail("operation", "a service for " + sig.to_string() + " is already registered");
    }
    reg.service_index_.emplace(sig, reg.services_.size());
    reg.services_.push_back({id, sig, std::move(description), std::move(impl)});
  }

  const auto& formulas = array_field(doc, "formulas");
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    Record rec(formulas[i], "formulas[" + std::to_string(i) + "]",
               {"id", "lhs", "rhs", "error", "validity"});
    auto id = rec.string("id");
    claim(rec, id);
    Expr lhs = rec.expr("lhs");
    if (lhs.kind() == NodeKind::PatternVar) rec.fail("lhs", "must not be a bare pattern variable");
    for (const auto& v : free_variables(lhs)) {
      rec.fail("lhs", "plain variable '" + v + "' is not allowed in a formula template");
    }
    auto allowed = pattern_variables(lhs);
    Expr rhs = rec.expr("rhs");
    check_subset(rec, "rhs", rhs, allowed);
    Expr error = rec.expr("error");
    check_subset(rec, "error", error, allowed);
    std::optional<Expr> validity;
    if (rec.has("validity")) {
      validity = rec.expr("validity");
      check_subset(rec, "validity", *validity, allowed);
    }
    reg.formulas_.push_back({id, std::move(lhs), std::move(rhs), std::move(error),
                             std::move(validity)});
  }

  const auto& numeric = array_field(doc, "numeric_services");
  std::map<Signature, std::vector<NamedFn>> candidates;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    Record rec(numeric[i], "numeric_services[" + std::to_string(i) + "]",
               {"id", "operation", "arity", "complexity", "impl"});
    auto id = rec.string("id");
    claim(rec, id);
    Signature sig{rec.string("operation"), rec.count("arity")};
    Expr body = rec.expr("complexity");
    std::optional<ComplexityFn> complexity;
    try {
      complexity.emplace(body);
      for (double n = 2.0; n <= 1024.0; n *= 2.0) complexity->log_value(n);
    } catch (const std::exception& e) {
      rec.fail("complexity", e.what());
    }
    Expr impl = rec.expr("impl");
    check_params(rec, "impl", impl, sig.arity);
    candidates[sig].push_back({id, *complexity});
    reg.numeric_.push_back({id, sig, std::move(*complexity), std::move(impl)});
  }
  for (auto& [sig, fns] : candidates) {
    reg.numeric_index_.emplace(sig, classify(fns, cfg));
  }
  return reg;
}

Registry load_registry(const std::filesystem::path& path, const ComparatorConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError("cannot open registry file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Registry::from_json(buf.str(), cfg);
}

const BaseService* Registry::find_service(const Signature& sig) const {
  if (sig.is_leaf()) return nullptr;
  auto it = service_index_.find(sig);
  return it == service_index_.end() ? nullptr : &services_[it->second];
}

std::optional<FormulaMatch> Registry::find_formula(const Expr& e) const {
  for (const auto& f : formulas_) {
    auto bindings = match_pattern(f.lhs, e);
    if (!bindings) continue;
    if (f.validity) {
      Expr check = substitute(*f.validity, *bindings);
      if (free_variables(check).empty()) {
        bool holds = false;
        try {
          holds = evaluate(check, {}) > 0.0;
        } catch (const EvalError&) {
        }
        if (!holds) continue;
      }
    }
    return FormulaMatch{&f, std::move(*bindings)};
  }
  return std::nullopt;
}

const ClassifiedLibrary* Registry::numeric_classes(const Signature& sig) const {
  auto it = numeric_index_.find(sig);
  return it == numeric_index_.end() ? nullptr : &it->second;
}

const NumericService* Registry::find_best_numeric(const Signature& sig) const {
  const auto* lib = numeric_classes(sig);
  if (!lib || lib->classes.empty()) return nullptr;
  const auto& members = lib->classes.front().members;
  auto best = std::min_element(members.begin(), members.end(),
                               [](const NamedFn& a, const NamedFn& b) { return a.id < b.id; });
  return numeric_by_id(best->id);
}

const BaseService* Registry::service_by_id(std::string_view id) const {
  for (const auto& s : services_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const ApproxFormula* Registry::formula_by_id(std::string_view id) const {
  for (const auto& f : formulas_) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const NumericService* Registry::numeric_by_id(std::string_view id) const {
  for (const auto& s : numeric_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

}  // namespace asymcomp
