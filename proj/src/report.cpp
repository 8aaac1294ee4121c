#include "asymcomp/report.hpp"

#include "json.hpp"

namespace asymcomp {

using nlohmann::json;

namespace {

json config_to_json(const ComparatorConfig& c) {
  return {{"q", c.q},         {"k", c.k},
          {"eps", c.eps},     {"L", c.L},
          {"tmax", c.tmax},   {"pmax", c.pmax},
          {"eps_d", c.eps_d}, {"tau_zero", c.tau_zero},
          {"delta_bisect", c.delta_bisect}, {"m_zero", c.m_zero},
          {"skip_cap", c.skip_cap},         {"max_roots", c.max_roots}};
}

json estimate_to_json(const LimitEstimate& e) {
  json samples = json::array();
  for (const auto& s : e.samples) {
    // +inf ratios are written as null by the JSON encoder; keep the log.
    samples.push_back({{"n", s.n}, {"log_ratio", s.log_ratio}, {"ratio", s.ratio}});
  }
  json j = {{"kind", kind_name(e.kind)}, {"samples", samples}};
  if (e.kind == LimitEstimate::Kind::Bounded) j["value"] = e.value;
  return j;
}

}  // namespace

std::string comp_result_json(const ComplexityFn& f1, const ComplexityFn& f2,
                             const CompResult& result, int indent) {
  const auto& t = result.trace;
  json roots = json::array();
  for (const auto& r : t.sweep.roots) roots.push_back({{"x", r.x}, {"order", r.order}});
  json trace = {
      {"start", t.sweep.start},
      {"domain_start", t.sweep.domain_start},
      {"roots", roots},
      {"zero_orders", t.sweep.zero_orders},
      {"skip_steps", t.sweep.skip_steps},
      {"budget_exhausted", t.sweep.budget_exhausted},
      {"evaluations", t.evaluations},
      {"notes", t.notes},
  };
  trace["forward"] = t.forward ? estimate_to_json(*t.forward) : json(nullptr);
  trace["backward"] = t.backward ? estimate_to_json(*t.backward) : json(nullptr);
  json doc = {{"f1", f1.label()},
              {"f2", f2.label()},
              {"result", code_name(result.code)},
              {"code", static_cast<int>(result.code)},
              {"trace", trace}};
  return doc.dump(indent);
}

std::string library_json(const ClassifiedLibrary& lib, int indent) {
  json classes = json::array();
  for (const auto& c : lib.classes) {
    json members = json::array();
    for (const auto& m : c.members) members.push_back({{"id", m.id}, {"fn", m.fn.label()}});
    classes.push_back({{"representative", c.representative().id}, {"members", members}});
  }
  json doc = {{"classes", classes}, {"config", config_to_json(lib.config)}};
  return doc.dump(indent);
}

std::string config_json(const ComparatorConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

std::string library_text(const ClassifiedLibrary& lib) {
  std::string out;
  for (std::size_t i = 0; i < lib.classes.size(); ++i) {
    out += "class " + std::to_string(i + 1) + ": [";
    const auto& members = lib.classes[i].members;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (j) out += ' ';
      out += members[j].id;
    }
    out += "] (representative: " + lib.classes[i].representative().id + ")\n";
  }
  return out;
}

}  // namespace asymcomp
