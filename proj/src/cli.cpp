#include "asymcomp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "asymcomp/composer.hpp"
#include "asymcomp/registry.hpp"
#include "asymcomp/report.hpp"
#include "json.hpp"

namespace asymcomp::cli {

namespace {

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

NamedFn parse_function_line(std::string_view line, const std::string& where) {
  auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw std::runtime_error(where + ": expected 'id = expression'");
  }
  auto id = std::string(trim(line.substr(0, eq)));
  if (id.empty()) throw std::runtime_error(where + ": empty function id");
  try {
    return {id, ComplexityFn::parse(trim(line.substr(eq + 1)))};
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

}  // namespace

std::vector<NamedFn> parse_function_list(std::string_view text) {
  std::vector<NamedFn> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    out.push_back(parse_function_line(line, "line " + std::to_string(line_no)));
  }
  return out;
}

std::vector<NamedFn> read_function_list(const std::string& path) {
  try {
    return parse_function_list(read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

VarValues parse_bindings(std::string_view text) {
  VarValues out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error("binding '" + std::string(item) + "' is not name=value");
    }
    auto name = std::string(trim(item.substr(0, eq)));
    auto value_text = trim(item.substr(eq + 1));
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (name.empty() || ec != std::errc{} || ptr != value_text.data() + value_text.size()) {
      throw std::runtime_error("binding '" + std::string(item) + "' is not name=value");
    }
    out[name] = value;
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compare and classify growth functions; compose expression evaluation plans"};
  app.name("asymcomp");
  app.require_subcommand(1, 1);

  ComparatorConfig cfg;
  bool json_out = false;
  std::string f1_text, f2_text, functions_path, add_text, registry_path, expr_text, plan_path,
      eval_text;

  auto add_comparator_flags = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "Ratio of the sampling sequence")->capture_default_str();
    sub->add_option("--k", cfg.k, "Convergence window length")->capture_default_str();
    sub->add_option("--eps", cfg.eps, "Convergence tolerance on ratios")->capture_default_str();
    sub->add_option("--L", cfg.L, "Maximum ratio samples")->capture_default_str();
    sub->add_option("--tmax", cfg.tmax, "Maximum doublings when bracketing")
        ->capture_default_str();
    sub->add_option("--pmax", cfg.pmax, "Highest derivative order in the root sweep")
        ->capture_default_str();
    sub->add_flag("--json", json_out, "Machine-readable output");
  };

  auto* compare = app.add_subcommand("compare", "Compare two growth functions of n");
  compare->add_option("--f1", f1_text, "First function")->required();
  compare->add_option("--f2", f2_text, "Second function")->required();
  add_comparator_flags(compare);

  auto* classify_cmd = app.add_subcommand("classify", "Partition functions into growth classes");
  classify_cmd->add_option("--functions", functions_path, "Function list file")->required();
  add_comparator_flags(classify_cmd);

  auto* insert_cmd = app.add_subcommand("insert", "Classify, then insert one more function");
  insert_cmd->add_option("--functions", functions_path, "Function list file")->required();
  insert_cmd->add_option("--add", add_text, "Function to insert, as id=EXPR")->required();
  add_comparator_flags(insert_cmd);

  auto* refine_cmd = app.add_subcommand(
      "refine", "Classify, then merge classes under a comparator with L*4 samples and eps/10");
  refine_cmd->add_option("--functions", functions_path, "Function list file")->required();
  add_comparator_flags(refine_cmd);

  auto* compose_cmd = app.add_subcommand("compose", "Compose an evaluation plan for EXPR");
  compose_cmd->add_option("--registry", registry_path, "Registry JSON file")->required();
  compose_cmd->add_option("--expr", expr_text, "Expression to compose")->required();
  compose_cmd->add_option("--emit-plan", plan_path, "Write the plan JSON to FILE");
  compose_cmd->add_option("--eval", eval_text, "Execute the plan at name=value,...");
  compose_cmd->add_flag("--json", json_out, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    cfg.validate();
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto print_library = [&](const ClassifiedLibrary& lib) {
    out << (json_out ? library_json(lib) + "\n" : library_text(lib));
  };

  try {
    if (compare->parsed()) {
      auto f1 = ComplexityFn::parse(f1_text);
      auto f2 = ComplexityFn::parse(f2_text);
      auto result = comp(f1, f2, cfg);
      if (json_out) {
        out << comp_result_json(f1, f2, result) << "\n";
      } else {
        out << code_name(result.code) << " (<" << static_cast<int>(result.code) << ">)\n";
        for (const auto& note : result.trace.notes) err << "note: " << note << "\n";
      }
      return result.code == CompCode::Inconclusive ? kExitInconclusive : kExitOk;
    }
    if (classify_cmd->parsed()) {
      print_library(classify(read_function_list(functions_path), cfg));
      return kExitOk;
    }
    if (insert_cmd->parsed()) {
      auto lib = classify(read_function_list(functions_path), cfg);
      print_library(insert_function(lib, parse_function_line(add_text, "--add")));
      return kExitOk;
    }
    if (refine_cmd->parsed()) {
      auto lib = classify(read_function_list(functions_path), cfg);
      print_library(refine(lib, comparator_for(cfg.widened())));
      return kExitOk;
    }
    if (compose_cmd->parsed()) {
      auto reg = load_registry(registry_path, cfg);
      auto plan = compose(parse(expr_text), reg);
      std::string plan_json = emit_plan(plan);
      if (!plan_path.empty()) {
        std::ofstream file(plan_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write '" + plan_path + "'");
        file << plan_json << "\n";
      }
      std::optional<double> value;
      if (!eval_text.empty()) value = execute_plan(plan, parse_bindings(eval_text));
      if (json_out) {
        auto doc = nlohmann::json::object();
        doc["plan"] = nlohmann::json::parse(plan_json);
        if (value) doc["value"] = *value;
        out << doc.dump(2) << "\n";
      } else {
        if (plan_path.empty()) out << plan_json << "\n";
        if (value) out << "value: " << format_number(*value) << "\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace asymcomp::cli
