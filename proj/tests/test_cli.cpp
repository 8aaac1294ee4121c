#include <filesystem>
#include <fstream>
#include <sstream>

#include "asymcomp/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace asymcomp;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = ASYMCOMP_TEST_DATA;

}  // namespace

TEST_CASE("compare") {
  auto smaller = run({"compare", "--f1", "n", "--f2", "n^2"});
  CHECK(smaller.code == cli::kExitOk);
  CHECK(smaller.out == "FIRST_SMALLER (<2>)\n");

  CHECK(run({"compare", "--f1", "n^2", "--f2", "n"}).out == "SECOND_SMALLER (<3>)\n");
  CHECK(run({"compare", "--f1", "2*n", "--f2", "n"}).out == "EQUIVALENT (<1>)\n");

  auto wobble = run({"compare", "--f1", "n*(2 + sin(n))", "--f2", "n"});
  CHECK(wobble.code == cli::kExitInconclusive);
  CHECK(wobble.out == "INCONCLUSIVE (<4>)\n");

  auto as_json = run({"compare", "--f1", "n", "--f2", "n^2", "--json"});
  CHECK(as_json.code == cli::kExitOk);
  auto doc = json::parse(as_json.out);
  CHECK(doc["code"] == 2);
  CHECK(doc["result"] == "FIRST_SMALLER");
  CHECK(doc["f1"] == "n");
  CHECK(doc["trace"]["forward"]["kind"].is_string());

  // text and JSON agree on the decision for a spread of inputs
  for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"2^n", "n^3"}, {"factorial(n)", "2^n"}, {"n*log2(n)", "3*n+5"}, {"n", "n"}}) {
    auto text = run({"compare", "--f1", a, "--f2", b});
    auto js = json::parse(run({"compare", "--f1", a, "--f2", b, "--json"}).out);
    CHECK(text.out.find(js["result"].get<std::string>()) == 0);
  }

  auto tuned = run({"compare", "--f1", "n", "--f2", "n^2", "--L", "128", "--eps", "1e-4"});
  CHECK(tuned.code == cli::kExitOk);
}

TEST_CASE("usage errors and help") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"compare", "--f1", "n"}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"compare", "--f1", "n", "--f2", "n", "--q", "1"}).code == cli::kExitUsage);
  CHECK(run({"compare", "--f1", "n", "--f2", "n", "--k", "zero"}).code == cli::kExitUsage);

  auto help = run({"compare", "--help"});
  CHECK(help.code == cli::kExitOk);
  for (const char* flag : {"--q", "--k", "--eps", "--L", "--tmax", "--pmax", "--json"}) {
    CHECK_MESSAGE(help.out.find(flag) != std::string::npos, flag);
  }
  CHECK(help.out.find("0.001") != std::string::npos);
  CHECK(help.out.find("64") != std::string::npos);
  CHECK(run({"--help"}).out.find("compose") != std::string::npos);
}

TEST_CASE("bad input is an error, not a usage problem") {
  auto parse_error = run({"compare", "--f1", "n +", "--f2", "n"});
  CHECK(parse_error.code == cli::kExitError);
  CHECK(parse_error.err.find("error:") == 0);
  CHECK(run({"compare", "--f1", "m", "--f2", "n"}).code == cli::kExitError);
  CHECK(run({"classify", "--functions", kData + "/missing.txt"}).code == cli::kExitError);
}

TEST_CASE("classify, insert and refine") {
  auto classified = run({"classify", "--functions", kData + "/growth.txt"});
  CHECK(classified.code == cli::kExitOk);
  CHECK(classified.out ==
        "class 1: [lin lin2] (representative: lin)\n"
        "class 2: [quad] (representative: quad)\n");

  auto js = json::parse(run({"classify", "--functions", kData + "/growth.txt", "--json"}).out);
  REQUIRE(js["classes"].size() == 2);
  CHECK(js["classes"][0]["representative"] == "lin");

  auto inserted = run({"insert", "--functions", kData + "/growth.txt", "--add", "cube = n^3"});
  CHECK(inserted.code == cli::kExitOk);
  CHECK(inserted.out.find("class 3: [cube]") != std::string::npos);
  CHECK(run({"insert", "--functions", kData + "/growth.txt", "--add", "n^3"}).code ==
        cli::kExitError);
  CHECK(run({"insert", "--functions", kData + "/growth.txt", "--add", "lin = n"}).code ==
        cli::kExitError);

  auto refined = run({"refine", "--functions", kData + "/growth.txt"});
  CHECK(refined.code == cli::kExitOk);
  CHECK(refined.out == classified.out);
}

TEST_CASE("compose") {
  auto out = run({"compose", "--registry", kData + "/registry.json", "--expr", "x+y", "--eval",
                  "x=1,y=2"});
  CHECK(out.code == cli::kExitOk);
  auto value_at = out.out.rfind("value: ");
  REQUIRE(value_at != std::string::npos);
  CHECK(out.out.substr(value_at) == "value: 3\n");
  auto plan = json::parse(out.out.substr(0, value_at));
  CHECK(plan["root"]["invoke"] == "add");

  auto path = std::filesystem::temp_directory_path() / "asymcomp_cli_plan.json";
  auto written = run({"compose", "--registry", kData + "/registry.json", "--expr", "sin(x) + x^2",
                      "--emit-plan", path.string(), "--eval", "x=0.1"});
  CHECK(written.code == cli::kExitOk);
  CHECK(written.out.rfind("value: ", 0) == 0);
  std::ifstream in(path);
  auto file_plan = json::parse(in);
  CHECK(file_plan["errors"][0]["formula"] == "taylor_sin");
  std::filesystem::remove(path);

  auto js = json::parse(run({"compose", "--registry", kData + "/registry.json", "--expr",
                             "exp(x)", "--eval", "x=0", "--json"})
                            .out);
  CHECK(js["plan"]["root"]["numeric"] == "exp_squaring");
  CHECK(js["value"] == 1.0);

  auto missing = run({"compose", "--registry", kData + "/registry.json", "--expr", "gamma(x)"});
  CHECK(missing.code == cli::kExitError);
  CHECK(missing.err.find("gamma/1") != std::string::npos);
  CHECK(run({"compose", "--registry", kData + "/registry.json", "--expr", "x", "--eval", "x"})
            .code == cli::kExitError);
}

TEST_CASE("helpers") {
  auto fns = cli::parse_function_list("# growth\nlin = n\n\n quad=n^2 \n");
  REQUIRE(fns.size() == 2);
  CHECK(fns[1].id == "quad");
  CHECK(fns[1].fn.label() == "n^2");
  CHECK_THROWS(cli::parse_function_list("lin n"));

  auto b = cli::parse_bindings("x=1.5, y=-2");
  CHECK(b.at("x") == 1.5);
  CHECK(b.at("y") == -2.0);
  CHECK_THROWS(cli::parse_bindings("x=abc"));
}
