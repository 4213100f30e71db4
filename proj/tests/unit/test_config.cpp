#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>

#include "hord/config.hpp"
#include "toml_lite.hpp"

using namespace hord;

namespace {

std::optional<Errc> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const char* kFullToml = R"(# benchmark definition, sphere with an integer knob
trials = 4
max_evals = 30        # per trial
seed = 7
out = "demo_out"
algorithms = ["hord", "random", "rbf-uniform"]
n0 = 8
m = 40
d_tol = 0.002
sigma2_init = 0.1
target = 0.5

[evaluator]
kind = "builtin"
name = "rastrigin"      # catalog entry

[[variable]]
name = "x1"
lower = -5.12
upper = 5.12

[[variable]]
name = "k"
lower = 0
upper = 10
kind = "integer"

[isp]
x1 = 0.5
k = 3
)";

const char* kFullJson = R"({
  "trials": 4,
  "max_evals": 30,
  "seed": 7,
  "out": "demo_out",
  "algorithms": ["hord", "random", "rbf-uniform"],
  "n0": 8,
  "m": 40,
  "d_tol": 0.002,
  "sigma2_init": 0.1,
  "target": 0.5,
  "evaluator": {"kind": "builtin", "name": "rastrigin"},
  "variable": [
    {"name": "x1", "lower": -5.12, "upper": 5.12},
    {"name": "k", "lower": 0, "upper": 10, "kind": "integer"}
  ],
  "isp": {"x1": 0.5, "k": 3}
})";

void check_full(const StudyConfig& cfg) {
  CHECK(cfg.trials == 4);
  CHECK(cfg.n_max == 30);
  CHECK(cfg.base_seed == 7);
  CHECK(cfg.out_dir == std::filesystem::path("demo_out"));
  CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::Hord, Algorithm::Random,
                                                 Algorithm::RbfUniform});
  CHECK(cfg.n0 == 8);
  CHECK(cfg.m == 40);
  CHECK(cfg.d_tol == 0.002);
  CHECK(cfg.sigma2_init == 0.1);
  REQUIRE(cfg.target.has_value());
  CHECK(*cfg.target == 0.5);
  CHECK(cfg.evaluator.kind == EvaluatorSpec::Kind::Builtin);
  CHECK(cfg.evaluator.name == "rastrigin");
  REQUIRE(cfg.domain.dimension() == 2);
  CHECK(cfg.domain.variable(0).name == "x1");
  CHECK(cfg.domain.variable(0).kind == VarKind::Continuous);
  CHECK(cfg.domain.variable(1).name == "k");
  CHECK(cfg.domain.variable(1).kind == VarKind::Integer);
  CHECK(cfg.domain.variable(1).upper == 10.0);
  REQUIRE(cfg.isp.has_value());
  CHECK(cfg.isp->at("x1") == 0.5);
  CHECK(cfg.isp->at("k") == 3.0);
}

std::string minimal_with(const std::string& extra) {
  return extra +
         "\n[evaluator]\nname = \"sphere\"\n"
         "[[variable]]\nname = \"x1\"\nlower = -1\nupper = 1\n";
}

}  // namespace

TEST_CASE("a full TOML study config parses field by field") {
  check_full(study_config_from_toml(kFullToml));
}

TEST_CASE("the JSON form of the same study parses identically") {
  check_full(study_config_from_json(kFullJson));
}

TEST_CASE("omitted keys fall back to their defaults") {
  const StudyConfig cfg = study_config_from_toml(minimal_with(""));
  CHECK(cfg.trials == 5);
  CHECK(cfg.n_max == 200);
  CHECK(cfg.base_seed == 0);
  CHECK(cfg.out_dir == std::filesystem::path("hord_study"));
  CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::Hord});
  CHECK(!cfg.n0.has_value());
  CHECK(!cfg.m.has_value());
  CHECK(cfg.d_tol == 1e-3);
  CHECK(!cfg.target.has_value());
  CHECK(!cfg.isp.has_value());
  CHECK(cfg.evaluator.kind == EvaluatorSpec::Kind::Builtin);
}

TEST_CASE("the file loader dispatches on the extension") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto toml_path = dir / "hord_cfg_test.toml";
  const auto json_path = dir / "hord_cfg_test.json";
  {
    std::ofstream out(toml_path);
    out << kFullToml;
  }
  {
    std::ofstream out(json_path);
    out << kFullJson;
  }
  check_full(load_study_config(toml_path));
  check_full(load_study_config(json_path));
  CHECK(code_of([&] { load_study_config(dir / "does_not_exist.toml"); }) ==
        Errc::ConfigInvalid);
  std::filesystem::remove(toml_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("external evaluator configs carry command, args and timeout") {
  const StudyConfig cfg = study_config_from_toml(
      "[evaluator]\n"
      "kind = \"external\"\n"
      "command = \"python3\"\n"
      "args = [\"eval.py\", \"--fast\"]\n"
      "timeout_s = 12.5\n"
      "[[variable]]\nname = \"x1\"\nlower = 0\nupper = 1\n");
  CHECK(cfg.evaluator.kind == EvaluatorSpec::Kind::External);
  CHECK(cfg.evaluator.command == "python3");
  CHECK(cfg.evaluator.args == std::vector<std::string>{"eval.py", "--fast"});
  CHECK(cfg.evaluator.timeout_s == 12.5);
}

TEST_CASE("schema violations are ConfigInvalid") {
  const auto rejects = [](const std::string& text) {
    return code_of([&] { study_config_from_toml(text); }) == Errc::ConfigInvalid;
  };
  // structure
  CHECK(rejects(minimal_with("optimism = 3")));             // unknown top key
  CHECK(rejects("[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\n"));  // no evaluator
  CHECK(rejects("[evaluator]\nname = \"sphere\"\n"));       // no variables
  CHECK(rejects(minimal_with("trials = \"many\"")));        // wrong type
  CHECK(rejects(minimal_with("trials = 2.5")));             // not an integer
  CHECK(rejects(minimal_with("seed = -4")));                // negative seed
  CHECK(rejects(minimal_with("algorithms = \"hord\"")));    // not an array
  CHECK(rejects(minimal_with("algorithms = [\"sgd\"]")));   // unknown algorithm
  CHECK(rejects(minimal_with("algorithms = [\"hord\", \"hord\"]")));  // duplicate
  CHECK(rejects(minimal_with("algorithms = [\"hord-isp\"]")));  // isp table missing
  CHECK(rejects(minimal_with("trials = 0")));               // validation propagates
  CHECK(rejects(minimal_with("n0 = 1")));                   // design smaller than D+1
  CHECK(rejects(minimal_with("sigma2_init = 0.9")));        // outside the legal range
  // evaluator table
  CHECK(rejects(
      "[evaluator]\nkind = \"quantum\"\nname = \"sphere\"\n"
      "[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\n"));
  CHECK(rejects(
      "[evaluator]\nkind = \"external\"\n"
      "[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\n"));  // no command
  CHECK(rejects(
      "[evaluator]\nname = \"sphere\"\nretries = 3\n"
      "[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\n"));  // unknown key
  // variables
  CHECK(rejects(
      "[evaluator]\nname = \"sphere\"\n"
      "[[variable]]\nname = \"x\"\nlower = 2\nupper = 1\n"));  // inverted bounds
  CHECK(rejects(
      "[evaluator]\nname = \"sphere\"\n"
      "[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\nkind = \"binary\"\n"));
  CHECK(rejects(
      "[evaluator]\nname = \"sphere\"\n"
      "[[variable]]\nname = \"x\"\nlower = 0\nupper = 1\nscale = \"log\"\n"));
  CHECK(rejects(
      "[evaluator]\nname = \"sphere\"\n"
      "[[variable]]\nlower = 0\nupper = 1\n"));               // nameless
  // isp
  CHECK(rejects(minimal_with("[isp]")));                      // empty table
  CHECK(rejects(minimal_with("[isp]\nx1 = \"mid\"")));        // non-numeric entry
}

TEST_CASE("TOML grammar violations carry the offending line number") {
  const auto message_of = [](const std::string& text) -> std::string {
    try {
      study_config_from_toml(text);
    } catch (const Error& e) {
      return e.what();
    }
    return {};
  };
  CHECK(message_of("trials = 3\ntrials = 4\n").find("config line 2") !=
        std::string::npos);
  CHECK(message_of("x = [[1, 2], [3]]\n").find("nested arrays") != std::string::npos);
  CHECK(message_of("name = \"unterminated\n").find("unterminated") != std::string::npos);
  CHECK(message_of("[evaluator\nname = \"sphere\"\n").find("malformed") !=
        std::string::npos);
  CHECK(message_of("trials =\n").find("missing value") != std::string::npos);
  CHECK(message_of("out = \"a\" junk\n").find("trailing text") != std::string::npos);
  CHECK(message_of("bad = \"\\q\"\n").find("unsupported escape") != std::string::npos);
  CHECK(message_of("xs = [1, , 2]\n").find("empty array element") != std::string::npos);
  CHECK(message_of("[]\n").find("table header") != std::string::npos);
  CHECK(message_of("= 3\n").find("expected a key") != std::string::npos);
  CHECK(message_of("count ~ 3\n").find("expected '='") != std::string::npos);
  CHECK(message_of("n = 12abc\n").find("cannot parse value") != std::string::npos);
}

TEST_CASE("the TOML subset handles quoting, comments and nesting") {
  const nlohmann::json tree = detail::parse_toml_lite(
      "# leading comment\n"
      "title = \"quote \\\" hash # inside\"  # trailing comment\n"
      "flag = true\n"
      "off = false\n"
      "ratio = -0.25\n"
      "big = 9007199254740993\n"
      "empty = []\n"
      "words = [\"a,b\", \"c\"]\n"
      "\"quoted key\" = 1\n"
      "\n"
      "[outer.inner]\n"
      "depth = 2\n"
      "\n"
      "[[run]]\nid = 1\n"
      "[[run]]\nid = 2\n"
      "[run.meta]\nnote = \"attached to the second run\"\n");
  CHECK(tree.at("title") == "quote \" hash # inside");
  CHECK(tree.at("flag") == true);
  CHECK(tree.at("off") == false);
  CHECK(tree.at("ratio") == -0.25);
  CHECK(tree.at("big") == 9007199254740993LL);
  CHECK(tree.at("empty").is_array());
  CHECK(tree.at("empty").empty());
  CHECK(tree.at("words") == nlohmann::json({"a,b", "c"}));
  CHECK(tree.at("quoted key") == 1);
  CHECK(tree.at("outer").at("inner").at("depth") == 2);
  REQUIRE(tree.at("run").size() == 2);
  CHECK(tree.at("run")[0].at("id") == 1);
  CHECK(tree.at("run")[1].at("id") == 2);
  CHECK(tree.at("run")[1].at("meta").at("note") == "attached to the second run");
}

TEST_CASE("JSON parse failures are ConfigInvalid, not library exceptions") {
  CHECK(code_of([] { study_config_from_json("{ not json"); }) == Errc::ConfigInvalid);
  CHECK(code_of([] { study_config_from_json("[1, 2]"); }) == Errc::ConfigInvalid);
}
