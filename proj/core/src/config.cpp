#include "hord/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toml_lite.hpp"

namespace hord {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { raise(Errc::ConfigInvalid, what); }

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + " must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + " must be a string");
  return j.get<std::string>();
}

std::vector<VariableSpec> parse_variables(const json& j) {
  if (!j.is_array() || j.empty()) bad("'variable' must be a non-empty array of tables");
  std::vector<VariableSpec> vars;
  for (const json& entry : j) {
    if (!entry.is_object()) bad("each variable must be a table");
    expect_keys(entry, {"name", "lower", "upper", "kind"}, "a variable table");
    VariableSpec v;
    if (!entry.contains("name")) bad("a variable is missing its name");
    v.name = as_string(entry.at("name"), "variable name");
    if (!entry.contains("lower") || !entry.contains("upper")) {
      bad("variable '" + v.name + "' needs lower and upper bounds");
    }
    v.lower = as_number(entry.at("lower"), "variable '" + v.name + "' lower");
    v.upper = as_number(entry.at("upper"), "variable '" + v.name + "' upper");
    if (entry.contains("kind")) {
      const std::string kind = as_string(entry.at("kind"), "variable kind");
      if (kind == "continuous") {
        v.kind = VarKind::Continuous;
      } else if (kind == "integer") {
        v.kind = VarKind::Integer;
      } else {
        bad("variable '" + v.name + "' has unknown kind '" + kind +
            "' (use continuous or integer)");
      }
    }
    vars.push_back(std::move(v));
  }
  return vars;
}

EvaluatorSpec parse_evaluator(const json& j) {
  if (!j.is_object()) bad("'evaluator' must be a table");
  expect_keys(j, {"kind", "name", "command", "args", "timeout_s"}, "the evaluator table");
  EvaluatorSpec spec;
  const std::string kind =
      j.contains("kind") ? as_string(j.at("kind"), "evaluator kind") : "builtin";
  if (kind == "builtin") {
    spec.kind = EvaluatorSpec::Kind::Builtin;
    if (!j.contains("name")) bad("builtin evaluator needs a name");
    spec.name = as_string(j.at("name"), "evaluator name");
  } else if (kind == "external") {
    spec.kind = EvaluatorSpec::Kind::External;
    if (!j.contains("command")) bad("external evaluator needs a command");
    spec.command = as_string(j.at("command"), "evaluator command");
    if (j.contains("args")) {
      if (!j.at("args").is_array()) bad("evaluator args must be an array of strings");
      for (const json& a : j.at("args")) {
        spec.args.push_back(as_string(a, "an evaluator arg"));
      }
    }
    if (j.contains("timeout_s")) {
      spec.timeout_s = as_number(j.at("timeout_s"), "evaluator timeout_s");
    }
  } else {
    bad("unknown evaluator kind '" + kind + "' (use builtin or external)");
  }
  return spec;
}

StudyConfig from_tree(const json& j) {
  if (!j.is_object()) bad("the config root must be a table");
  expect_keys(j,
              {"variable", "evaluator", "algorithms", "trials", "max_evals", "seed",
               "out", "n0", "m", "d_tol", "sigma2_init", "isp", "target"},
              "the config");

  if (!j.contains("variable")) bad("config needs at least one [[variable]]");
  Domain domain(parse_variables(j.at("variable")));
  if (!j.contains("evaluator")) bad("config needs an [evaluator] table");

  StudyConfig cfg{std::move(domain), parse_evaluator(j.at("evaluator"))};

  if (j.contains("algorithms")) {
    if (!j.at("algorithms").is_array()) bad("'algorithms' must be an array of strings");
    cfg.algorithms.clear();
    for (const json& a : j.at("algorithms")) {
      cfg.algorithms.push_back(parse_algorithm(as_string(a, "an algorithm entry")));
    }
  }
  if (j.contains("trials")) cfg.trials = as_int(j.at("trials"), "'trials'");
  if (j.contains("max_evals")) cfg.n_max = as_int(j.at("max_evals"), "'max_evals'");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      bad("'seed' must be a non-negative integer");
    }
    cfg.base_seed = s.get<std::uint64_t>();
  }
  if (j.contains("out")) cfg.out_dir = as_string(j.at("out"), "'out'");
  if (j.contains("n0")) cfg.n0 = as_int(j.at("n0"), "'n0'");
  if (j.contains("m")) cfg.m = as_int(j.at("m"), "'m'");
  if (j.contains("d_tol")) cfg.d_tol = as_number(j.at("d_tol"), "'d_tol'");
  if (j.contains("sigma2_init")) {
    cfg.sigma2_init = as_number(j.at("sigma2_init"), "'sigma2_init'");
  }
  if (j.contains("target")) cfg.target = as_number(j.at("target"), "'target'");
  if (j.contains("isp")) {
    const json& isp = j.at("isp");
    if (!isp.is_object() || isp.empty()) {
      bad("'isp' must be a table of variable = value entries");
    }
    ExternalPoint point;
    for (const auto& [key, value] : isp.items()) {
      point[key] = as_number(value, "isp entry '" + key + "'");
    }
    cfg.isp = std::move(point);
  }

  cfg.validate();
  return cfg;
}

}  // namespace

StudyConfig study_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("JSON parse error: ") + e.what());
  }
  return from_tree(j);
}

StudyConfig study_config_from_toml(const std::string& text) {
  return from_tree(detail::parse_toml_lite(text));
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.extension() == ".json") return study_config_from_json(text);
  return study_config_from_toml(text);
}

}  // namespace hord
