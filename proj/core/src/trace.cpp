#include "hord/trace.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hord/errors.hpp"

namespace hord {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json optional_count(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string trace_record_to_json(const TraceRecord& record) {
  json j;
  j["n"] = record.n;
  j["phase"] = phase_name(record.phase);
  j["point"] = std::vector<double>(record.point.data(),
                                   record.point.data() + record.point.size());
  j["point_external"] = record.point_external;
  j["f"] = record.f;
  j["best_f_so_far"] = record.best_f_so_far;
  j["sigma2"] = optional_number(record.sigma2);
  j["phi_n"] = optional_number(record.phi_n);
  j["weight_w"] = optional_number(record.weight_w);
  j["candidates_generated"] = optional_count(record.candidates_generated);
  j["candidates_surviving"] = optional_count(record.candidates_surviving);
  j["wall_time"] = record.wall_time;
  return j.dump();
}

TraceRecord trace_record_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    raise(Errc::CorruptTrace, std::string("unparseable trace line: ") + e.what());
  }
  try {
    TraceRecord r;
    r.n = j.at("n").get<int>();
    r.phase = parse_phase(j.at("phase").get<std::string>());
    const auto coords = j.at("point").get<std::vector<double>>();
    r.point = Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                static_cast<Eigen::Index>(coords.size()));
    r.point_external = j.at("point_external").get<ExternalPoint>();
    r.f = j.at("f").get<double>();
    r.best_f_so_far = j.at("best_f_so_far").get<double>();
    r.sigma2 = read_optional<double>(j, "sigma2");
    r.phi_n = read_optional<double>(j, "phi_n");
    r.weight_w = read_optional<double>(j, "weight_w");
    r.candidates_generated = read_optional<int>(j, "candidates_generated");
    r.candidates_surviving = read_optional<int>(j, "candidates_surviving");
    r.wall_time = j.value("wall_time", 0.0);
    return r;
  } catch (const json::exception& e) {
    raise(Errc::CorruptTrace, std::string("trace record misses a field: ") + e.what());
  }
}

std::string trace_to_jsonl(const Trace& trace) {
  std::string out;
  for (const TraceRecord& r : trace) {
    out += trace_record_to_json(r);
    out.push_back('\n');
  }
  return out;
}

Trace trace_from_jsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    trace.push_back(trace_record_from_json(line));
  }
  return trace;
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    raise(Errc::ConfigInvalid, "cannot open trace file for writing: " + path.string());
  }
  out << trace_to_jsonl(trace);
  if (!out.flush()) {
    raise(Errc::ConfigInvalid, "failed writing trace file: " + path.string());
  }
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(Errc::CorruptTrace, "cannot open trace file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return trace_from_jsonl(text.str());
}

std::string canonicalize_jsonl(const std::string& jsonl_text) {
  std::string out;
  std::istringstream in(jsonl_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      raise(Errc::CorruptTrace, std::string("unparseable trace line: ") + e.what());
    }
    j.erase("wall_time");
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace hord
