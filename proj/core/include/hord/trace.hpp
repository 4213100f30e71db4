#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hord/domain.hpp"

namespace hord {

// One evaluation in a run, with enough context to replay the run exactly.
// phi_n, weight_w and the candidate counts are only meaningful for adaptive
// iterations and stay null elsewhere; sigma2 is null for algorithms that
// carry no perturbation state (pure random search).
struct TraceRecord {
  int n = 0;                      // 1-based evaluation number
  Phase phase = Phase::InitialDesign;
  Eigen::VectorXd point;          // internal coordinates (snapped)
  ExternalPoint point_external;   // user units
  double f = 0.0;
  double best_f_so_far = 0.0;
  std::optional<double> sigma2;
  std::optional<double> phi_n;
  std::optional<double> weight_w;
  std::optional<int> candidates_generated;
  std::optional<int> candidates_surviving;
  double wall_time = 0.0;         // seconds inside the evaluator
};

using Trace = std::vector<TraceRecord>;

// JSON Lines serialization. One object per line, keys sorted, doubles
// emitted shortest-round-trip, so identical traces give identical bytes.
std::string trace_record_to_json(const TraceRecord& record);
TraceRecord trace_record_from_json(const std::string& line);  // CorruptTrace

std::string trace_to_jsonl(const Trace& trace);
Trace trace_from_jsonl(const std::string& text);  // CorruptTrace

void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace read_trace(const std::filesystem::path& path);

// Re-serializes JSONL with the wall_time key dropped from every record.
// Wall-clock readings are the one legitimately nondeterministic field, so
// byte-for-byte comparisons of reruns are defined over this form.
std::string canonicalize_jsonl(const std::string& jsonl_text);

}  // namespace hord
