#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hord/domain.hpp"
#include "hord/evaluator.hpp"

namespace hord {

// Client side of the child-process evaluation protocol. One child per run,
// spoken to strictly serially over stdin/stdout with one JSON object per
// line:
//
//   parent -> child   {"domain": [{"name","lower","upper","kind"}, ...]}
//   child  -> parent  {"ready": true}
//   parent -> child   {"id": 7, "x": {"x1": -1.5, ...}}
//   child  -> parent  {"id": 7, "f": 3.25}          or
//                     {"id": 7, "error": "message"}
//
// Closing the child's stdin asks it to exit. Late responses to superseded
// request ids are skipped; every failure maps to a specific Errc:
// Timeout (deadline passed), ChildCrashed (EOF/EPIPE/spawn failure),
// ProtocolError (unparseable or malformed line), NonFiniteValue (f not a
// finite number), EvaluationError (explicit error response).
class ExternalEvaluator : public Evaluator {
 public:
  // Spawns the child and performs the ready handshake.
  ExternalEvaluator(std::string command, std::vector<std::string> args,
                    double timeout_s, const Domain& domain);
  ~ExternalEvaluator() override;

  ExternalEvaluator(const ExternalEvaluator&) = delete;
  ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

  double evaluate(const ExternalPoint& p) override;

 private:
  void spawn(const Domain& domain);
  void write_line(const std::string& line);
  std::string read_line(double deadline_s);  // seconds from now
  void shutdown() noexcept;

  std::string command_;
  std::vector<std::string> args_;
  double timeout_s_;
  long pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
};

}  // namespace hord
