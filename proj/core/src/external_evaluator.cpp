#include "hord/external_evaluator.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>

#include <nlohmann/json.hpp>

#include "hord/errors.hpp"

namespace hord {

namespace {

using Clock = std::chrono::steady_clock;

// A write to a child that died mid-run must surface as an error code, not a
// process-killing signal.
void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

nlohmann::json domain_message(const Domain& domain) {
  nlohmann::json vars = nlohmann::json::array();
  for (const VariableSpec& v : domain.variables()) {
    vars.push_back({{"name", v.name},
                    {"lower", v.lower},
                    {"upper", v.upper},
                    {"kind", var_kind_name(v.kind)}});
  }
  return {{"domain", vars}};
}

}  // namespace

ExternalEvaluator::ExternalEvaluator(std::string command,
                                     std::vector<std::string> args,
                                     double timeout_s, const Domain& domain)
    : command_(std::move(command)), args_(std::move(args)), timeout_s_(timeout_s) {
  ignore_sigpipe_once();
  spawn(domain);
}

ExternalEvaluator::~ExternalEvaluator() { shutdown(); }

void ExternalEvaluator::spawn(const Domain& domain) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    raise(Errc::ChildCrashed, "pipe creation failed");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    raise(Errc::ChildCrashed, "fork failed");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(command_.c_str()));
    for (const std::string& a : args_) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(command_.c_str(), argv.data());
    ::_exit(127);  // exec failed; parent sees EOF
  }

  pid_ = pid;
  to_child_ = to_child[1];
  from_child_ = from_child[0];
  ::close(to_child[0]);
  ::close(from_child[1]);

  try {
    write_line(domain_message(domain).dump());
    const std::string line = read_line(timeout_s_);
    nlohmann::json ready;
    try {
      ready = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      raise(Errc::ProtocolError, "handshake line is not valid JSON: " + line);
    }
    if (!ready.contains("ready") || ready["ready"] != true) {
      raise(Errc::ProtocolError, "child did not acknowledge the domain: " + line);
    }
  } catch (...) {
    shutdown();  // the constructor will not complete, reap the child here
    throw;
  }
}

void ExternalEvaluator::write_line(const std::string& line) {
  std::string data = line;
  data.push_back('\n');
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t rc = ::write(to_child_, data.data() + written, data.size() - written);
    if (rc < 0) {
      if (errno == EINTR) continue;
      raise(Errc::ChildCrashed, std::string("write to child failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(rc);
  }
}

std::string ExternalEvaluator::read_line(double deadline_s) {
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(deadline_s));
  for (;;) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (remaining.count() <= 0) {
      raise(Errc::Timeout, "child did not answer within the timeout");
    }
    struct pollfd pfd = {from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      raise(Errc::ChildCrashed, std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) {
      raise(Errc::Timeout, "child did not answer within the timeout");
    }
    char chunk[4096];
    const ssize_t got = ::read(from_child_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR) continue;
      raise(Errc::ChildCrashed, std::string("read from child failed: ") + std::strerror(errno));
    }
    if (got == 0) {
      raise(Errc::ChildCrashed, "child closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

double ExternalEvaluator::evaluate(const ExternalPoint& p) {
  const std::uint64_t id = next_id_++;
  nlohmann::json request = {{"id", id}, {"x", p}};
  write_line(request.dump());

  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(timeout_s_));
  for (;;) {
    const double remaining_s =
        std::chrono::duration<double>(deadline - Clock::now()).count();
    if (remaining_s <= 0.0) {
      raise(Errc::Timeout, "child did not answer within the timeout");
    }
    const std::string line = read_line(remaining_s);
    nlohmann::json response;
    try {
      response = nlohmann::json::parse(line);
    } catch (const nlohmann::json::out_of_range&) {
      // A number too large for a double is the one way strict JSON can
      // express a non-finite objective.
      raise(Errc::NonFiniteValue, "response number overflows a double: " + line);
    } catch (const nlohmann::json::exception&) {
      raise(Errc::ProtocolError, "response is not valid JSON: " + line);
    }
    if (!response.is_object() || !response.contains("id") ||
        !response["id"].is_number_integer()) {
      raise(Errc::ProtocolError, "response lacks a usable id: " + line);
    }
    if (response["id"] != nlohmann::json(id)) {
      continue;  // stale answer to a superseded request
    }
    if (response.contains("error")) {
      raise(Errc::EvaluationError,
            "child reported: " + response["error"].dump());
    }
    if (!response.contains("f") || !response["f"].is_number()) {
      raise(Errc::ProtocolError, "response lacks a numeric f: " + line);
    }
    const double f = response["f"].get<double>();
    if (!std::isfinite(f)) {
      raise(Errc::NonFiniteValue, "child returned a non-finite objective value");
    }
    return f;
  }
}

void ExternalEvaluator::shutdown() noexcept {
  if (to_child_ >= 0) {
    ::close(to_child_);  // EOF asks the child to exit
    to_child_ = -1;
  }
  if (pid_ > 0) {
    // Grant a short grace period, then force the issue.
    const auto deadline = Clock::now() + std::chrono::seconds(2);
    for (;;) {
      int status = 0;
      const pid_t rc = ::waitpid(static_cast<pid_t>(pid_), &status, WNOHANG);
      if (rc != 0) break;
      if (Clock::now() >= deadline) {
        ::kill(static_cast<pid_t>(pid_), SIGKILL);
        ::waitpid(static_cast<pid_t>(pid_), &status, 0);
        break;
      }
      ::usleep(10000);
    }
    pid_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
}

}  // namespace hord
