#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "stipula/codegen.hpp"

namespace stipula {

bool VerifierReport::all_closed() const { return status == Status::Completed && open_count() == 0; }

std::size_t VerifierReport::open_count() const {
  std::size_t n = 0;
  for (const auto& o : obligations)
    if (!o.closed) ++n;
  return n;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

struct Child {
  int exit_code = 0;
  bool timed_out = false;
  std::string output;
};

Child run(const std::string& command, std::chrono::seconds timeout) {
  int fds[2];
  if (pipe(fds) != 0) throw ProverNotFound(std::string("pipe failed: ") + std::strerror(errno));
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw ProverNotFound(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);

  Child c;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      c.timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    c.output.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  if (c.timed_out) kill(-pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) c.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) c.exit_code = 128 + WTERMSIG(status);
  return c;
}

}  // namespace

VerifierReport verify_external(const std::string& path, const std::string& prover_cmd, std::chrono::seconds timeout) {
  VerifierReport r;
  if (prover_cmd.empty()) return r;

  Child c = run(prover_cmd + " " + shell_quote(path), timeout);
  if (c.timed_out)
    throw ProverTimeout("prover did not finish within " + std::to_string(timeout.count()) + " s: " + prover_cmd);
  if (c.exit_code == 127) throw ProverNotFound("prover command not found: " + prover_cmd);

  r.status = VerifierReport::Status::Completed;
  r.exit_code = c.exit_code;
  r.output = c.output;
  static const std::regex line(R"(^\s*obligation\s+(\S+)\s*:\s*(closed|open)\s*$)");
  std::istringstream in(c.output);
  std::string l;
  while (std::getline(in, l)) {
    std::smatch m;
    if (std::regex_match(l, m, line)) r.obligations.push_back({m[1], m[2] == "closed"});
  }
  if (r.obligations.empty()) r.obligations.push_back({"all", c.exit_code == 0});
  return r;
}

std::string report_to_json(const VerifierReport& r) {
  nlohmann::json j;
  j["status"] = r.status == VerifierReport::Status::Skipped ? "skipped" : "completed";
  j["exit_code"] = r.exit_code;
  j["obligations"] = nlohmann::json::array();
  for (const auto& o : r.obligations) j["obligations"].push_back({{"name", o.name}, {"closed", o.closed}});
  j["open"] = r.open_count();
  return j.dump(2);
}

}  // namespace stipula
