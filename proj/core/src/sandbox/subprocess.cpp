#include "redahd/sandbox/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "redahd/error.hpp"

namespace redahd::sandbox {

namespace {

using Clock = std::chrono::steady_clock;

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fd[0] >= 0) ::close(fd[0]);
    fd[0] = -1;
  }
  void close_write() {
    if (fd[1] >= 0) ::close(fd[1]);
    fd[1] = -1;
  }
};

ExecResponse failed(const ExecRequest& req, BatchOutcome outcome, std::string why,
                    Clock::time_point start) {
  ExecResponse r;
  r.request_id = req.request_id;
  r.outcome = outcome;
  r.error = std::move(why);
  r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::string tail(const std::string& s, std::size_t n = 2000) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

}  // namespace

SubprocessSandbox::SubprocessSandbox(std::vector<std::string> argv, SubprocessOptions options)
    : argv_(std::move(argv)), options_(options) {
  if (argv_.empty()) throw ContractError("subprocess sandbox: empty runner command");
  // A runner that dies mid-request must not take the engine down with it.
  ::signal(SIGPIPE, SIG_IGN);
}

ExecResponse SubprocessSandbox::execute(const ExecRequest& request) {
  const auto start = Clock::now();
  const std::string line = to_json(request).dump() + "\n";
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                  request.timeout_seconds + options_.startup_grace_seconds));

  Pipe in, out, err;
  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    if (options_.memory_limit_bytes > 0) {
      rlimit lim{options_.memory_limit_bytes, options_.memory_limit_bytes};
      ::setrlimit(RLIMIT_AS, &lim);
    }
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.close_read();
  out.close_write();
  err.close_write();
  ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);

  auto kill_child = [&] {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
  };

  // Stream state: the request is written only after the handshake arrives.
  std::string stdout_buf, stderr_buf;
  std::size_t written = 0;
  bool handshake = false;
  bool stdout_open = true, stderr_open = true;
  std::string response_line;

  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) {
      kill_child();
      return failed(request, BatchOutcome::Timeout,
                    "batch exceeded " + std::to_string(request.timeout_seconds) + "s", start);
    }
    pollfd fds[3];
    nfds_t n = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (stdout_open) {
      fds[n] = {out.fd[0], POLLIN, 0};
      out_idx = static_cast<int>(n++);
    }
    if (stderr_open) {
      fds[n] = {err.fd[0], POLLIN, 0};
      err_idx = static_cast<int>(n++);
    }
    if (handshake && in.fd[1] >= 0) {
      fds[n] = {in.fd[1], POLLOUT, 0};
      in_idx = static_cast<int>(n++);
    }
    if (n == 0) break;
    const auto wait_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    const int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(wait_ms, 1000)));
    if (ready < 0 && errno != EINTR) {
      kill_child();
      return failed(request, BatchOutcome::Crashed, std::string("poll: ") + std::strerror(errno),
                    start);
    }
    char buf[65536];
    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t got = ::read(out.fd[0], buf, sizeof buf);
      if (got <= 0) {
        stdout_open = false;
      } else {
        stdout_buf.append(buf, static_cast<std::size_t>(got));
      }
    }
    if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t got = ::read(err.fd[0], buf, sizeof buf);
      if (got <= 0) {
        stderr_open = false;
      } else {
        stderr_buf.append(buf, static_cast<std::size_t>(got));
        if (stderr_buf.size() > (1u << 20)) stderr_buf.erase(0, stderr_buf.size() - (1u << 19));
      }
    }
    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[in_idx].revents & (POLLERR | POLLHUP)) {
        in.close_write();
      } else {
        const ssize_t put = ::write(in.fd[1], line.data() + written, line.size() - written);
        if (put > 0) written += static_cast<std::size_t>(put);
        if (put < 0 && errno != EAGAIN) in.close_write();
        if (written == line.size()) in.close_write();
      }
    }

    // Consume complete lines.
    std::size_t nl;
    bool done = false;
    while (!done && (nl = stdout_buf.find('\n')) != std::string::npos) {
      std::string l = stdout_buf.substr(0, nl);
      stdout_buf.erase(0, nl + 1);
      if (l.empty()) continue;
      if (!handshake) {
        try {
          const auto h = nlohmann::json::parse(l);
          if (h.at("protocol_version").get<int>() != kProtocolVersion) {
            kill_child();
            return failed(request, BatchOutcome::Crashed,
                          "runner speaks protocol " + h["protocol_version"].dump(), start);
          }
        } catch (const nlohmann::json::exception&) {
          kill_child();
          return failed(request, BatchOutcome::Crashed, "bad handshake line: " + tail(l, 200),
                        start);
        }
        handshake = true;
      } else {
        response_line = std::move(l);
        done = true;
      }
    }
    if (done) break;
  }

  if (response_line.empty()) {
    kill_child();
    return failed(request, BatchOutcome::Crashed,
                  std::string(handshake ? "runner exited without a response"
                                        : "runner exited before the handshake") +
                      (stderr_buf.empty() ? "" : ": " + tail(stderr_buf)),
                  start);
  }
  kill_child();  // one request per process

  ExecResponse response;
  try {
    response = response_from_json(nlohmann::json::parse(response_line));
  } catch (const std::exception& e) {
    return failed(request, BatchOutcome::Crashed,
                  std::string("malformed response: ") + e.what(), start);
  }
  if (response.request_id != request.request_id) {
    return failed(request, BatchOutcome::Crashed,
                  "response id '" + response.request_id + "' does not match request", start);
  }
  if (response.outcome == BatchOutcome::Completed &&
      response.results.size() != request.instances.size()) {
    return failed(request, BatchOutcome::Crashed,
                  "runner returned " + std::to_string(response.results.size()) +
                      " results for " + std::to_string(request.instances.size()) + " instances",
                  start);
  }
  if (response.outcome == BatchOutcome::Completed &&
      response.wall_time_seconds > request.timeout_seconds) {
    return failed(request, BatchOutcome::Timeout,
                  "runner reported " + std::to_string(response.wall_time_seconds) + "s", start);
  }
  response.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return response;
}

}  // namespace redahd::sandbox
