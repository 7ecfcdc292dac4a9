#include "instgen/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "instgen/errors.hpp"

namespace instgen {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

ProcessResult run_process(const std::string& command, double time_limit, std::uint64_t mem_limit,
                          double grace) {
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw Error(std::string("pipe: ") + std::strerror(errno));
  }

  const auto t0 = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    if (mem_limit > 0) {
      rlimit rl{static_cast<rlim_t>(mem_limit), static_cast<rlim_t>(mem_limit)};
      ::setrlimit(RLIMIT_AS, &rl);
    }
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // avoid racing the child's own call
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int fds[2] = {out_pipe[0], err_pipe[0]};

  ProcessResult res;
  std::string partial;
  bool term_sent = false;
  double term_at = 0.0;
  int status = 0;
  bool reaped = false;
  char buf[4096];

  while (true) {
    const double now = since(t0);
    if (!term_sent && now >= time_limit) {
      res.timed_out = true;
      term_sent = true;
      term_at = now;
      ::kill(-pid, SIGTERM);
    }
    if (term_sent && !res.killed && now >= term_at + grace) {
      res.killed = true;
      ::kill(-pid, SIGKILL);
    }
    if (!reaped) {
      const pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) reaped = true;
    }
    if (fds[0] < 0 && fds[1] < 0) {
      if (reaped) break;
      ::usleep(5000);
      continue;
    }
    // Once the main process has exited, stray children holding the pipes
    // open must not keep us waiting past the limit.
    if (reaped && term_sent && res.killed) break;

    pollfd pfd[2];
    int n = 0;
    int which[2];
    for (int i = 0; i < 2; ++i) {
      if (fds[i] >= 0) {
        pfd[n] = {fds[i], POLLIN, 0};
        which[n++] = i;
      }
    }
    double wait = term_sent ? term_at + grace - now : time_limit - now;
    if (res.killed) wait = 0.05;
    int timeout_ms = static_cast<int>(std::max(1.0, std::min(wait * 1000.0, 50.0)));
    const int rc = ::poll(pfd, static_cast<nfds_t>(n), timeout_ms);
    if (rc < 0 && errno != EINTR) break;
    for (int j = 0; j < n; ++j) {
      if (!(pfd[j].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const int i = which[j];
      const ssize_t got = ::read(fds[i], buf, sizeof buf);
      if (got <= 0) {
        close_fd(fds[i]);
        continue;
      }
      if (i == 1) {
        res.err.append(buf, static_cast<std::size_t>(got));
        continue;
      }
      const double t = since(t0);
      for (ssize_t k = 0; k < got; ++k) {
        partial += buf[k];
        if (buf[k] == '\n') {
          res.out += partial;
          res.line_times.push_back(t);
          partial.clear();
        }
      }
    }
  }
  close_fd(fds[0]);
  close_fd(fds[1]);
  if (!partial.empty()) {
    res.out += partial;
    res.line_times.push_back(since(t0));
  }
  if (!reaped) {
    ::kill(-pid, SIGKILL);
    ::waitpid(pid, &status, 0);
  }
  // Leftover group members (e.g. background children) are not waited for.
  ::kill(-pid, SIGKILL);
  res.elapsed = since(t0);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) res.term_signal = WTERMSIG(status);
  return res;
}

}  // namespace instgen
