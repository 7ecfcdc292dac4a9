#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace instgen {

struct ProcessResult {
  int exit_code = -1;
  int term_signal = 0;
  bool timed_out = false;
  bool killed = false;  // needed SIGKILL after the grace period
  double elapsed = 0.0;  // spawn to reap, seconds
  std::string out;
  std::string err;
  std::vector<double> line_times;  // arrival time of each stdout line
};

/// Runs `/bin/sh -c command` in its own process group. After `time_limit`
/// seconds the group gets SIGTERM, then SIGKILL after `grace` seconds.
/// `mem_limit` (bytes, 0 = none) becomes RLIMIT_AS of the child.
ProcessResult run_process(const std::string& command, double time_limit, std::uint64_t mem_limit,
                          double grace);

/// Single-quotes `s` for /bin/sh.
std::string shell_quote(const std::string& s);

}  // namespace instgen
