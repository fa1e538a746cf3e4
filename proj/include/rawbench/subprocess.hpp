// Copyright 2026 The rawbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWBENCH_SUBPROCESS_HPP_
#define RAWBENCH_SUBPROCESS_HPP_

// POSIX child processes: long-lived line-oriented children (plugins) and
// run-to-completion commands (codec encoders/decoders).

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rawbench/error.hpp"

extern char** environ;

namespace rawbench {

class SpawnError : public Error {
 public:
  using Error::Error;
};

inline std::string join_argv(const std::vector<std::string>& argv) {
  std::ostringstream out;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (i) out << ' ';
    out << argv[i];
  }
  return out.str();
}

// Whitespace split with single/double quote grouping. No escapes, no
// variable expansion.
inline std::vector<std::string> split_command_line(const std::string& text) {
  std::vector<std::string> argv;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (char c : text) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        current += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) argv.push_back(std::exchange(current, {}));
      in_token = false;
    } else {
      current += c;
      in_token = true;
    }
  }
  if (quote) throw InvalidArgument("unterminated quote in command line: " + text);
  if (in_token) argv.push_back(current);
  return argv;
}

inline bool executable_on_path(const std::string& name) {
  if (name.find('/') != std::string::npos) return ::access(name.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    const auto candidate = std::filesystem::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

namespace detail {

inline void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd(std::exchange(other.fd, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      reset();
      fd = std::exchange(other.fd, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

inline std::vector<char*> make_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

class SpawnActions {
 public:
  SpawnActions() { posix_spawn_file_actions_init(&actions_); }
  ~SpawnActions() { posix_spawn_file_actions_destroy(&actions_); }
  SpawnActions(const SpawnActions&) = delete;
  SpawnActions& operator=(const SpawnActions&) = delete;
  posix_spawn_file_actions_t* get() { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

inline pid_t spawn(const std::vector<std::string>& argv, SpawnActions& actions) {
  if (argv.empty()) throw SpawnError("spawn failed: empty command");
  ignore_sigpipe_once();
  auto c_argv = make_argv(argv);
  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0].c_str(), actions.get(), nullptr, c_argv.data(), environ);
  if (rc != 0) {
    throw SpawnError("spawn failed: " + argv[0] + ": " + std::strerror(rc));
  }
  return pid;
}

}  // namespace detail

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  std::string stderr_tail;
};

// Runs a command to completion with stdin and stdout on /dev/null. Stderr is
// captured to `stderr_path` when given. Throws SpawnError if the executable
// cannot be started.
inline CommandResult run_command(const std::vector<std::string>& argv,
                                 std::chrono::milliseconds timeout,
                                 const std::filesystem::path& stderr_path = {}) {
  detail::SpawnActions actions;
  posix_spawn_file_actions_addopen(actions.get(), 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(actions.get(), 1, "/dev/null", O_WRONLY, 0);
  if (!stderr_path.empty()) {
    posix_spawn_file_actions_addopen(actions.get(), 2, stderr_path.c_str(),
                                     O_WRONLY | O_CREAT | O_TRUNC, 0644);
  } else {
    posix_spawn_file_actions_addopen(actions.get(), 2, "/dev/null", O_WRONLY, 0);
  }
  const pid_t pid = detail::spawn(argv, actions);

  CommandResult result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  int status = 0;
  for (;;) {
    const pid_t rc = ::waitpid(pid, &status, WNOHANG);
    if (rc == pid) break;
    if (rc < 0 && errno != EINTR) throw Error("waitpid failed for " + argv[0]);
    if (std::chrono::steady_clock::now() > deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (!result.timed_out && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (!stderr_path.empty()) {
    std::ifstream in(stderr_path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    result.stderr_tail = all.size() > 400 ? all.substr(all.size() - 400) : all;
  }
  return result;
}

// A child process whose stdin/stdout are pipes owned by this object. Stderr
// is inherited. The destructor closes stdin, waits briefly and then kills.
class Subprocess {
 public:
  explicit Subprocess(const std::vector<std::string>& argv) : argv_(argv) {
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw SpawnError("pipe failed");
    detail::Fd child_in(to_child[0]);
    stdin_ = detail::Fd(to_child[1]);
    if (::pipe2(from_child, O_CLOEXEC) != 0) throw SpawnError("pipe failed");
    stdout_ = detail::Fd(from_child[0]);
    detail::Fd child_out(from_child[1]);

    detail::SpawnActions actions;
    posix_spawn_file_actions_adddup2(actions.get(), child_in.fd, 0);
    posix_spawn_file_actions_adddup2(actions.get(), child_out.fd, 1);
    pid_ = detail::spawn(argv, actions);
  }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  ~Subprocess() { terminate(std::chrono::milliseconds(2000)); }

  const std::vector<std::string>& argv() const { return argv_; }
  pid_t pid() const { return pid_; }

  bool alive() {
    if (pid_ <= 0) return false;
    int status = 0;
    const pid_t rc = ::waitpid(pid_, &status, WNOHANG);
    if (rc == pid_) {
      pid_ = -1;
      return false;
    }
    return true;
  }

  // Returns false if the child has closed its stdin.
  bool write_line(const std::string& line) {
    std::string data = line;
    data += '\n';
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(stdin_.fd, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      off += static_cast<std::size_t>(n);
    }
    return true;
  }

  enum class ReadStatus { kLine, kEof, kTimeout };

  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
        line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        return ReadStatus::kLine;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) return ReadStatus::kTimeout;
      pollfd pfd{stdout_.fd, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        return ReadStatus::kEof;
      }
      if (rc == 0) return ReadStatus::kTimeout;
      char chunk[4096];
      const ssize_t n = ::read(stdout_.fd, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return ReadStatus::kEof;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void close_stdin() { stdin_.reset(); }

  void kill() {
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  // Closes stdin and waits up to `grace` for a clean exit, then kills.
  void terminate(std::chrono::milliseconds grace) {
    close_stdin();
    if (pid_ <= 0) return;
    const auto deadline = std::chrono::steady_clock::now() + grace;
    int status = 0;
    while (std::chrono::steady_clock::now() < deadline) {
      const pid_t rc = ::waitpid(pid_, &status, WNOHANG);
      if (rc == pid_ || (rc < 0 && errno != EINTR)) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    kill();
  }

 private:
  std::vector<std::string> argv_;
  pid_t pid_ = -1;
  detail::Fd stdin_;
  detail::Fd stdout_;
  std::string buffer_;
};

}  // namespace rawbench

#endif  // RAWBENCH_SUBPROCESS_HPP_
