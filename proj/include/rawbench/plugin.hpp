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

#ifndef RAWBENCH_PLUGIN_HPP_
#define RAWBENCH_PLUGIN_HPP_

// Client side of the plugin wire protocol: newline-delimited JSON over the
// child's stdin/stdout, one UTF-8 object per line, audio exchanged as WAV
// files referenced by path.
//
//   {"op":"info"}                               -> {"name","message_length","native_rate"}
//   {"op":"embed","input","output","bits":[..]} -> {"ok":true}
//   {"op":"detect","input"}                     -> {"bits":[..],"scores":[..],"presence":x}
//   {"op":"attack","input","output","params":{..}} -> {"ok":true, ...}
//
// Any {"ok":false,"error":"..."} reply aborts the request. The child exits
// when its stdin is closed.

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawbench/error.hpp"
#include "rawbench/subprocess.hpp"

namespace rawbench {

using Json = nlohmann::json;

struct PluginTimeouts {
  std::chrono::milliseconds info{30000};
  std::chrono::milliseconds request{600000};
};

struct PluginInfo {
  std::string name;
  int message_length = 0;
  int native_rate = 0;
  Json raw;
};

struct PluginDetectReply {
  std::vector<int> bits;
  std::vector<double> scores;
  std::optional<double> presence;
};

class PluginClient {
 public:
  explicit PluginClient(std::vector<std::string> argv, PluginTimeouts timeouts = {})
      : argv_(std::move(argv)), timeouts_(timeouts) {
    start();
  }

  const std::vector<std::string>& argv() const { return argv_; }
  std::string command_line() const { return join_argv(argv_); }

  bool running() const { return process_ != nullptr; }

  // Sends one request and returns the parsed reply object. A crashed or
  // timed-out child is discarded and transparently restarted on the next
  // request.
  Json request(const Json& message, std::chrono::milliseconds timeout) {
    if (!process_) start();
    const std::string op = message.value("op", std::string("?"));
    if (!process_->write_line(message.dump())) {
      process_.reset();
      throw PluginError("plugin failure: " + argv_.front() + " closed its input during '" + op + "'");
    }
    std::string line;
    switch (process_->read_line(line, timeout)) {
      case Subprocess::ReadStatus::kEof:
        process_.reset();
        throw PluginError("plugin failure: " + argv_.front() + " exited during '" + op + "'");
      case Subprocess::ReadStatus::kTimeout:
        process_->kill();
        process_.reset();
        throw PluginError("plugin failure: " + argv_.front() + " timed out during '" + op + "'");
      case Subprocess::ReadStatus::kLine:
        break;
    }
    Json reply;
    try {
      reply = Json::parse(line);
    } catch (const Json::parse_error&) {
      throw ProtocolError("protocol violation: reply to '" + op + "' is not JSON: " +
                          line.substr(0, 200));
    }
    if (!reply.is_object()) {
      throw ProtocolError("protocol violation: reply to '" + op + "' is not a JSON object");
    }
    if (auto it = reply.find("ok"); it != reply.end() && it->is_boolean() && !it->get<bool>()) {
      throw PluginError("plugin error during '" + op + "': " +
                        reply.value("error", std::string("unspecified")));
    }
    return reply;
  }

  PluginInfo info() {
    const Json reply = request({{"op", "info"}}, timeouts_.info);
    PluginInfo info;
    try {
      info.name = reply.at("name").get<std::string>();
      info.message_length = reply.at("message_length").get<int>();
      info.native_rate = reply.at("native_rate").get<int>();
    } catch (const Json::exception& e) {
      throw ProtocolError(std::string("protocol violation: malformed info reply: ") + e.what());
    }
    if (info.message_length < 1 || info.native_rate <= 0) {
      throw ProtocolError("protocol violation: info reply has non-positive message_length or native_rate");
    }
    info.raw = reply;
    return info;
  }

  void embed(const std::filesystem::path& input, const std::filesystem::path& output,
             const std::vector<int>& bits) {
    const Json reply = request(
        {{"op", "embed"}, {"input", input.string()}, {"output", output.string()}, {"bits", bits}},
        timeouts_.request);
    require_ok(reply, "embed");
  }

  PluginDetectReply detect(const std::filesystem::path& input) {
    const Json reply = request({{"op", "detect"}, {"input", input.string()}}, timeouts_.request);
    PluginDetectReply out;
    try {
      for (const auto& b : reply.at("bits")) {
        const int bit = b.is_boolean() ? static_cast<int>(b.get<bool>()) : b.get<int>();
        if (bit != 0 && bit != 1) throw ProtocolError("protocol violation: detect bit not 0/1");
        out.bits.push_back(bit);
      }
      if (auto it = reply.find("scores"); it != reply.end() && it->is_array()) {
        for (const auto& s : *it) out.scores.push_back(s.get<double>());
      }
      if (auto it = reply.find("presence"); it != reply.end() && it->is_number()) {
        out.presence = it->get<double>();
      }
    } catch (const Json::exception& e) {
      throw ProtocolError(std::string("protocol violation: malformed detect reply: ") + e.what());
    }
    return out;
  }

  Json attack(const std::filesystem::path& input, const std::filesystem::path& output,
              const Json& params) {
    const Json reply = request({{"op", "attack"},
                                {"input", input.string()},
                                {"output", output.string()},
                                {"params", params}},
                               timeouts_.request);
    require_ok(reply, "attack");
    return reply;
  }

 private:
  void start() {
    try {
      process_ = std::make_unique<Subprocess>(argv_);
    } catch (const SpawnError& e) {
      throw PluginError(e.what());
    }
  }

  static void require_ok(const Json& reply, const char* op) {
    auto it = reply.find("ok");
    if (it == reply.end() || !it->is_boolean() || !it->get<bool>()) {
      throw ProtocolError(std::string("protocol violation: '") + op + "' reply lacks \"ok\":true");
    }
  }

  std::vector<std::string> argv_;
  PluginTimeouts timeouts_;
  std::unique_ptr<Subprocess> process_;
};

}  // namespace rawbench

#endif  // RAWBENCH_PLUGIN_HPP_
