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

// Minimal plugin for protocol conformance testing. Embeds nothing (the audio
// comes back unchanged), detects all-zero bits, and answers codec attacks by
// echoing and MOS-LQO requests with a fixed score. Fault-injection flags let
// tests exercise the harness's error paths.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"rawbench echo plugin"};
  std::string name = "echo";
  int message_length = 16;
  int native_rate = 16000;
  double mos = 4.5;
  bool garbage_info = false;
  std::string crash_on;
  std::string hang_on;
  std::string fail_on;
  app.add_option("--name", name);
  app.add_option("--message-length", message_length);
  app.add_option("--native-rate", native_rate);
  app.add_option("--mos", mos, "Score returned for MOS-LQO requests");
  app.add_flag("--garbage-info", garbage_info, "Reply to info with a non-JSON line");
  app.add_option("--crash-on", crash_on, "Exit without replying when this op arrives");
  app.add_option("--hang-on", hang_on, "Never reply to this op");
  app.add_option("--fail-on", fail_on, "Reply {\"ok\":false} to this op");
  CLI11_PARSE(app, argc, argv);

  std::string line;
  while (std::getline(std::cin, line)) {
    json request;
    try {
      request = json::parse(line);
    } catch (const json::parse_error& e) {
      std::cout << json{{"ok", false}, {"error", e.what()}}.dump() << std::endl;
      continue;
    }
    const std::string op = request.value("op", "");
    if (op == crash_on) return 3;
    if (op == hang_on) {
      for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
    }
    if (op == fail_on) {
      std::cout << json{{"ok", false}, {"error", "injected failure"}}.dump() << std::endl;
      continue;
    }

    json reply;
    try {
      if (op == "info") {
        if (garbage_info) {
          std::cout << "hello there" << std::endl;
          continue;
        }
        reply = {{"name", name}, {"message_length", message_length}, {"native_rate", native_rate}};
      } else if (op == "embed") {
        std::filesystem::copy_file(request.at("input").get<std::string>(),
                                   request.at("output").get<std::string>(),
                                   std::filesystem::copy_options::overwrite_existing);
        reply = {{"ok", true}};
      } else if (op == "detect") {
        reply = {{"bits", std::vector<int>(static_cast<std::size_t>(message_length), 0)},
                 {"scores", std::vector<double>(static_cast<std::size_t>(message_length), 0.5)},
                 {"presence", 0.0}};
      } else if (op == "attack") {
        const json params = request.value("params", json::object());
        if (params.value("metric", "") == "mos_lqo") {
          reply = {{"ok", true}, {"mos_lqo", mos}};
        } else {
          std::filesystem::copy_file(request.at("input").get<std::string>(),
                                     request.at("output").get<std::string>(),
                                     std::filesystem::copy_options::overwrite_existing);
          reply = {{"ok", true}};
        }
      } else {
        reply = {{"ok", false}, {"error", "unknown op '" + op + "'"}};
      }
    } catch (const std::exception& e) {
      reply = {{"ok", false}, {"error", e.what()}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
