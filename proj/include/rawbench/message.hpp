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

#ifndef RAWBENCH_MESSAGE_HPP_
#define RAWBENCH_MESSAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rawbench/error.hpp"
#include "rawbench/random.hpp"

namespace rawbench {

// Immutable bit payload, at least one bit long.
class Message {
 public:
  explicit Message(std::vector<int> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw InvalidArgument("message must carry at least one bit");
    for (int b : bits_) {
      if (b != 0 && b != 1) throw InvalidArgument("message bits must be 0 or 1");
    }
  }

  static Message random(std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> bits(length);
    for (int& b : bits) b = rng.coin() ? 1 : 0;
    return Message(std::move(bits));
  }

  const std::vector<int>& bits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_[i]; }

  std::string to_string() const {
    std::string s;
    for (int b : bits_) s += static_cast<char>('0' + b);
    return s;
  }

  friend bool operator==(const Message&, const Message&) = default;

 private:
  std::vector<int> bits_;
};

}  // namespace rawbench

#endif  // RAWBENCH_MESSAGE_HPP_
