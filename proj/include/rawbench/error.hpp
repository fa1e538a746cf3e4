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

#ifndef RAWBENCH_ERROR_HPP_
#define RAWBENCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rawbench {

// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations: bad lengths, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Filesystem and container-format problems.
class IoError : public Error {
 public:
  using Error::Error;
};

// Raised by attack implementations; the harness maps it to attack_failed.
class AttackError : public Error {
 public:
  using Error::Error;
};

// A plugin process crashed, timed out or replied {"ok":false}.
class PluginError : public Error {
 public:
  using Error::Error;
};

// A plugin replied with something that is not a valid protocol message.
class ProtocolError : public PluginError {
 public:
  using PluginError::PluginError;
};

// Manifest or run-configuration problems. These abort a run.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rawbench

#endif  // RAWBENCH_ERROR_HPP_
