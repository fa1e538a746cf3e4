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

#ifndef RAWBENCH_TEMP_DIR_HPP_
#define RAWBENCH_TEMP_DIR_HPP_

#include <stdlib.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <system_error>

#include "rawbench/error.hpp"

namespace rawbench {

// Owns a fresh directory under the system temp path; removed recursively on
// destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "rawbench") {
    std::string pattern =
        (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
    if (::mkdtemp(pattern.data()) == nullptr) {
      throw IoError("cannot create temporary directory under " +
                    std::filesystem::temp_directory_path().string());
    }
    path_ = pattern;
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }

  // A new unique path inside the directory (the file is not created).
  std::filesystem::path unique_file(const std::string& stem, const std::string& ext) {
    return path_ / (stem + "-" + std::to_string(counter_++) + ext);
  }

 private:
  std::filesystem::path path_;
  std::atomic<unsigned long> counter_{0};
};

}  // namespace rawbench

#endif  // RAWBENCH_TEMP_DIR_HPP_
