// Copyright 2026 The hecnn Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hecnn {

// Error categories double as process exit codes for the CLI.
enum class ErrorKind {
  kUsage = 2,
  kData = 3,
  kCrypto = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) {
  return Error(ErrorKind::kUsage, msg);
}
inline Error data_error(const std::string& msg) {
  return Error(ErrorKind::kData, msg);
}
inline Error crypto_error(const std::string& msg) {
  return Error(ErrorKind::kCrypto, msg);
}

}  // namespace hecnn
