/*
 * Copyright 2026 The sxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace sxai {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kOracle = 3,
  kFormat = 4,
  kInternal = 5,
};

// All failures inside the library surface as sxai::Error. The code maps 1:1
// onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}
[[noreturn]] inline void ThrowIo(const std::string& what) {
  throw Error(ErrorCode::kIo, what);
}
[[noreturn]] inline void ThrowFormat(const std::string& what) {
  throw Error(ErrorCode::kFormat, what);
}
[[noreturn]] inline void ThrowOracle(const std::string& what) {
  throw Error(ErrorCode::kOracle, what);
}

}  // namespace sxai
