/*
 * Copyright 2026 the mfctl authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MFCTL_ERROR_HPP
#define MFCTL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mfctl {

// Error categories map 1:1 onto process exit codes (and C API status
// values): invalid_input -> 4, identity_violation -> 2, cross_check -> 3,
// internal -> 5.
enum class ErrorKind {
  invalid_input,
  identity_violation,
  cross_check,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error input_error(const std::string &what) {
  return Error(ErrorKind::invalid_input, what);
}
inline Error internal_error(const std::string &what) {
  return Error(ErrorKind::internal, what);
}
inline Error cross_check_error(const std::string &what) {
  return Error(ErrorKind::cross_check, what);
}

} // namespace mfctl

#endif
