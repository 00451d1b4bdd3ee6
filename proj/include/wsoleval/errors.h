/* Copyright 2026 The wsoleval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WSOLEVAL_ERRORS_H_
#define WSOLEVAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace wsoleval {

// Malformed input or configuration: bad arguments, unreadable files,
// inconsistent manifests. The CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file that exists but does not parse. Carries the offending location in
// its message.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Input was well-formed but violates a metric precondition discovered while
// evaluating (e.g. an uncalibrated score map). The CLI maps this to exit 1.
class PreconditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsoleval

#endif  // WSOLEVAL_ERRORS_H_
