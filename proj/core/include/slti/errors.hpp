// Copyright 2026 The slti Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLTI_ERRORS_HPP_
#define SLTI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace slti {

/// Malformed or out-of-contract input: bad dimensions, unparseable JSON,
/// out-of-range node labels.  The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation does not hold (unstable input to
/// a stable-system construction, unstructured input, ill-posed loop).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical routine could not produce a result within its contract
/// (singular Sylvester operator, Riccati iteration breakdown).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A synthesis step failed because the plant is not stabilizable/detectable
/// where the construction requires it.
class SynthesisError : public std::runtime_error {
 public:
  explicit SynthesisError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The answer is tolerance-sensitive: eigenvalues sit inside the margin band
/// around the imaginary axis and no boolean verdict is trustworthy.  The CLI
/// maps this to exit code 3.
class IndeterminateError : public std::runtime_error {
 public:
  explicit IndeterminateError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slti

#endif  // SLTI_ERRORS_HPP_
