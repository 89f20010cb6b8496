// Copyright 2026 The tgbs Authors
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

#ifndef TGBS_ERROR_H
#define TGBS_ERROR_H

#include <stdexcept>
#include <string>

namespace tgbs {

/// Malformed or inconsistent input: bad dimensions, unparsable files,
/// unphysical transmission matrices. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy value (failed
/// factorization, probability far outside [0, 1], non-finite logs).
/// Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace tgbs

#endif
