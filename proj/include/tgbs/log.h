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

#ifndef TGBS_LOG_H
#define TGBS_LOG_H

#include <cstddef>
#include <string_view>

namespace tgbs {

/// Writes "warning: <msg>" to stderr unless warnings are silenced. Thread safe.
void warn(std::string_view msg);
void set_warnings_enabled(bool enabled);
/// Number of warnings issued since startup (silenced ones included).
std::size_t warning_count();

}  // namespace tgbs

#endif
