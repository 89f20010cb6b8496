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

#include "tgbs/log.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tgbs {

namespace {
std::mutex g_mu;
std::atomic<bool> g_enabled{true};
std::atomic<std::size_t> g_count{0};
}  // namespace

void warn(std::string_view msg) {
    ++g_count;
    if (!g_enabled) {
        return;
    }
    std::lock_guard<std::mutex> lock(g_mu);
    std::cerr << "warning: " << msg << '\n';
}

void set_warnings_enabled(bool enabled) { g_enabled = enabled; }

std::size_t warning_count() { return g_count; }

}  // namespace tgbs
