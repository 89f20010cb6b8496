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

#ifndef TGBS_ACCEPTANCE_H
#define TGBS_ACCEPTANCE_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tgbs {

enum class CriterionStatus { kPass, kFail, kFinding, kSkip };

std::string_view to_string(CriterionStatus s);

struct CriterionResult {
    int id = 0;
    std::string name;
    CriterionStatus status = CriterionStatus::kFail;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20260101;
    /// Run only these criteria (all when empty).
    std::vector<int> only;
    /// Manifest of an external dataset for the data-backed criterion; that
    /// criterion is skipped without it.
    std::optional<std::filesystem::path> data_manifest;
    /// Phase-space draws for the data-backed criterion.
    std::size_t data_phase_space_samples = 100000000;
};

/// Runs the acceptance criteria, printing one line per criterion to `out` as
/// each finishes. kFinding marks a soft criterion outside its target.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options, std::ostream &out);

/// True unless some criterion has status kFail.
bool acceptance_passed(const std::vector<CriterionResult> &results);

}  // namespace tgbs

#endif
