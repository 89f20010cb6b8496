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

#ifndef TGBS_REPORT_H
#define TGBS_REPORT_H

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgbs/clickstats.h"
#include "tgbs/phasespace.h"
#include "tgbs/validation.h"

namespace tgbs {

using Row = std::vector<std::string>;

/// CSV tables plus one summary.json in an output directory. Tables are
/// written immediately; the summary on finish().
class ReportWriter {
   public:
    /// Creates the directory. Throws InputError if that fails or it is not writable.
    explicit ReportWriter(std::filesystem::path dir);

    const std::filesystem::path &dir() const { return dir_; }
    nlohmann::ordered_json &summary() { return summary_; }

    void write_csv(const std::string &file, const Row &header, const std::vector<Row> &rows);
    void finish();

   private:
    std::filesystem::path dir_;
    nlohmann::ordered_json summary_ = nlohmann::ordered_json::object();
    std::vector<std::string> tables_;
};

inline const Row kGroupedHeader = {"C", "probability", "uncertainty", "std_error_of_mean", "hypothesis"};
inline const Row kTestHeader = {"C", "L", "delta", "stderr", "ratio", "sample_stderr", "probability_stderr"};
inline const Row kCumulantHeader = {"order", "modes", "theory_sque", "theory_squa", "empirical"};

std::vector<Row> grouped_rows(const GroupedClickDistribution &dist);
std::vector<Row> test_rows(const TestResult &result);
std::vector<Row> cumulant_rows(const std::vector<CumulantRecord> &records);

nlohmann::ordered_json to_json(const ClickSummary &s);
nlohmann::ordered_json to_json(const std::vector<CorrelationSummary> &s);
nlohmann::ordered_json to_json(const TestResult &r);

}  // namespace tgbs

#endif
