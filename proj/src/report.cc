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

#include "tgbs/report.h"

#include <fstream>
#include <system_error>

#include "tgbs/error.h"
#include "tgbs/io.h"

namespace tgbs {

namespace fs = std::filesystem;

ReportWriter::ReportWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
        throw InputError("cannot create output directory " + dir_.string());
    }
    const fs::path probe = dir_ / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw InputError("output directory " + dir_.string() + " is not writable");
        }
    }
    fs::remove(probe, ec);
}

void ReportWriter::write_csv(const std::string &file, const Row &header, const std::vector<Row> &rows) {
    std::ofstream out(dir_ / file);
    if (!out) {
        throw InputError("cannot write " + (dir_ / file).string());
    }
    auto line = [&](const Row &r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << (i ? "," : "") << r[i];
        }
        out << '\n';
    };
    line(header);
    for (const Row &r : rows) {
        line(r);
    }
    tables_.push_back(file);
}

void ReportWriter::finish() {
    summary_["tables"] = tables_;
    std::ofstream out(dir_ / "summary.json");
    if (!out) {
        throw InputError("cannot write " + (dir_ / "summary.json").string());
    }
    out << summary_.dump(2) << '\n';
}

std::vector<Row> grouped_rows(const GroupedClickDistribution &dist) {
    std::vector<Row> rows;
    for (std::size_t c = 0; c < dist.probability.size(); ++c) {
        rows.push_back({std::to_string(c), format_double(dist.probability[c]), format_double(dist.uncertainty[c]),
                        format_double(dist.std_error_of_mean(c)), std::string(to_string(dist.kind))});
    }
    return rows;
}

std::vector<Row> test_rows(const TestResult &result) {
    std::vector<Row> rows;
    for (const TestRow &r : result.rows) {
        rows.push_back({std::to_string(r.clicks), std::to_string(r.samples), format_double(r.delta),
                        format_double(r.std_error), format_double(r.ratio), format_double(r.sample_std_error),
                        format_double(r.probability_std_error)});
    }
    return rows;
}

std::vector<Row> cumulant_rows(const std::vector<CumulantRecord> &records) {
    std::vector<Row> rows;
    for (const CumulantRecord &r : records) {
        std::string modes;
        for (std::size_t i = 0; i < r.modes.size(); ++i) {
            modes += (i ? " " : "") + std::to_string(r.modes[i]);
        }
        rows.push_back({std::to_string(r.order()), modes, format_double(r.theory_sque), format_double(r.theory_squa),
                        format_double(r.empirical)});
    }
    return rows;
}

nlohmann::ordered_json to_json(const ClickSummary &s) {
    return {{"mean_clicks", s.mean},
            {"mean_clicks_uncertainty", s.mean_uncertainty},
            {"stddev_clicks", s.stddev},
            {"stddev_clicks_uncertainty", s.stddev_uncertainty}};
}

nlohmann::ordered_json to_json(const std::vector<CorrelationSummary> &s) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const CorrelationSummary &c : s) {
        out.push_back({{"hypothesis", std::string(to_string(c.hypothesis))},
                       {"order", c.order},
                       {"subsets", c.count},
                       {"pearson", c.pearson.estimate},
                       {"pearson_bootstrap_std", c.pearson.stddev},
                       {"spearman", c.spearman.estimate},
                       {"spearman_bootstrap_std", c.spearman.stddev},
                       {"bootstrap_resamples", c.pearson.resamples}});
    }
    return out;
}

nlohmann::ordered_json to_json(const TestResult &r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const TestRow &row : r.rows) {
        rows.push_back({{"C", row.clicks},
                        {"L", row.samples},
                        {"delta", row.delta},
                        {"stderr", row.std_error},
                        {"ratio", row.ratio}});
    }
    return {{"test", r.test},
            {"hypotheses", r.hypotheses},
            {"probability_source", r.probability_source},
            {"rows", rows}};
}

}  // namespace tgbs
