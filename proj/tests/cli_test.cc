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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tgbs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string &args) {
        const std::string cmd = std::string(TGBS_CLI) + " --quiet --out-dir " + dir_.string() + " " + args + " > " +
                                (dir_ / "stdout.txt").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::vector<std::vector<std::string>> csv(const std::string &name) {
        std::ifstream in(dir_ / name);
        std::vector<std::vector<std::string>> rows;
        for (std::string line; std::getline(in, line);) {
            std::vector<std::string> row;
            std::stringstream ss(line);
            for (std::string cell; std::getline(ss, cell, ',');) {
                row.push_back(cell);
            }
            rows.push_back(row);
        }
        return rows;
    }

    fs::path dir_;
};

TEST_F(CliTest, VacuumBundleHasZeroDensity) {
    ASSERT_EQ(run("synth --modes 4 --r 0 --eta 0.5 --name vac"), 0);
    ASSERT_EQ(run("hypothesis --bundle " + (dir_ / "vac.manifest").string()), 0);
    const auto rows = csv("hypothesis.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(std::stod(rows[1][2]), 0.0, 1e-15);
    EXPECT_NEAR(std::stod(rows[2][3]), 0.0, 1e-15);
}

TEST_F(CliTest, BayesWithIdenticalHypothesesIsZero) {
    ASSERT_EQ(run("synth --modes 6 --r 0.9 --eta 0.5 --name s --exact-samples 2000"), 0);
    ASSERT_EQ(run("bayes --bundle " + (dir_ / "s.manifest").string() +
                  " --reference sque --alternative sque --clicks 2 3 --per-sector 100"),
              0);
    const auto rows = csv("bayes.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][2], "delta");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(std::stod(rows[i][2]), 0.0);
        EXPECT_EQ(std::stod(rows[i][4]), 0.5);
    }
    EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
}

TEST_F(CliTest, GroupedWritesBothTables) {
    ASSERT_EQ(run("synth --modes 6 --r 0.7 --eta 0.5 --name g"), 0);
    ASSERT_EQ(run("grouped --bundle " + (dir_ / "g.manifest").string() + " --n-samples 2000 --groups 10"), 0);
    EXPECT_EQ(csv("grouped_sque.csv").size(), 8u);
    EXPECT_EQ(csv("grouped_squa.csv").size(), 8u);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("hypothesis"), 2);
    std::ofstream(dir_ / "bad.squeezing") << "0.5\n";
    std::ofstream(dir_ / "bad.transmission") << "1 2\n1.2 0 0 0\n";
    std::ofstream(dir_ / "bad.manifest") << "squeezing = bad.squeezing\ntransmission = bad.transmission\n";
    EXPECT_EQ(run("hypothesis --bundle " + (dir_ / "bad.manifest").string()), 2);
    EXPECT_EQ(run("hypothesis --bundle " + (dir_ / "missing.manifest").string()), 2);
}

}  // namespace
