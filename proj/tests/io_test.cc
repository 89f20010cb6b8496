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

#include "tgbs/io.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tgbs/error.h"
#include "tgbs/instance.h"
#include "tgbs/report.h"
#include "tgbs/sampler.h"

namespace tgbs {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tgbs_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path put(const std::string &name, const std::string &text) {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }

    static std::string slurp(const fs::path &p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

std::string error_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const InputError &e) {
        return e.what();
    }
    return "";
}

TEST_F(IoTest, BundleRoundTripIsExact) {
    const DeskInstance inst = make_desk_instance(5, {0.123456789012345678, 1.0 / 3.0, 0.9}, 0.37, 4);
    const SampleSet s = exact_sample(build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t), 50, 1);
    const fs::path m = write_bundle(dir_, "demo", inst.spec, inst.t, {s, s});
    const ExperimentBundle b = load_bundle(m);
    EXPECT_EQ(b.name, "demo");
    EXPECT_EQ(b.spec.pair_squeezing(), inst.spec.pair_squeezing());
    EXPECT_EQ(b.t.matrix(), inst.t.matrix());
    ASSERT_EQ(b.samples.size(), 2u);
    EXPECT_EQ(b.samples[1].patterns(), s.patterns());
    EXPECT_EQ(b.output_modes(), 5u);
    EXPECT_EQ(b.input_modes(), 6u);
}

TEST_F(IoTest, VacuumBundle) {
    put("v.squeezing", "0\n0\n");
    put("v.transmission", "4 4\n1 0 0 0 0 0 0 0\n0 0 1 0 0 0 0 0\n0 0 0 0 1 0 0 0\n0 0 0 0 0 0 1 0\n");
    put("v.samples", "0000\n0000\n");
    const fs::path m = put("v.manifest",
                           "# vacuum\nname = vac\nsqueezing = v.squeezing\ntransmission = v.transmission\n"
                           "samples = v.samples\nnote = nothing happens\n");
    const ExperimentBundle b = load_bundle(m);
    EXPECT_EQ(b.name, "vac");
    EXPECT_EQ(b.notes, std::vector<std::string>{"nothing happens"});
    const CovarianceMatrix sigma = build_hypothesis(Hypothesis::kSqueezed, b.spec, b.t);
    EXPECT_NEAR(photon_density(sigma), 0.0, 1e-15);
    EXPECT_EQ(b.samples[0].click_histogram()[0], 2u);
}

TEST_F(IoTest, UnphysicalTransmissionRejected) {
    const fs::path p = put("t.transmission", "1 1\n1.2 0\n");
    EXPECT_NE(error_of([&] { read_transmission(p); }).find("1.2"), std::string::npos);
}

TEST_F(IoTest, SampleErrorsNameTheLine) {
    const fs::path p = put("s.samples", "0101\n0110\n011\n");
    const std::string e = error_of([&] { read_samples(p); });
    EXPECT_NE(e.find("s.samples:3"), std::string::npos) << e;
    const fs::path q = put("q.samples", "0101\n01x1\n");
    EXPECT_NE(error_of([&] { read_samples(q); }).find("q.samples:2"), std::string::npos);
    EXPECT_THROW(read_samples(p, 5), InputError);
}

TEST_F(IoTest, MalformedInputs) {
    EXPECT_THROW(read_squeezing(put("a.squeezing", "0.5\nnan\n")), InputError);
    EXPECT_THROW(read_squeezing(put("b.squeezing", "0.5\ninf\n")), InputError);
    EXPECT_THROW(read_squeezing(put("c.squeezing", "0.5 abc\n")), InputError);
    EXPECT_THROW(read_squeezing(dir_ / "missing.squeezing"), InputError);
    EXPECT_THROW(read_transmission(put("d.transmission", "2 1\n0.1 0\n")), InputError);
    put("e.squeezing", "0.5\n");
    put("e.transmission", "2 4\n0.1 0 0 0 0 0 0 0\n0 0 0.1 0 0 0 0 0\n");
    EXPECT_THROW(load_bundle(put("e.manifest", "squeezing = e.squeezing\ntransmission = e.transmission\n")),
                 InputError);
    EXPECT_THROW(load_bundle(put("f.manifest", "colour = blue\n")), InputError);
}

TEST_F(IoTest, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST_F(IoTest, ReportSchemaAndReproducibility) {
    const DeskInstance inst = make_desk_instance(4, {0.6, 0.8}, 0.5, 1);
    auto run = [&](const fs::path &out) {
        ReportWriter w(out);
        const auto d = estimate_grouped_clicks(Hypothesis::kSqueezed, inst.spec, inst.t, 200, 4, 2);
        w.write_csv("grouped_sque.csv", kGroupedHeader, grouped_rows(d));
        w.summary()["summary"] = to_json(summarize(d));
        w.finish();
    };
    run(dir_ / "a");
    run(dir_ / "b");
    const std::string csv = slurp(dir_ / "a" / "grouped_sque.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "C,probability,uncertainty,std_error_of_mean,hypothesis");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
    const auto j = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
    EXPECT_EQ(j["tables"][0], "grouped_sque.csv");
    EXPECT_TRUE(j["summary"].contains("mean_clicks"));
    EXPECT_EQ(csv, slurp(dir_ / "b" / "grouped_sque.csv"));
    EXPECT_EQ(slurp(dir_ / "a" / "summary.json"), slurp(dir_ / "b" / "summary.json"));
}

TEST_F(IoTest, SummaryOnlyReport) {
    ReportWriter w(dir_ / "c");
    w.summary()["x"] = 1;
    w.finish();
    const auto j = nlohmann::json::parse(slurp(dir_ / "c" / "summary.json"));
    EXPECT_EQ(j["x"], 1);
    EXPECT_TRUE(j["tables"].empty());
    EXPECT_EQ(std::distance(fs::directory_iterator(dir_ / "c"), fs::directory_iterator()), 1);
}

TEST_F(IoTest, UnwritableReportDirectory) {
    put("blocker", "x");
    EXPECT_THROW(ReportWriter(dir_ / "blocker" / "sub"), InputError);
}

}  // namespace
}  // namespace tgbs
