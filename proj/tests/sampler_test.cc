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

#include "tgbs/sampler.h"

#include <bit>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "tgbs/error.h"
#include "tgbs/instance.h"
#include "tgbs/log.h"

namespace tgbs {
namespace {

SamplerConfig config(const DeskInstance &inst, std::size_t n, std::uint64_t seed) {
    SamplerConfig c;
    c.spec = inst.spec;
    c.t = inst.t;
    c.samples = n;
    c.seed = seed;
    return c;
}

TEST(SquashedSampler, VacuumNeverClicks) {
    SamplerConfig c;
    c.spec = SqueezeSpec({0.0, 0.0});
    c.t = TransmissionMatrix::identity(4);
    c.samples = 1000;
    const SampleSet s = sample_squashed(c);
    ASSERT_EQ(s.size(), 1000u);
    EXPECT_EQ(s.click_histogram()[0], 1000u);
    EXPECT_EQ(s.source(), SampleSource::kSquashedSampler);
}

TEST(SquashedSampler, SingleModeClickRate) {
    // Undo the pairwise beamsplitter and keep input mode 0.
    const double r = 0.8;
    SamplerConfig c;
    c.spec = SqueezeSpec({r});
    ComplexMatrix first = ComplexMatrix::Zero(1, 2);
    first(0, 0) = 1.0;
    c.t = TransmissionMatrix(first * pairwise_beamsplitter_modes(2).transpose());
    c.samples = 400000;
    c.seed = 3;
    const SampleSet s = sample_squashed(c);
    const double p = 1 - 1 / std::sqrt(std::cosh(2 * r));
    const double got = static_cast<double>(s.click_histogram()[1]) / c.samples;
    EXPECT_LT(std::abs(got - p), 5 * std::sqrt(p * (1 - p) / c.samples));
}

TEST(SquashedSampler, MarginalsMatchTheory) {
    const DeskInstance inst = make_desk_instance(8, {1.0, 0.8, 0.9, 0.7}, 0.5, 4);
    const HusimiPair h = husimi_from_covariance(build_hypothesis(Hypothesis::kSquashed, inst.spec, inst.t));
    const std::size_t n = 200000;
    const SampleSet s = sample_squashed(config(inst, n, 6));
    for (std::size_t j = 0; j < 8; ++j) {
        const std::vector<std::size_t> m = {j};
        const double p = marginal_probability(h, m);
        std::size_t hits = 0;
        for (const auto &x : s.patterns()) {
            hits += x.test(j);
        }
        EXPECT_LT(std::abs(static_cast<double>(hits) / n - p), 5 * std::sqrt(p * (1 - p) / n)) << j;
    }
    const std::vector<std::size_t> pair = {1, 5};
    const double p = marginal_probability(h, pair);
    std::size_t hits = 0;
    for (const auto &x : s.patterns()) {
        hits += x.test(1) && x.test(5);
    }
    EXPECT_LT(std::abs(static_cast<double>(hits) / n - p), 5 * std::sqrt(p * (1 - p) / n));
}

TEST(SquashedSampler, ValidatesConfig) {
    const DeskInstance inst = make_desk_instance(4, {0.5, 0.5}, 0.5, 1);
    SamplerConfig c = config(inst, 10, 1);
    c.kind = Hypothesis::kSqueezed;
    EXPECT_THROW(sample_squashed(c), InputError);
    c = config(inst, 10, 1);
    c.rejection_cap = 0;
    EXPECT_THROW(sample_squashed(c), InputError);
    c = config(inst, 10, 1);
    c.condition_clicks = 5;
    EXPECT_THROW(sample_squashed(c), InputError);
    c = config(inst, 10, 1);
    c.spec = SqueezeSpec({0.5});
    EXPECT_THROW(sample_squashed(c), InputError);
}

TEST(SquashedSampler, ConditioningAndCap) {
    const DeskInstance inst = make_desk_instance(6, {0.8, 0.8, 0.8}, 0.5, 2);
    SamplerConfig c = config(inst, 500, 7);
    c.condition_clicks = 3;
    const SampleSet s = sample_squashed(c);
    ASSERT_EQ(s.size(), 500u);
    EXPECT_FALSE(s.incomplete());
    for (const auto &x : s.patterns()) {
        EXPECT_EQ(x.click_count(), 3u);
    }
    c.condition_clicks = 6;
    c.samples = 100000;
    c.rejection_cap = 5000;
    const std::size_t warnings = warning_count();
    set_warnings_enabled(false);
    const SampleSet partial = sample_squashed(c);
    set_warnings_enabled(true);
    EXPECT_TRUE(partial.incomplete());
    EXPECT_LT(partial.size(), 100000u);
    EXPECT_GT(warning_count(), warnings);
}

TEST(SquashedSampler, DeterministicAndUncorrelated) {
    const DeskInstance inst = make_desk_instance(6, {0.9, 0.7, 0.8}, 0.6, 3);
    const SampleSet a = sample_squashed(config(inst, 10000, 11));
    const SampleSet b = sample_squashed(config(inst, 10000, 11));
    EXPECT_EQ(a.patterns(), b.patterns());
    std::vector<double> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = static_cast<double>(a[i].click_count());
    }
    const double m = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        den += (c[i] - m) * (c[i] - m);
        if (i + 1 < c.size()) {
            num += (c[i] - m) * (c[i + 1] - m);
        }
    }
    EXPECT_LT(std::abs(num / den), 5 / std::sqrt(static_cast<double>(c.size())));
}

TEST(ExactSampler, VacuumAndSingleMode) {
    const ExactSampler vac(CovarianceMatrix::vacuum(3));
    EXPECT_EQ(vac.table()[0], 1.0);
    EXPECT_EQ(vac.sample(100, 1).click_histogram()[0], 100u);
    RealMatrix s = RealMatrix::Zero(2, 2);
    s(0, 0) = std::exp(2.0);
    s(1, 1) = std::exp(-2.0);
    const ExactSampler one{CovarianceMatrix(s)};
    EXPECT_NEAR(one.table()[1], 1 - 1 / std::cosh(1.0), 1e-12);
    EXPECT_NEAR(one.raw_total(), 1.0, 1e-12);
    EXPECT_EQ(one.sectors().size(), 2u);
}

TEST(ExactSampler, ChiSquareAcrossTrials) {
    const DeskInstance inst = make_desk_instance(4, {0.8, 0.6}, 0.7, 5);
    const ExactSampler sampler(build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t));
    const std::vector<double> &p = sampler.table();
    const boost::math::chi_squared dist(15.0);
    int passed = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const std::size_t n = 20000;
        const SampleSet s = sampler.sample(n, 1000 + trial);
        std::vector<double> counts(16, 0.0);
        for (const auto &x : s.patterns()) {
            counts[x.mask()] += 1;
        }
        double chi2 = 0.0;
        for (std::size_t k = 0; k < 16; ++k) {
            const double e = p[k] * n;
            chi2 += (counts[k] - e) * (counts[k] - e) / e;
        }
        passed += boost::math::cdf(boost::math::complement(dist, chi2)) > 0.001;
    }
    EXPECT_GE(passed, 99);
}

TEST(ExactSampler, SectorDraws) {
    const DeskInstance inst = make_desk_instance(5, {0.9, 0.9, 0.9}, 0.6, 6);
    const ExactSampler sampler(build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t));
    const SampleSet s = sampler.sample_sector(2, 30000, 1);
    ASSERT_EQ(s.size(), 30000u);
    std::vector<double> counts(32, 0.0);
    for (const auto &x : s.patterns()) {
        ASSERT_EQ(x.click_count(), 2u);
        counts[x.mask()] += 1;
    }
    for (std::uint64_t m = 0; m < 32; ++m) {
        if (std::popcount(m) == 2) {
            const double p = sampler.table()[m] / sampler.sectors()[2];
            EXPECT_LT(std::abs(counts[m] / 30000 - p), 5 * std::sqrt(p * (1 - p) / 30000));
        }
    }
    EXPECT_THROW(sampler.sample_sector(6, 1, 1), InputError);
    EXPECT_THROW(ExactSampler(CovarianceMatrix::vacuum(13)), InputError);
}

TEST(ExactSampler, AgreesWithSquashedSampler) {
    const DeskInstance inst = make_desk_instance(5, {0.9, 0.6, 0.7}, 0.5, 8);
    const ExactSampler exact(build_hypothesis(Hypothesis::kSquashed, inst.spec, inst.t));
    const std::size_t n = 200000;
    const SampleSet s = sample_squashed(config(inst, n, 2));
    std::vector<double> counts(32, 0.0);
    for (const auto &x : s.patterns()) {
        counts[x.mask()] += 1;
    }
    double tvd = 0.0;
    for (std::size_t k = 0; k < 32; ++k) {
        tvd += std::abs(counts[k] / n - exact.table()[k]) / 2;
    }
    // Expected sampling TVD is about sum sqrt(p / n) / 2 ~ 0.005.
    EXPECT_LT(tvd, 0.015);
}

TEST(ConditionOnClicks, FiltersAndWarns) {
    SampleSet s(3, SampleSource::kExperimental);
    for (const char *b : {"110", "000", "011", "111"}) {
        s.push_back(ClickPattern::from_string(b));
    }
    const SampleSet two = condition_on_clicks(s, 2);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].to_string(), "110");
    EXPECT_EQ(two[1].to_string(), "011");
    const std::size_t before = warning_count();
    set_warnings_enabled(false);
    EXPECT_TRUE(condition_on_clicks(s, 1).empty());
    set_warnings_enabled(true);
    EXPECT_GT(warning_count(), before);
}

}  // namespace
}  // namespace tgbs
