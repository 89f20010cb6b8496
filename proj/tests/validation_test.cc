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

#include "tgbs/validation.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include <gtest/gtest.h>

#include "tgbs/error.h"
#include "tgbs/instance.h"
#include "tgbs/sampler.h"

namespace tgbs {
namespace {

struct Pair {
    DeskInstance inst;
    CovarianceMatrix sque, squa;
    SectorProbabilities ps, pa;
};

Pair make_pair(std::size_t m, std::uint64_t seed) {
    Pair p{make_desk_instance(m, std::vector<double>(m / 2, 1.0), 0.5, seed), {}, {}, {}, {}};
    p.sque = build_hypothesis(Hypothesis::kSqueezed, p.inst.spec, p.inst.t);
    p.squa = build_hypothesis(Hypothesis::kSquashed, p.inst.spec, p.inst.t);
    p.ps = SectorProbabilities::exact(sector_sums(probability_table(husimi_from_covariance(p.sque)), m));
    p.pa = SectorProbabilities::exact(sector_sums(probability_table(husimi_from_covariance(p.squa)), m));
    return p;
}

TEST(ConditionalLogProb, SingleModeIsCertain) {
    const std::vector<double> n = {0.7};
    const HusimiPair h = husimi_from_covariance(CovarianceMatrix::thermal(n));
    const ClickPattern s = ClickPattern::from_string("1");
    EXPECT_NEAR(conditional_log_prob(h, s, 1, click_probability(h, s)), 0.0, 1e-15);
}

TEST(ConditionalLogProb, NormalizedWithinSector) {
    const Pair p = make_pair(6, 3);
    const HusimiPair h = husimi_from_covariance(p.sque);
    for (std::size_t c : {1, 2, 3}) {
        double total = 0.0;
        for (std::uint64_t m = 0; m < 64; ++m) {
            if (static_cast<std::size_t>(std::popcount(m)) == c) {
                total += std::exp(conditional_log_prob(h, ClickPattern::from_mask(m, 6), c, p.ps.probability[c]));
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-8) << c;
    }
}

TEST(ConditionalLogProb, Errors) {
    const HusimiPair h = husimi_from_covariance(make_pair(4, 1).sque);
    const ClickPattern s = ClickPattern::from_string("1100");
    EXPECT_THROW(conditional_log_prob(h, s, 3, 0.1), InputError);
    EXPECT_THROW(conditional_log_prob(h, s, 2, 0.0), NumericError);
    EXPECT_THROW(conditional_log_prob(h, s, 2, -0.1), NumericError);
}

TEST(Ratio, StableLimits) {
    EXPECT_EQ(ratio_from_delta(0.0, 100), 0.5);
    EXPECT_EQ(ratio_from_delta(10.0, 1000), 0.0);
    EXPECT_EQ(ratio_from_delta(-10.0, 1000), 1.0);
    EXPECT_NEAR(ratio_from_delta(0.001, 1000), 1 / (1 + std::exp(1.0)), 1e-15);
    EXPECT_FALSE(std::isnan(ratio_from_delta(1e300, 1000)));
}

TEST(Bayes, IdenticalHypothesesGiveZero) {
    const Pair p = make_pair(6, 2);
    const SampleSet s = exact_sample(p.sque, 3000, 1);
    const std::vector<std::size_t> clicks = {2, 3};
    const auto sectors = split_by_clicks(s, clicks, 200);
    const TestResult r = bayesian_test(sectors, p.sque, p.sque, p.ps, p.ps);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.test, "bayes");
    EXPECT_EQ(r.probability_source, "exact");
    for (const auto &row : r.rows) {
        EXPECT_EQ(row.delta, 0.0);
        EXPECT_EQ(row.ratio, 0.5);
        EXPECT_EQ(row.samples, 200u);
    }
}

TEST(Bayes, SwappingHypothesesNegates) {
    const Pair p = make_pair(6, 4);
    const SampleSet s = exact_sample(p.sque, 3000, 2);
    const std::vector<std::size_t> clicks = {2, 3};
    const auto sectors = split_by_clicks(s, clicks, 150);
    const TestResult a = bayesian_test(sectors, p.sque, p.squa, p.ps, p.pa);
    const TestResult b = bayesian_test(sectors, p.squa, p.sque, p.pa, p.ps);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].delta, -b.rows[i].delta);
        EXPECT_EQ(a.rows[i].std_error, b.rows[i].std_error);
        EXPECT_NEAR(a.rows[i].ratio + b.rows[i].ratio, 1.0, 1e-15);
    }
}

TEST(Bayes, InvariantUnderReordering) {
    const Pair p = make_pair(6, 5);
    const std::vector<std::size_t> clicks = {3};
    auto sectors = split_by_clicks(exact_sample(p.sque, 3000, 3), clicks, 120);
    const TestResult a = bayesian_test(sectors, p.sque, p.squa, p.ps, p.pa);
    std::vector<ClickPattern> rev(sectors[0].patterns().rbegin(), sectors[0].patterns().rend());
    SampleSet reversed(6, SampleSource::kExactSampler);
    for (auto &x : rev) {
        reversed.push_back(x);
    }
    const std::vector<SampleSet> other = {reversed};
    const TestResult b = bayesian_test(other, p.sque, p.squa, p.ps, p.pa);
    EXPECT_NEAR(a.rows[0].delta, b.rows[0].delta, 1e-15);
}

TEST(Bayes, FavorsTheGeneratingHypothesis) {
    const Pair p = make_pair(8, 6);
    const std::vector<std::size_t> clicks = {3, 4};
    const ExactSampler sq(p.sque), sa(p.squa);
    for (std::size_t c : clicks) {
        const std::vector<SampleSet> from_sque = {sq.sample_sector(c, 2000, 1)};
        const std::vector<SampleSet> from_squa = {sa.sample_sector(c, 2000, 1)};
        const TestRow a = bayesian_test(from_sque, p.sque, p.squa, p.ps, p.pa).rows[0];
        const TestRow b = bayesian_test(from_squa, p.sque, p.squa, p.ps, p.pa).rows[0];
        // Expected delta is minus / plus a relative entropy, so only the sign is fixed.
        EXPECT_LT(a.delta, 0.0) << c;
        EXPECT_GT(b.delta, 0.0) << c;
        EXPECT_GT(a.ratio, 0.99);
        EXPECT_LT(b.ratio, 0.01);
    }
}

TEST(Hog, SwapNegatesAndSizesMustMatch) {
    const Pair p = make_pair(6, 7);
    const std::vector<std::size_t> clicks = {2, 3};
    const auto e = split_by_clicks(exact_sample(p.sque, 3000, 1), clicks, 100);
    const auto a = split_by_clicks(exact_sample(p.squa, 3000, 1), clicks, 100);
    const TestResult x = hog_test(e, a, p.sque);
    const TestResult y = hog_test(a, e, p.sque);
    EXPECT_EQ(x.test, "hog");
    EXPECT_EQ(x.probability_source, "cancels");
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(x.rows[i].delta, -y.rows[i].delta);
        EXPECT_EQ(x.rows[i].probability_std_error, 0.0);
    }
    const TestResult same = hog_test(e, e, p.sque);
    EXPECT_EQ(same.rows[0].delta, 0.0);
    const auto short_a = split_by_clicks(exact_sample(p.squa, 3000, 1), clicks, 50);
    EXPECT_THROW(hog_test(e, short_a, p.sque), InputError);
    const std::vector<SampleSet> one = {e[0]};
    EXPECT_THROW(hog_test(e, one, p.sque), InputError);
}

TEST(SplitByClicks, FirstAndRandomSelections) {
    SampleSet s(4, SampleSource::kExperimental);
    for (const char *b : {"1100", "1000", "0011", "1010", "0110", "1111", "0101"}) {
        s.push_back(ClickPattern::from_string(b));
    }
    const std::vector<std::size_t> clicks = {2, 1};
    const auto first = split_by_clicks(s, clicks, 3);
    ASSERT_EQ(first.size(), 2u);
    ASSERT_EQ(first[0].size(), 3u);
    EXPECT_EQ(first[0][0].to_string(), "1100");
    EXPECT_EQ(first[0][2].to_string(), "1010");
    EXPECT_EQ(first[1].size(), 1u);
    const auto r1 = split_by_clicks(s, clicks, 3, true, 9);
    const auto r2 = split_by_clicks(s, clicks, 3, true, 9);
    EXPECT_EQ(r1[0].patterns(), r2[0].patterns());
    ASSERT_EQ(r1[0].size(), 3u);
    const std::vector<std::string> order = {"1100", "0011", "1010", "0110", "0101"};
    std::vector<std::ptrdiff_t> pos;
    for (const auto &x : r1[0].patterns()) {
        const auto it = std::find(order.begin(), order.end(), x.to_string());
        ASSERT_NE(it, order.end());
        pos.push_back(it - order.begin());
    }
    EXPECT_TRUE(std::adjacent_find(pos.begin(), pos.end(), std::greater_equal<>()) == pos.end());
}

TEST(SectorProbabilities, Source) {
    const DeskInstance small = make_desk_instance(6, {0.7, 0.7, 0.7}, 0.5, 1);
    EstimatorOptions o;
    o.samples = 2000;
    o.groups = 10;
    const auto e = sector_probabilities(Hypothesis::kSqueezed, small.spec, small.t, o);
    EXPECT_EQ(e.source, "exact");
    EXPECT_EQ(e.uncertainty, std::vector<double>(7, 0.0));
    const DeskInstance big = make_desk_instance(14, std::vector<double>(7, 0.7), 0.5, 1);
    const auto ps = sector_probabilities(Hypothesis::kSqueezed, big.spec, big.t, o);
    EXPECT_EQ(ps.source, "phase-space");
    EXPECT_EQ(ps.probability.size(), 15u);
}

TEST(EffectivePrecision, ForcedForLargeSectors) {
    EXPECT_EQ(effective_precision(Precision::kDouble, 19), Precision::kDouble);
    EXPECT_EQ(effective_precision(Precision::kDouble, 20), Precision::kExtended);
    EXPECT_EQ(effective_precision(Precision::kExtended, 2), Precision::kExtended);
}

}  // namespace
}  // namespace tgbs
