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

#include "tgbs/clickstats.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "tgbs/error.h"
#include "tgbs/instance.h"
#include "tgbs/sampler.h"

namespace tgbs {
namespace {

// kappa(S) = m(S) - sum over blocks B containing the first element, B != S,
// of kappa(B) m(S \ B).
double recursive_cumulant(const MomentFn &m, const std::vector<std::size_t> &s) {
    if (s.size() == 1) {
        return m(s);
    }
    double k = m(s);
    const std::size_t rest = s.size() - 1;
    for (std::size_t bits = 0; bits + 1 < (std::size_t{1} << rest); ++bits) {
        std::vector<std::size_t> b = {s[0]}, c;
        for (std::size_t i = 0; i < rest; ++i) {
            ((bits >> i) & 1U ? b : c).push_back(s[i + 1]);
        }
        k -= recursive_cumulant(m, b) * m(c);
    }
    return k;
}

CovarianceMatrix instance(std::size_t m, Hypothesis h, std::uint64_t seed) {
    const DeskInstance inst = make_desk_instance(m, {0.9, 0.6, 0.8}, 0.7, seed);
    return build_hypothesis(h, inst.spec, inst.t);
}

TEST(SetPartitions, BellNumbers) {
    EXPECT_EQ(set_partitions(1).size(), 1u);
    EXPECT_EQ(set_partitions(2).size(), 2u);
    EXPECT_EQ(set_partitions(3).size(), 5u);
    EXPECT_EQ(set_partitions(4).size(), 15u);
    EXPECT_THROW(set_partitions(5), InputError);
}

TEST(Cumulants, IndependentModesVanish) {
    const std::vector<double> p = {0.2, 0.5, 0.7, 0.35};
    const MomentFn m = [&](std::span<const std::size_t> s) {
        double v = 1.0;
        for (std::size_t j : s) {
            v *= p[j];
        }
        return v;
    };
    const std::vector<std::size_t> all = {0, 1, 2, 3};
    EXPECT_NEAR(cumulant_from_moments(m, std::span(all).first(2)), 0.0, 1e-16);
    EXPECT_NEAR(cumulant_from_moments(m, std::span(all).first(3)), 0.0, 1e-16);
    EXPECT_NEAR(cumulant_from_moments(m, all), 0.0, 1e-16);
    const std::vector<std::size_t> one = {2};
    EXPECT_EQ(cumulant_from_moments(m, one), 0.7);
}

TEST(Cumulants, PartitionSumMatchesRecursion) {
    const HusimiPair h = husimi_from_covariance(instance(6, Hypothesis::kSqueezed, 4));
    const MomentFn m = [&](std::span<const std::size_t> s) { return theoretical_moment(h, s); };
    for (const auto &s : std::vector<std::vector<std::size_t>>{{0, 3}, {1, 2, 5}, {0, 2, 3, 4}, {1, 3, 4, 5}}) {
        EXPECT_NEAR(cumulant_from_moments(m, s), recursive_cumulant(m, s), 1e-14);
    }
    const std::vector<std::size_t> five = {0, 1, 2, 3, 4};
    EXPECT_THROW(cumulant_from_moments(m, five), InputError);
}

TEST(Cumulants, SecondOrderIsCovariance) {
    SampleSet s(2, SampleSource::kExperimental);
    for (const char *b : {"11", "10", "00", "01", "11", "11", "00", "10"}) {
        s.push_back(ClickPattern::from_string(b));
    }
    const std::vector<std::size_t> both = {0, 1};
    // E[XY] - E[X]E[Y] = 3/8 - (5/8)(4/8).
    EXPECT_NEAR(empirical_cumulant(s, both), 3.0 / 8 - 5.0 / 16, 1e-15);
    EXPECT_NEAR(empirical_moment(s, both), 3.0 / 8, 1e-15);
}

TEST(Cumulants, EmpiricalConvergesToTheory) {
    const CovarianceMatrix sigma = instance(4, Hypothesis::kSqueezed, 9);
    const HusimiPair h = husimi_from_covariance(sigma);
    const std::size_t batches = 20, per_batch = 50000;
    const std::vector<ModeSubset> subsets = {{0, 1}, {1, 3}, {0, 2, 3}, {0, 1, 2, 3}};
    ExactSampler sampler(sigma);
    std::vector<std::vector<double>> est(subsets.size());
    for (std::size_t b = 0; b < batches; ++b) {
        const SampleSet s = sampler.sample(per_batch, 100 + b);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            est[i].push_back(empirical_cumulant(s, subsets[i]));
        }
    }
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const MomentFn m = [&](std::span<const std::size_t> q) { return theoretical_moment(h, q); };
        const double want = cumulant_from_moments(m, subsets[i]);
        double mean = 0.0, var = 0.0;
        for (double v : est[i]) {
            mean += v;
        }
        mean /= batches;
        for (double v : est[i]) {
            var += (v - mean) * (v - mean);
        }
        const double se = std::sqrt(var / (batches - 1) / batches);
        EXPECT_LT(std::abs(mean - want), 4 * se + 1e-12) << i;
    }
}

TEST(Correlation, ReferenceValues) {
    const std::vector<double> a = {1, 2, 3, 4, 5}, b = {2, 4, 5, 4, 5};
    EXPECT_NEAR(pearson(a, b), 0.7745966692414834, 1e-14);
    EXPECT_NEAR(spearman(a, b), 0.7378647873726218, 1e-14);
    const std::vector<double> x = {3.1, 1.2, 5.5, 2.2, 4.0, 6.3}, y = {7, 7, 9, 1, 3, 3};
    EXPECT_NEAR(pearson(x, y), 0.03979010812656045, 1e-14);
    EXPECT_NEAR(spearman(x, y), 0.08827348295047495, 1e-14);
    EXPECT_NEAR(correlation(Correlation::kPearson, a, a), 1.0, 1e-15);
}

TEST(Correlation, DegenerateInputsThrow) {
    const std::vector<double> c = {1, 1, 1}, d = {1, 2, 3}, e = {1, 2};
    EXPECT_THROW(pearson(c, d), NumericError);
    EXPECT_THROW(pearson(d, e), InputError);
}

TEST(Bootstrap, DeterministicAndSensible) {
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(i);
        y.push_back(i + 5.0 * std::sin(i * 1.7));
    }
    const BootstrapEstimate a = bootstrap_ci(x, y, Correlation::kPearson, 300, 5);
    const BootstrapEstimate b = bootstrap_ci(x, y, Correlation::kPearson, 300, 5);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.stddev, b.stddev);
    EXPECT_EQ(a.resamples, 300u);
    EXPECT_NEAR(a.estimate, pearson(x, y), 0.0);
    EXPECT_GT(a.stddev, 0.0);
    EXPECT_LT(a.stddev, 0.2);
}

TEST(Subsets, AllAndRandom) {
    EXPECT_EQ(all_mode_subsets(6, 3).size(), 20u);
    EXPECT_EQ(all_mode_subsets(6, 3).front(), (ModeSubset{0, 1, 2}));
    const auto r = random_mode_subsets(50, 3, 200, 7);
    EXPECT_EQ(r.size(), 200u);
    std::set<ModeSubset> seen(r.begin(), r.end());
    EXPECT_EQ(seen.size(), 200u);
    for (const auto &s : r) {
        EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        EXPECT_LT(s.back(), 50u);
    }
    EXPECT_EQ(random_mode_subsets(50, 3, 200, 7), r);
    EXPECT_EQ(random_mode_subsets(5, 2, 100, 1).size(), 10u);
}

TEST(Subsets, RoughlyUniform) {
    const auto r = random_mode_subsets(30, 2, 400, 3);
    std::vector<int> hits(30, 0);
    for (const auto &s : r) {
        for (std::size_t j : s) {
            ++hits[j];
        }
    }
    // Each mode appears in 800/30 ~ 26.7 subsets on average.
    for (int h : hits) {
        EXPECT_GT(h, 8);
        EXPECT_LT(h, 50);
    }
}

TEST(CompareCumulants, MatchesDirectEvaluation) {
    const CovarianceMatrix sque = instance(6, Hypothesis::kSqueezed, 2);
    const CovarianceMatrix squa = instance(6, Hypothesis::kSquashed, 2);
    const SampleSet s = ExactSampler(sque).sample(5000, 3);
    const std::vector<ModeSubset> subsets = {{0, 4}, {1, 2, 5}};
    const auto rec = compare_cumulants(sque, squa, s, subsets);
    ASSERT_EQ(rec.size(), 2u);
    const HusimiPair ha = husimi_from_covariance(sque), hb = husimi_from_covariance(squa);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(rec[i].modes, subsets[i]);
        EXPECT_EQ(rec[i].samples, 5000u);
        EXPECT_EQ(rec[i].empirical, empirical_cumulant(s, subsets[i]));
        const MomentFn ma = [&](std::span<const std::size_t> q) { return theoretical_moment(ha, q); };
        const MomentFn mb = [&](std::span<const std::size_t> q) { return theoretical_moment(hb, q); };
        EXPECT_NEAR(rec[i].theory_sque, cumulant_from_moments(ma, subsets[i]), 1e-14);
        EXPECT_NEAR(rec[i].theory_squa, cumulant_from_moments(mb, subsets[i]), 1e-14);
    }
}

TEST(CorrelationSummary, GroupsByHypothesisAndOrder) {
    std::vector<CumulantRecord> rec;
    for (int i = 0; i < 12; ++i) {
        CumulantRecord r;
        r.modes = i < 6 ? ModeSubset{0, 1} : ModeSubset{0, 1, 2};
        r.theory_sque = i * 0.1;
        r.theory_squa = std::cos(i);
        r.empirical = i * 0.1 + 0.01 * std::sin(3.0 * i);
        rec.push_back(r);
    }
    const auto out = correlation_summary(rec, 100, 1);
    ASSERT_EQ(out.size(), 4u);
    std::map<std::pair<int, std::size_t>, CorrelationSummary> by;
    for (const auto &c : out) {
        by[{static_cast<int>(c.hypothesis), c.order}] = c;
        EXPECT_EQ(c.count, 6u);
    }
    EXPECT_GT((by[{0, 2}].pearson.estimate), 0.99);
    EXPECT_LT((by[{1, 2}].pearson.estimate), 0.99);
}

}  // namespace
}  // namespace tgbs
