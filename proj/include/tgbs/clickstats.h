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

#ifndef TGBS_CLICKSTATS_H
#define TGBS_CLICKSTATS_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tgbs/click_pattern.h"
#include "tgbs/gaussian.h"
#include "tgbs/torontonian.h"

namespace tgbs {

using ModeSubset = std::vector<std::size_t>;

/// Cumulants are supported up to this order (1, 2, 5 and 15 partitions).
inline constexpr std::size_t kMaxCumulantOrder = 4;

/// <prod_{i in modes} X_i> = probability that all listed modes click.
double theoretical_moment(const HusimiPair &h, std::span<const std::size_t> modes);
double theoretical_moment(const CovarianceMatrix &sigma, std::span<const std::size_t> modes);

using MomentFn = std::function<double(std::span<const std::size_t>)>;

/// kappa = sum over partitions pi of (|pi|-1)! (-1)^(|pi|-1) prod_{B in pi} moment(B).
/// Throws InputError for more than kMaxCumulantOrder modes.
double cumulant_from_moments(const MomentFn &moment, std::span<const std::size_t> modes);

/// Set partitions of {0..n-1}, each a list of blocks. n <= kMaxCumulantOrder.
const std::vector<std::vector<std::vector<std::size_t>>> &set_partitions(std::size_t n);

/// Fraction of samples in which every listed mode clicked.
double empirical_moment(const SampleSet &samples, std::span<const std::size_t> modes);
double empirical_cumulant(const SampleSet &samples, std::span<const std::size_t> modes);

/// All C(M, order) subsets in lexicographic order.
std::vector<ModeSubset> all_mode_subsets(std::size_t modes, std::size_t order);

/// `count` distinct uniformly random subsets (each sorted), in draw order.
/// Returns all subsets when count >= C(M, order).
std::vector<ModeSubset> random_mode_subsets(std::size_t modes, std::size_t order, std::size_t count,
                                            std::uint64_t seed);

double pearson(std::span<const double> xs, std::span<const double> ys);
/// Rank correlation; ties get the average of the ranks they span.
double spearman(std::span<const double> xs, std::span<const double> ys);

enum class Correlation { kPearson, kSpearman };
double correlation(Correlation kind, std::span<const double> xs, std::span<const double> ys);

struct BootstrapEstimate {
    double estimate = 0.0;
    double stddev = 0.0;
    std::size_t resamples = 0;  // resamples with a defined statistic
};

inline constexpr std::size_t kDefaultBootstrapResamples = 1000;

/// Statistic on the full data plus the standard deviation of the statistic
/// over index-pair resamples drawn with replacement.
BootstrapEstimate bootstrap_ci(std::span<const double> xs, std::span<const double> ys, Correlation kind,
                               std::size_t resamples, std::uint64_t seed);

struct CumulantRecord {
    ModeSubset modes;
    double theory_sque = 0.0;
    double theory_squa = 0.0;
    double empirical = 0.0;
    std::size_t samples = 0;

    std::size_t order() const { return modes.size(); }
};

/// Theoretical (both hypotheses) and empirical cumulants for each subset.
std::vector<CumulantRecord> compare_cumulants(const CovarianceMatrix &sque, const CovarianceMatrix &squa,
                                              const SampleSet &samples, std::span<const ModeSubset> subsets);

struct CorrelationSummary {
    Hypothesis hypothesis = Hypothesis::kSqueezed;
    std::size_t order = 0;
    std::size_t count = 0;
    BootstrapEstimate pearson;
    BootstrapEstimate spearman;
};

/// Theory-vs-experiment correlation per hypothesis and cumulant order.
std::vector<CorrelationSummary> correlation_summary(std::span<const CumulantRecord> records, std::size_t resamples,
                                                    std::uint64_t seed);

}  // namespace tgbs

#endif
