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

#ifndef TGBS_VALIDATION_H
#define TGBS_VALIDATION_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tgbs/click_pattern.h"
#include "tgbs/gaussian.h"
#include "tgbs/phasespace.h"
#include "tgbs/torontonian.h"

namespace tgbs {

/// Pr(C), C = 0..M, together with its uncertainty and where it came from.
struct SectorProbabilities {
    std::vector<double> probability;
    std::vector<double> uncertainty;
    std::string source;  // "exact" or "phase-space"

    static SectorProbabilities exact(std::vector<double> sectors);
    static SectorProbabilities from_estimate(const GroupedClickDistribution &dist);
};

/// Exact sector sums up to this many modes, the phase-space estimate above.
inline constexpr std::size_t kExactSectorModes = 12;

struct EstimatorOptions {
    std::size_t samples = kDefaultPhaseSpaceSamples;
    std::size_t groups = kDefaultPhaseSpaceGroups;
    std::uint64_t seed = 0;
    Precision precision = Precision::kDouble;
};

SectorProbabilities sector_probabilities(Hypothesis kind, const SqueezeSpec &spec, const TransmissionMatrix &t,
                                         const EstimatorOptions &options);

/// Click counts from this value on are always evaluated in extended precision.
inline constexpr std::size_t kForceExtendedClicks = 20;
Precision effective_precision(Precision requested, std::size_t clicks);

/// ln Pr(s) - ln Pr(C) for C = popcount(s). Throws InputError when `clicks`
/// differs from the popcount and NumericError when Pr(C) <= 0.
double conditional_log_prob(const HusimiPair &h, const ClickPattern &s, std::size_t clicks, double pr_clicks,
                            Precision precision = Precision::kDouble);

struct TestRow {
    std::size_t clicks = 0;
    std::size_t samples = 0;
    double delta = 0.0;                  // nats per sample
    double std_error = 0.0;              // combined
    double ratio = 0.5;                  // 1 / (1 + exp(samples * delta))
    double sample_std_error = 0.0;       // standard error of the mean
    double probability_std_error = 0.0;  // from the Pr(C) uncertainties
};

struct TestResult {
    std::string test;        // "bayes" or "hog"
    std::string hypotheses;  // e.g. "SQUA/SQUE"
    std::string probability_source;
    std::vector<TestRow> rows;
};

/// 1 / (1 + exp(samples * delta)) without overflow.
double ratio_from_delta(double delta, std::size_t samples);

/// Bayesian comparison per sector. Each entry of `sectors` holds patterns of
/// one click count. Row delta is the mean of
/// ln Pr_alt(s|C) - ln Pr_ref(s|C), so a negative value favors `ref`.
TestResult bayesian_test(std::span<const SampleSet> sectors, const CovarianceMatrix &ref,
                         const CovarianceMatrix &alt, const SectorProbabilities &ref_sectors,
                         const SectorProbabilities &alt_sectors, Precision precision = Precision::kDouble);

/// Heavy-output comparison under `ref`: row delta is
/// mean ln Pr_ref(s'|C) over the adversary minus the same over the
/// experimental samples, so a negative value means the experimental samples
/// are heavier. The sector terms cancel; both lists must have equal sizes.
TestResult hog_test(std::span<const SampleSet> experimental, std::span<const SampleSet> adversary,
                    const CovarianceMatrix &ref, Precision precision = Precision::kDouble);

/// One set per requested click count holding at most `per_sector` patterns:
/// the first ones in input order, or a uniformly random subset (kept in input
/// order) drawn from Stream::kSelection when `randomize` is set.
std::vector<SampleSet> split_by_clicks(const SampleSet &samples, std::span<const std::size_t> clicks,
                                       std::size_t per_sector, bool randomize = false, std::uint64_t seed = 0);

inline constexpr std::size_t kDefaultSectorSamples = 4000;

}  // namespace tgbs

#endif
