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

#ifndef TGBS_SAMPLER_H
#define TGBS_SAMPLER_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tgbs/click_pattern.h"
#include "tgbs/gaussian.h"
#include "tgbs/torontonian.h"

namespace tgbs {

inline constexpr std::size_t kDefaultRejectionCap = 10000000;
/// Draws per independently seeded block of the squashed sampler.
inline constexpr std::size_t kSamplerBlockSize = 4096;

struct SamplerConfig {
    Hypothesis kind = Hypothesis::kSquashed;
    SqueezeSpec spec;
    TransmissionMatrix t;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    /// Keep only patterns with this many clicks (rejection sampling).
    std::optional<std::size_t> condition_clicks;
    /// Maximum number of raw draws spent on a conditioned request.
    std::size_t rejection_cap = kDefaultRejectionCap;

    /// Throws InputError for a squeezed request, a zero cap, a click count
    /// above M or mismatched dimensions.
    void validate() const;
};

/// Coherent-mixture sampler for squashed inputs. Block b of kSamplerBlockSize
/// draws uses make_rng(seed, Stream::kSquashedSampler, b); output is in block
/// order. A conditioned request that hits the cap returns what it has and is
/// marked incomplete.
SampleSet sample_squashed(const SamplerConfig &config);

/// Brute-force sampler over the full 2^M table (M <= kMaxModes).
class ExactSampler {
   public:
    static constexpr std::size_t kMaxModes = 12;

    explicit ExactSampler(const CovarianceMatrix &sigma, Precision precision = Precision::kDouble);

    std::size_t modes() const { return modes_; }
    /// Normalized Pr(s) indexed by bit mask.
    const std::vector<double> &table() const { return table_; }
    /// Pr(C) from the normalized table.
    const std::vector<double> &sectors() const { return sectors_; }
    /// Sum of the raw table before normalization.
    double raw_total() const { return raw_total_; }

    /// Inverse-CDF draws from make_rng(seed, Stream::kExactSampler, 0).
    SampleSet sample(std::size_t count, std::uint64_t seed) const;
    /// Draws from Pr(s | C) using make_rng(seed, Stream::kExactSampler, 1 + C).
    SampleSet sample_sector(std::size_t clicks, std::size_t count, std::uint64_t seed) const;

   private:
    std::vector<double> table_;
    std::vector<double> sectors_;
    std::size_t modes_ = 0;
    double raw_total_ = 0.0;
};

SampleSet exact_sample(const CovarianceMatrix &sigma, std::size_t count, std::uint64_t seed);

/// Patterns with exactly `clicks` ones, in their original order. An empty
/// result from a nonempty input is reported through warn().
SampleSet condition_on_clicks(const SampleSet &samples, std::size_t clicks);

}  // namespace tgbs

#endif
