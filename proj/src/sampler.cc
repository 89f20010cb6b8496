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

#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>
#include <random>
#include <string>

#include "tgbs/double_double.h"
#include "tgbs/error.h"
#include "tgbs/log.h"
#include "tgbs/phasespace.h"
#include "tgbs/random.h"

namespace tgbs {

namespace {

// Conditioned requests run this many blocks per round before checking the
// accepted count, independently of the thread count.
constexpr std::size_t kBlocksPerRound = 16;

std::vector<ClickPattern> squashed_block(const SqueezeSpec &spec, const ComplexMatrix &t_prime, std::size_t count,
                                         std::uint64_t seed, std::uint64_t block) {
    Rng rng = make_rng(seed, Stream::kSquashedSampler, block);
    const AmplitudeBatch raw = sample_amplitudes(spec, Hypothesis::kSquashed, count, rng);
    const ComplexMatrix out = t_prime * raw.alpha;
    const auto m = static_cast<std::size_t>(out.rows());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ClickPattern> patterns;
    patterns.reserve(count);
    for (Eigen::Index s = 0; s < out.cols(); ++s) {
        ClickPattern p(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double click = -std::expm1(-std::norm(out(static_cast<Eigen::Index>(j), s)));
            if (unif(rng) < click) {
                p.set(j);
            }
        }
        patterns.push_back(std::move(p));
    }
    return patterns;
}

std::vector<std::vector<ClickPattern>> run_blocks(const SamplerConfig &c, const ComplexMatrix &t_prime,
                                                  std::size_t first, std::size_t count, std::size_t last_size) {
    std::vector<std::vector<ClickPattern>> blocks(count);
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        const auto b = static_cast<std::size_t>(i);
        const std::size_t n = b + 1 == count ? last_size : kSamplerBlockSize;
        blocks[b] = squashed_block(c.spec, t_prime, n, c.seed, first + b);
    }
    return blocks;
}

std::size_t draw_index(const std::vector<double> &cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

void SamplerConfig::validate() const {
    if (kind != Hypothesis::kSquashed) {
        throw InputError("no polynomial-time sampler for squeezed inputs; use the exact sampler");
    }
    if (rejection_cap < 1) {
        throw InputError("rejection cap must be at least 1");
    }
    if (t.input_modes() != spec.input_modes()) {
        throw InputError("transmission matrix has " + std::to_string(t.input_modes()) +
                         " input modes but the squeezing list expands to " + std::to_string(spec.input_modes()));
    }
    if (condition_clicks && *condition_clicks > t.output_modes()) {
        throw InputError("conditioning click count " + std::to_string(*condition_clicks) + " exceeds M = " +
                         std::to_string(t.output_modes()));
    }
}

SampleSet sample_squashed(const SamplerConfig &config) {
    config.validate();
    const ComplexMatrix t_prime = composed_transmission(config.t);
    SampleSet out(config.t.output_modes(), SampleSource::kSquashedSampler);
    if (config.samples == 0) {
        return out;
    }
    if (!config.condition_clicks) {
        const std::size_t nblocks = (config.samples + kSamplerBlockSize - 1) / kSamplerBlockSize;
        const std::size_t last = config.samples - (nblocks - 1) * kSamplerBlockSize;
        for (auto &block : run_blocks(config, t_prime, 0, nblocks, last)) {
            for (auto &p : block) {
                out.push_back(std::move(p));
            }
        }
        return out;
    }
    const std::size_t want = *config.condition_clicks;
    std::size_t attempts = 0;
    std::size_t next_block = 0;
    while (out.size() < config.samples) {
        const std::size_t room = (config.rejection_cap - attempts + kSamplerBlockSize - 1) / kSamplerBlockSize;
        const std::size_t count = std::min(kBlocksPerRound, room);
        if (count == 0) {
            break;
        }
        for (auto &block : run_blocks(config, t_prime, next_block, count, kSamplerBlockSize)) {
            for (auto &p : block) {
                if (out.size() < config.samples && p.click_count() == want) {
                    out.push_back(std::move(p));
                }
            }
        }
        next_block += count;
        attempts += count * kSamplerBlockSize;
        if (attempts >= config.rejection_cap) {
            break;
        }
    }
    if (out.size() < config.samples) {
        out.mark_incomplete();
        warn("rejection cap of " + std::to_string(config.rejection_cap) + " draws reached with " +
             std::to_string(out.size()) + " of " + std::to_string(config.samples) + " samples at C = " +
             std::to_string(want));
    }
    return out;
}

ExactSampler::ExactSampler(const CovarianceMatrix &sigma, Precision precision) : modes_(sigma.modes()) {
    if (modes_ > kMaxModes) {
        throw InputError("exact sampling needs M <= " + std::to_string(kMaxModes) + ", got " + std::to_string(modes_));
    }
    table_ = probability_table(husimi_from_covariance(sigma), precision);
    const std::vector<double> raw_sectors = sector_sums(table_, modes_);
    DoubleDouble total(0.0);
    for (double s : raw_sectors) {
        total += s;
    }
    raw_total_ = static_cast<double>(total);
    if (!(raw_total_ > 0.0)) {
        throw NumericError("probability table does not have a positive total");
    }
    for (double &p : table_) {
        p = std::max(p, 0.0) / raw_total_;
    }
    sectors_ = sector_sums(table_, modes_);
}

SampleSet ExactSampler::sample(std::size_t count, std::uint64_t seed) const {
    std::vector<double> cdf(table_.size());
    std::partial_sum(table_.begin(), table_.end(), cdf.begin());
    Rng rng = make_rng(seed, Stream::kExactSampler, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SampleSet out(modes_, SampleSource::kExactSampler);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(ClickPattern::from_mask(draw_index(cdf, unif(rng)), modes_));
    }
    return out;
}

SampleSet ExactSampler::sample_sector(std::size_t clicks, std::size_t count, std::uint64_t seed) const {
    if (clicks > modes_) {
        throw InputError("click count " + std::to_string(clicks) + " exceeds M = " + std::to_string(modes_));
    }
    std::vector<std::uint64_t> masks;
    std::vector<double> cdf;
    double run = 0.0;
    for (std::uint64_t mask = 0; mask < table_.size(); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) == clicks) {
            run += table_[mask];
            masks.push_back(mask);
            cdf.push_back(run);
        }
    }
    if (!(run > 0.0)) {
        throw NumericError("sector C = " + std::to_string(clicks) + " has zero probability");
    }
    Rng rng = make_rng(seed, Stream::kExactSampler, 1 + clicks);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SampleSet out(modes_, SampleSource::kExactSampler);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(ClickPattern::from_mask(masks[draw_index(cdf, unif(rng))], modes_));
    }
    return out;
}

SampleSet exact_sample(const CovarianceMatrix &sigma, std::size_t count, std::uint64_t seed) {
    return ExactSampler(sigma).sample(count, seed);
}

SampleSet condition_on_clicks(const SampleSet &samples, std::size_t clicks) {
    SampleSet out(samples.modes(), samples.source());
    for (const ClickPattern &p : samples.patterns()) {
        if (p.click_count() == clicks) {
            out.push_back(p);
        }
    }
    if (out.empty() && !samples.empty()) {
        warn("no samples with " + std::to_string(clicks) + " clicks");
    }
    return out;
}

}  // namespace tgbs
