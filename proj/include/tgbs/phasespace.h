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

#ifndef TGBS_PHASESPACE_H
#define TGBS_PHASESPACE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tgbs/gaussian.h"
#include "tgbs/random.h"
#include "tgbs/torontonian.h"

namespace tgbs {

/// Positive-P amplitudes, one column per draw.
struct AmplitudeBatch {
    Hypothesis kind = Hypothesis::kSqueezed;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    ComplexMatrix alpha;  // modes x draws
    ComplexMatrix beta;

    std::size_t size() const { return static_cast<std::size_t>(alpha.cols()); }
    std::size_t modes() const { return static_cast<std::size_t>(alpha.rows()); }
};

/// Per-mode coefficients with alpha_j = u a_j + i v b_j and
/// beta_j = u a_j - i v b_j for independent standard normals u, v.
/// a_j = sqrt((n + m) / 2), b_j = sqrt((n - m) / 2) on the principal branch,
/// n = sinh^2 r. The coherence m is +-sinh(2r)/2 (squeezed) or +-n (squashed),
/// with the sign following the alternating squeezing expansion so that the
/// amplitudes reproduce the covariance of the same input modes.
struct AmplitudeCoefficients {
    std::vector<std::complex<double>> a;
    std::vector<std::complex<double>> b;
    std::vector<double> mean_photons;  // n_j
    std::vector<double> coherence;     // m_j
};

AmplitudeCoefficients amplitude_coefficients(const SqueezeSpec &spec, Hypothesis kind);

/// Draws `count` amplitude vectors from make_rng(seed, Stream::kAmplitudes, stream_index).
AmplitudeBatch sample_amplitudes(const SqueezeSpec &spec, Hypothesis kind, std::size_t count, std::uint64_t seed,
                                 std::uint64_t stream_index = 0);
/// Same, drawing (u_j, v_j) pairs in mode order from `rng`.
AmplitudeBatch sample_amplitudes(const SqueezeSpec &spec, Hypothesis kind, std::size_t count, Rng &rng);

/// T' = T B with B the pairwise beamsplitter network on the K input modes.
ComplexMatrix composed_transmission(const TransmissionMatrix &t);

/// alpha_bar = T' alpha, beta_bar = conj(T') beta.
AmplitudeBatch transform_amplitudes(const AmplitudeBatch &batch, const ComplexMatrix &t_prime);
AmplitudeBatch transform_amplitudes(const AmplitudeBatch &batch, const TransmissionMatrix &t, const RealMatrix &b);

struct GroupedClickDistribution {
    Hypothesis kind = Hypothesis::kSqueezed;
    Precision precision = Precision::kDouble;
    std::size_t samples = 0;
    std::size_t groups = 0;
    std::vector<double> probability;  // Pr(C), C = 0..M, not clamped
    std::vector<double> uncertainty;  // standard deviation over group means
    double max_imaginary = 0.0;       // largest |Im| of the estimated means

    std::size_t modes() const { return probability.empty() ? 0 : probability.size() - 1; }
    /// uncertainty[c] / sqrt(groups).
    double std_error_of_mean(std::size_t c) const;
    double total() const;
    /// sqrt(sum_C uncertainty[C]^2).
    double total_uncertainty() const;
};

/// Estimates Pr(C) from an already transformed batch, split into `groups`
/// contiguous groups. Throws InputError unless groups >= 2 divides the size.
GroupedClickDistribution grouped_click_probabilities(const AmplitudeBatch &transformed, std::size_t groups,
                                                     Precision precision = Precision::kDouble);

/// End-to-end estimator. Group g draws its amplitudes from stream index g,
/// so the result depends only on (seed, samples, groups).
GroupedClickDistribution estimate_grouped_clicks(Hypothesis kind, const SqueezeSpec &spec,
                                                 const TransmissionMatrix &t, std::size_t samples,
                                                 std::size_t groups, std::uint64_t seed,
                                                 Precision precision = Precision::kDouble);

inline constexpr std::size_t kDefaultPhaseSpaceSamples = 1000000;
inline constexpr std::size_t kDefaultPhaseSpaceGroups = 100;

struct ClickSummary {
    double mean = 0.0;
    double mean_uncertainty = 0.0;
    double stddev = 0.0;
    double stddev_uncertainty = 0.0;
};

/// Mean and standard deviation of C with first-order propagated uncertainties.
ClickSummary summarize(const GroupedClickDistribution &dist);
/// Same for an exact distribution (zero uncertainties).
ClickSummary summarize(const std::vector<double> &probability);

}  // namespace tgbs

#endif
