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

#ifndef TGBS_TORONTONIAN_H
#define TGBS_TORONTONIAN_H

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tgbs/click_pattern.h"
#include "tgbs/gaussian.h"

namespace tgbs {

/// Arithmetic used inside the subset sums. kExtended carries a 106-bit
/// significand (double-double) through the factorizations as well as the
/// accumulation.
enum class Precision { kDouble, kExtended };

std::string_view to_string(Precision p);
Precision parse_precision(std::string_view s);

/// Largest Torontonian size (number of modes N of a 2N x 2N argument)
/// evaluated exactly by default: 2^30 subsets.
inline constexpr std::size_t kMaxTorontonianModes = 30;

/// Sigma = I/2 + R sigma R^dag / hbar and O = I - Sigma^{-1}, in the
/// (a_1..a_M, a_1^*..a_M^*) ordering.
struct HusimiPair {
    ComplexMatrix sigma;
    ComplexMatrix o;
    std::size_t modes = 0;
    /// ln sqrt(det Sigma), from a Cholesky factor of Sigma.
    double log_sqrt_det = 0.0;

    double sqrt_det() const;
};

/// `hbar` is the convention `sigma` is expressed in (vacuum = hbar/2 * I).
HusimiPair husimi_from_covariance(const CovarianceMatrix &sigma, double hbar = kHbar);
/// Builds the pair from an already formed Sigma.
HusimiPair husimi_from_sigma(ComplexMatrix sigma);

/// Keeps rows and columns {j, j + N : j in modes} of a 2N x 2N matrix.
ComplexMatrix keep_modes(const ComplexMatrix &a, std::span<const std::size_t> modes);

/// Tor(A) = sum over Z subset of [N] of (-1)^(N-|Z|) / sqrt(det(I - A)_(Z)),
/// where (.)_(Z) keeps rows/columns Z and Z + N. Subsets are visited in
/// Gray-code order with an updated Cholesky factor; the sum is accumulated
/// per fixed-size chunk in double-double and the chunks are reduced in index
/// order, so the result does not depend on the thread count.
///
/// Throws NumericError if some (I - A)_(Z) is not positive definite and
/// InputError if N > max_modes.
double torontonian(const ComplexMatrix &a, Precision precision = Precision::kDouble,
                   std::size_t max_modes = kMaxTorontonianModes);

/// Same sum with an independent factorization of every subset matrix.
double torontonian_naive(const ComplexMatrix &a);

/// Pr(s) = Tor(O_(s)) / sqrt(det Sigma). Values within 1e-9 outside [0, 1]
/// are clamped with a warning; larger excursions throw NumericError.
double click_probability(const HusimiPair &h, const ClickPattern &s, Precision precision = Precision::kDouble);

/// ln Pr(s), unclamped. Throws NumericError naming the pattern when the
/// probability is not positive.
double log_click_probability(const HusimiPair &h, const ClickPattern &s, Precision precision = Precision::kDouble);

/// Probability that every listed mode clicks (others unconstrained).
double marginal_probability(const HusimiPair &h, std::span<const std::size_t> modes,
                            Precision precision = Precision::kDouble);
double marginal_probability(const CovarianceMatrix &sigma, std::span<const std::size_t> modes,
                            Precision precision = Precision::kDouble);

struct ClickMoments {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean and standard deviation of the total click count from one- and
/// two-mode marginals.
ClickMoments click_count_mean_std(const CovarianceMatrix &sigma);

/// Every pattern probability, indexed by bit mask (bit j = mode j).
/// Requires M <= 20.
std::vector<double> probability_table(const HusimiPair &h, Precision precision = Precision::kDouble);

/// Sums a probability table into Pr(C), C = 0..M.
std::vector<double> sector_sums(std::span<const double> table, std::size_t modes);

}  // namespace tgbs

#endif
