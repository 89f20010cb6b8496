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

#ifndef TGBS_GAUSSIAN_H
#define TGBS_GAUSSIAN_H

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tgbs {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Internal units: hbar = 2, so the vacuum covariance is the identity.
inline constexpr double kHbar = 2.0;

/// The two input-state hypotheses compared throughout.
enum class Hypothesis {
    kSqueezed,  // SQUE: two-mode squeezed vacua, the ground truth
    kSquashed,  // SQUA: two-mode squashed (classical) states
};

std::string_view to_string(Hypothesis h);
Hypothesis parse_hypothesis(std::string_view s);

/// Squeezing of the two-mode squeezers feeding the interferometer: one r per
/// pair of input modes. The K = 2 * pairs single-mode parameters alternate
/// {-r1, r1, -r2, r2, ...}.
class SqueezeSpec {
   public:
    SqueezeSpec() = default;
    explicit SqueezeSpec(std::vector<double> pair_squeezing);

    const std::vector<double> &pair_squeezing() const { return r_; }
    std::size_t pairs() const { return r_.size(); }
    std::size_t input_modes() const { return 2 * r_.size(); }
    /// The alternating single-mode list of length K.
    std::vector<double> expanded() const;

   private:
    std::vector<double> r_;
};

/// Real symmetric 2M x 2M quadrature covariance in xxpp ordering
/// (x_1..x_M, p_1..p_M), hbar = 2.
class CovarianceMatrix {
   public:
    CovarianceMatrix() = default;
    explicit CovarianceMatrix(RealMatrix entries);

    static CovarianceMatrix vacuum(std::size_t modes);
    static CovarianceMatrix thermal(std::span<const double> mean_photons);

    std::size_t modes() const { return modes_; }
    const RealMatrix &matrix() const { return m_; }

    /// Covariance of the listed modes only (keeps their x and p rows/columns).
    CovarianceMatrix reduced(std::span<const std::size_t> modes) const;

    /// Symmetry, positive definiteness and the uncertainty bound
    /// sigma + i Omega >= 0. Throws InputError naming the failed check.
    void validate(std::string_view what = "covariance") const;

    /// Minimum eigenvalue of sigma - I; nonnegative for classical states.
    double min_eigenvalue_above_vacuum() const;

    RealMatrix to_xpxp() const;
    static CovarianceMatrix from_xpxp(const RealMatrix &xpxp);

   private:
    RealMatrix m_;
    std::size_t modes_ = 0;
};

/// M x K complex transfer matrix of a lossy interferometer.
class TransmissionMatrix {
   public:
    /// Singular values may exceed one by at most this much.
    static constexpr double kPhysicalTolerance = 1e-10;

    TransmissionMatrix() = default;
    /// Throws InputError if any singular value exceeds 1 + kPhysicalTolerance.
    explicit TransmissionMatrix(ComplexMatrix t);

    static TransmissionMatrix identity(std::size_t modes);

    const ComplexMatrix &matrix() const { return t_; }
    std::size_t output_modes() const { return static_cast<std::size_t>(t_.rows()); }
    std::size_t input_modes() const { return static_cast<std::size_t>(t_.cols()); }
    double max_singular_value() const { return max_sv_; }

    /// The 2M x 2K real symplectic-form view [[Re T, -Im T], [Im T, Re T]].
    RealMatrix real_view() const;

   private:
    ComplexMatrix t_;
    double max_sv_ = 0.0;
};

CovarianceMatrix smss_covariance(const SqueezeSpec &spec);
CovarianceMatrix squashed_covariance(const SqueezeSpec &spec);

/// 2K x 2K orthogonal matrix applying H = [[1, -1], [1, 1]] / sqrt(2) to every
/// adjacent mode pair, identically on the x and p blocks.
RealMatrix pairwise_beamsplitter(std::size_t input_modes);

/// The same beamsplitter network acting on K mode amplitudes.
RealMatrix pairwise_beamsplitter_modes(std::size_t input_modes);

/// sigma_out = (I - V V^T) + V sigma_in V^T.
CovarianceMatrix apply_channel(const TransmissionMatrix &t, const CovarianceMatrix &in);

/// Single-mode covariances -> pairwise beamsplitters -> lossy interferometer.
CovarianceMatrix build_hypothesis(Hypothesis kind, const SqueezeSpec &spec, const TransmissionMatrix &t);

double mean_photon_number(const CovarianceMatrix &sigma);
double photon_density(const CovarianceMatrix &sigma);

/// |1/C - (1/N + 1/M)| * C for the mean click number C of sigma.
double click_photon_relation_check(const CovarianceMatrix &sigma, double mean_clicks);

}  // namespace tgbs

#endif
