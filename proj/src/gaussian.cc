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

#include "tgbs/gaussian.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tgbs/error.h"

namespace tgbs {

std::string_view to_string(Hypothesis h) {
    return h == Hypothesis::kSqueezed ? "SQUE" : "SQUA";
}

Hypothesis parse_hypothesis(std::string_view s) {
    if (s == "SQUE" || s == "sque" || s == "squeezed") {
        return Hypothesis::kSqueezed;
    }
    if (s == "SQUA" || s == "squa" || s == "squashed") {
        return Hypothesis::kSquashed;
    }
    throw InputError("unknown hypothesis '" + std::string(s) + "' (expected sque or squa)");
}

SqueezeSpec::SqueezeSpec(std::vector<double> pair_squeezing) : r_(std::move(pair_squeezing)) {
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (!std::isfinite(r_[i]) || r_[i] < 0.0) {
            std::ostringstream msg;
            msg << "squeezing parameter " << i << " is " << r_[i] << "; must be finite and nonnegative";
            throw InputError(msg.str());
        }
    }
}

std::vector<double> SqueezeSpec::expanded() const {
    std::vector<double> out;
    out.reserve(2 * r_.size());
    for (double r : r_) {
        out.push_back(-r);
        out.push_back(r);
    }
    return out;
}

CovarianceMatrix::CovarianceMatrix(RealMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << "covariance must be square with even dimension, got " << m_.rows() << "x" << m_.cols();
        throw InputError(msg.str());
    }
    if (!m_.allFinite()) {
        throw InputError("covariance has non-finite entries");
    }
    modes_ = static_cast<std::size_t>(m_.rows() / 2);
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t modes) {
    return CovarianceMatrix(RealMatrix::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix CovarianceMatrix::thermal(std::span<const double> mean_photons) {
    const auto m = static_cast<Eigen::Index>(mean_photons.size());
    RealMatrix s = RealMatrix::Zero(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        s(i, i) = s(m + i, m + i) = 1.0 + 2.0 * mean_photons[i];
    }
    return CovarianceMatrix(std::move(s));
}

CovarianceMatrix CovarianceMatrix::reduced(std::span<const std::size_t> modes) const {
    std::vector<bool> seen(modes_, false);
    for (std::size_t j : modes) {
        if (j >= modes_) {
            throw InputError("mode index " + std::to_string(j) + " out of range for " + std::to_string(modes_) +
                             " modes");
        }
        if (seen[j]) {
            throw InputError("duplicate mode index " + std::to_string(j));
        }
        seen[j] = true;
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    const auto big_m = static_cast<Eigen::Index>(modes_);
    std::vector<Eigen::Index> keep;
    keep.reserve(2 * modes.size());
    for (std::size_t j : modes) {
        keep.push_back(static_cast<Eigen::Index>(j));
    }
    for (std::size_t j : modes) {
        keep.push_back(static_cast<Eigen::Index>(j) + big_m);
    }
    RealMatrix out(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < 2 * n; ++a) {
        for (Eigen::Index b = 0; b < 2 * n; ++b) {
            out(a, b) = m_(keep[a], keep[b]);
        }
    }
    return CovarianceMatrix(std::move(out));
}

void CovarianceMatrix::validate(std::string_view what) const {
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << what << ": not symmetric (max asymmetry " << asym << ")";
        throw InputError(msg.str());
    }
    Eigen::LLT<RealMatrix> llt(m_);
    if (llt.info() != Eigen::Success) {
        throw InputError(std::string(what) + ": not positive definite");
    }
    const auto m = static_cast<Eigen::Index>(modes_);
    ComplexMatrix h = m_.cast<std::complex<double>>();
    const std::complex<double> i1(0.0, 1.0);
    for (Eigen::Index k = 0; k < m; ++k) {
        h(k, m + k) += i1;
        h(m + k, k) -= i1;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10) {
        std::ostringstream msg;
        msg << what << ": violates the uncertainty bound (min eigenvalue of sigma + i*Omega is " << min_eig << ")";
        throw InputError(msg.str());
    }
}

double CovarianceMatrix::min_eigenvalue_above_vacuum() const {
    RealMatrix d = m_ - RealMatrix::Identity(m_.rows(), m_.cols());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(d, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

RealMatrix CovarianceMatrix::to_xpxp() const {
    const auto m = static_cast<Eigen::Index>(modes_);
    std::vector<Eigen::Index> from(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        from[2 * i] = i;
        from[2 * i + 1] = m + i;
    }
    RealMatrix out(2 * m, 2 * m);
    for (Eigen::Index a = 0; a < 2 * m; ++a) {
        for (Eigen::Index b = 0; b < 2 * m; ++b) {
            out(a, b) = m_(from[a], from[b]);
        }
    }
    return out;
}

CovarianceMatrix CovarianceMatrix::from_xpxp(const RealMatrix &xpxp) {
    if (xpxp.rows() != xpxp.cols() || xpxp.rows() % 2 != 0) {
        throw InputError("xpxp covariance must be square with even dimension");
    }
    const Eigen::Index m = xpxp.rows() / 2;
    std::vector<Eigen::Index> from(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        from[i] = 2 * i;
        from[m + i] = 2 * i + 1;
    }
    RealMatrix out(2 * m, 2 * m);
    for (Eigen::Index a = 0; a < 2 * m; ++a) {
        for (Eigen::Index b = 0; b < 2 * m; ++b) {
            out(a, b) = xpxp(from[a], from[b]);
        }
    }
    return CovarianceMatrix(std::move(out));
}

TransmissionMatrix::TransmissionMatrix(ComplexMatrix t) : t_(std::move(t)) {
    if (t_.rows() == 0 || t_.cols() == 0) {
        throw InputError("transmission matrix is empty");
    }
    if (!t_.allFinite()) {
        throw InputError("transmission matrix has non-finite entries");
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(t_);
    max_sv_ = svd.singularValues()(0);
    if (max_sv_ > 1.0 + kPhysicalTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "transmission matrix is not physical: largest singular value " << max_sv_ << " exceeds 1";
        throw InputError(msg.str());
    }
}

TransmissionMatrix TransmissionMatrix::identity(std::size_t modes) {
    return TransmissionMatrix(ComplexMatrix::Identity(modes, modes));
}

RealMatrix TransmissionMatrix::real_view() const {
    const Eigen::Index m = t_.rows();
    const Eigen::Index k = t_.cols();
    RealMatrix v(2 * m, 2 * k);
    v.topLeftCorner(m, k) = t_.real();
    v.topRightCorner(m, k) = -t_.imag();
    v.bottomLeftCorner(m, k) = t_.imag();
    v.bottomRightCorner(m, k) = t_.real();
    return v;
}

CovarianceMatrix smss_covariance(const SqueezeSpec &spec) {
    const std::vector<double> r = spec.expanded();
    const auto k = static_cast<Eigen::Index>(r.size());
    RealMatrix s = RealMatrix::Zero(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        s(i, i) = std::exp(-2.0 * r[i]);
        s(k + i, k + i) = std::exp(2.0 * r[i]);
    }
    return CovarianceMatrix(std::move(s));
}

CovarianceMatrix squashed_covariance(const SqueezeSpec &spec) {
    const std::vector<double> r = spec.expanded();
    const auto k = static_cast<Eigen::Index>(r.size());
    RealMatrix s = RealMatrix::Zero(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double sh = std::sinh(r[i]);
        const double excess = 1.0 + 4.0 * sh * sh;
        // The quadrature that would be squeezed sits at vacuum level.
        if (r[i] < 0.0) {
            s(i, i) = excess;
            s(k + i, k + i) = 1.0;
        } else {
            s(i, i) = 1.0;
            s(k + i, k + i) = excess;
        }
    }
    return CovarianceMatrix(std::move(s));
}

RealMatrix pairwise_beamsplitter_modes(std::size_t input_modes) {
    if (input_modes % 2 != 0) {
        throw InputError("pairwise beamsplitter needs an even number of modes, got " + std::to_string(input_modes));
    }
    const auto k = static_cast<Eigen::Index>(input_modes);
    const double h = 1.0 / std::sqrt(2.0);
    RealMatrix b = RealMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; i += 2) {
        b(i, i) = h;
        b(i, i + 1) = -h;
        b(i + 1, i) = h;
        b(i + 1, i + 1) = h;
    }
    return b;
}

RealMatrix pairwise_beamsplitter(std::size_t input_modes) {
    const RealMatrix b = pairwise_beamsplitter_modes(input_modes);
    const auto k = static_cast<Eigen::Index>(input_modes);
    RealMatrix out = RealMatrix::Zero(2 * k, 2 * k);
    out.topLeftCorner(k, k) = b;
    out.bottomRightCorner(k, k) = b;
    return out;
}

CovarianceMatrix apply_channel(const TransmissionMatrix &t, const CovarianceMatrix &in) {
    if (t.input_modes() != in.modes()) {
        std::ostringstream msg;
        msg << "transmission matrix has " << t.input_modes() << " input columns but the state has " << in.modes()
            << " modes";
        throw InputError(msg.str());
    }
    const RealMatrix v = t.real_view();
    const Eigen::Index n = v.rows();
    RealMatrix out = RealMatrix::Identity(n, n) - v * v.transpose() + v * in.matrix() * v.transpose();
    RealMatrix sym = 0.5 * (out + out.transpose());
    return CovarianceMatrix(std::move(sym));
}

CovarianceMatrix build_hypothesis(Hypothesis kind, const SqueezeSpec &spec, const TransmissionMatrix &t) {
    const CovarianceMatrix single =
        kind == Hypothesis::kSqueezed ? smss_covariance(spec) : squashed_covariance(spec);
    const RealMatrix b = pairwise_beamsplitter(spec.input_modes());
    const CovarianceMatrix paired(b * single.matrix() * b.transpose());
    CovarianceMatrix out = apply_channel(t, paired);
    out.validate(std::string(to_string(kind)) + " covariance");
    return out;
}

double mean_photon_number(const CovarianceMatrix &sigma) {
    const RealMatrix &s = sigma.matrix();
    const auto m = static_cast<Eigen::Index>(sigma.modes());
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        total += (s(i, i) + s(m + i, m + i)) / (2.0 * kHbar) - 0.5;
    }
    return total;
}

double photon_density(const CovarianceMatrix &sigma) {
    if (sigma.modes() == 0) {
        return 0.0;
    }
    return mean_photon_number(sigma) / static_cast<double>(sigma.modes());
}

double click_photon_relation_check(const CovarianceMatrix &sigma, double mean_clicks) {
    if (!(mean_clicks > 0.0)) {
        throw InputError("click/photon relation needs a positive mean click number");
    }
    const double photons = mean_photon_number(sigma);
    const double predicted = 1.0 / photons + 1.0 / static_cast<double>(sigma.modes());
    return std::abs(1.0 / mean_clicks - predicted) * mean_clicks;
}

}  // namespace tgbs
