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

#include <cmath>

#include <gtest/gtest.h>

#include "tgbs/error.h"
#include "tgbs/instance.h"

namespace tgbs {
namespace {

TEST(SqueezeSpec, ExpandsToAlternatingPairs) {
    const SqueezeSpec s({0.5, 1.25});
    EXPECT_EQ(s.input_modes(), 4u);
    EXPECT_EQ(s.expanded(), (std::vector<double>{-0.5, 0.5, -1.25, 1.25}));
    EXPECT_THROW(SqueezeSpec({-0.1}), InputError);
    EXPECT_THROW(SqueezeSpec({NAN}), InputError);
}

TEST(Covariance, SingleModeSqueezedAndSquashedDiagonals) {
    const double r = 0.7;
    const SqueezeSpec s({r});
    const RealMatrix q = smss_covariance(s).matrix();
    EXPECT_NEAR(q(0, 0), std::exp(2 * r), 1e-14);
    EXPECT_NEAR(q(2, 2), std::exp(-2 * r), 1e-14);
    EXPECT_NEAR(q(1, 1), std::exp(-2 * r), 1e-14);
    EXPECT_NEAR(q(3, 3), std::exp(2 * r), 1e-14);

    const double n = std::sinh(r) * std::sinh(r);
    const RealMatrix a = squashed_covariance(s).matrix();
    EXPECT_NEAR(a(0, 0), 1 + 4 * n, 1e-14);
    EXPECT_NEAR(a(2, 2), 1.0, 1e-14);
    EXPECT_NEAR(a(1, 1), 1.0, 1e-14);
    EXPECT_NEAR(a(3, 3), 1 + 4 * n, 1e-14);
}

TEST(Covariance, TwoModeSqueezedMarginalsAreThermal) {
    const double r = 0.9;
    const SqueezeSpec s({r});
    const CovarianceMatrix sigma = build_hypothesis(Hypothesis::kSqueezed, s, TransmissionMatrix::identity(2));
    for (std::size_t j = 0; j < 2; ++j) {
        const std::vector<std::size_t> one = {j};
        const RealMatrix m = sigma.reduced(one).matrix();
        EXPECT_NEAR(m(0, 0), std::cosh(2 * r), 1e-13);
        EXPECT_NEAR(m(1, 1), std::cosh(2 * r), 1e-13);
        EXPECT_NEAR(m(0, 1), 0.0, 1e-13);
    }
    // Pure state.
    EXPECT_NEAR(sigma.matrix().determinant(), 1.0, 1e-10);
}

TEST(Covariance, SquashedIsClassicalAndSqueezedIsNot) {
    const DeskInstance inst = make_desk_instance(6, {0.8, 0.5, 1.1}, 0.7, 3);
    const CovarianceMatrix sque = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
    const CovarianceMatrix squa = build_hypothesis(Hypothesis::kSquashed, inst.spec, inst.t);
    EXPECT_GE(squa.min_eigenvalue_above_vacuum(), -1e-12);
    EXPECT_LT(sque.min_eigenvalue_above_vacuum(), -0.1);
    // Equal mean photon numbers; eta * K * sinh^2 for a scaled unitary.
    double expected = 0.0;
    for (double r : inst.spec.pair_squeezing()) {
        expected += 2 * 0.7 * std::sinh(r) * std::sinh(r);
    }
    EXPECT_NEAR(mean_photon_number(sque), expected, 1e-10);
    EXPECT_NEAR(mean_photon_number(squa), expected, 1e-10);
}

TEST(Covariance, LossChannelScalesThermalOccupation) {
    const std::vector<double> n = {0.4, 2.0};
    const double eta = 0.3;
    ComplexMatrix t = std::sqrt(eta) * ComplexMatrix::Identity(2, 2);
    const CovarianceMatrix out = apply_channel(TransmissionMatrix(t), CovarianceMatrix::thermal(n));
    EXPECT_NEAR(out.matrix()(0, 0), 1 + 2 * eta * n[0], 1e-14);
    EXPECT_NEAR(out.matrix()(3, 3), 1 + 2 * eta * n[1], 1e-14);
}

TEST(Covariance, BeamsplitterIsOrthogonal) {
    const RealMatrix b = pairwise_beamsplitter(6);
    EXPECT_TRUE((b * b.transpose()).isApprox(RealMatrix::Identity(12, 12), 1e-14));
    EXPECT_THROW(pairwise_beamsplitter(3), InputError);
}

TEST(Covariance, ValidationRejectsBadMatrices) {
    RealMatrix asym = RealMatrix::Identity(2, 2);
    asym(0, 1) = 0.5;
    EXPECT_THROW(CovarianceMatrix(asym).validate(), InputError);
    EXPECT_THROW(CovarianceMatrix(0.5 * RealMatrix::Identity(2, 2)).validate(), InputError);
    EXPECT_THROW(CovarianceMatrix(RealMatrix::Identity(3, 3)), InputError);
    EXPECT_NO_THROW(CovarianceMatrix::vacuum(3).validate());
}

TEST(Covariance, ReducedRejectsDuplicatesAndRange) {
    const CovarianceMatrix v = CovarianceMatrix::vacuum(3);
    const std::vector<std::size_t> dup = {1, 1};
    const std::vector<std::size_t> out = {3};
    EXPECT_THROW(v.reduced(dup), InputError);
    EXPECT_THROW(v.reduced(out), InputError);
}

TEST(Covariance, XpxpRoundTrip) {
    const DeskInstance inst = make_desk_instance(4, {0.6, 0.3}, 0.8, 9);
    const CovarianceMatrix s = build_hypothesis(Hypothesis::kSqueezed, inst.spec, inst.t);
    EXPECT_EQ(CovarianceMatrix::from_xpxp(s.to_xpxp()).matrix(), s.matrix());
}

TEST(Transmission, RejectsGainAndReportsValue) {
    ComplexMatrix t = ComplexMatrix::Identity(2, 2);
    t(0, 0) = 1.2;
    try {
        TransmissionMatrix bad(t);
        FAIL();
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("1.2"), std::string::npos) << e.what();
    }
}

TEST(Transmission, HaarInstanceIsScaledIsometry) {
    const DeskInstance inst = make_desk_instance(5, {0.5, 0.5, 0.5}, 0.6, 1);
    EXPECT_EQ(inst.t.output_modes(), 5u);
    EXPECT_EQ(inst.t.input_modes(), 6u);
    EXPECT_LE(inst.t.max_singular_value(), std::sqrt(0.6) + 1e-12);
}

TEST(Relation, ThermalMarginalsSatisfyClickPhotonRelation) {
    // Identical thermal modes: mean clicks M n / (1 + n), so 1/C = 1/N + 1/M exactly.
    const std::vector<double> n(4, 0.8);
    const CovarianceMatrix sigma = CovarianceMatrix::thermal(n);
    const double clicks = 4 * 0.8 / 1.8;
    EXPECT_NEAR(click_photon_relation_check(sigma, clicks), 0.0, 1e-14);
}

}  // namespace
}  // namespace tgbs
