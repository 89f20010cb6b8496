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

#ifndef TGBS_INSTANCE_H
#define TGBS_INSTANCE_H

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tgbs/gaussian.h"

namespace tgbs {

/// A synthetic experiment: squeezing plus a uniformly lossy Haar interferometer.
struct DeskInstance {
    SqueezeSpec spec;
    TransmissionMatrix t;
};

/// T = sqrt(eta) * (top-left M x K block of a Haar unitary of size max(M, K)),
/// K = 2 * pair_squeezing.size(), drawn from make_rng(seed, Stream::kInstance, index).
DeskInstance make_desk_instance(std::size_t output_modes, std::vector<double> pair_squeezing, double eta,
                                std::uint64_t seed, std::uint64_t index = 0);

/// Pair squeezing giving photon density nu = eta * sinh(r)^2 when M = K.
double squeezing_for_density(double nu, double eta);

}  // namespace tgbs

#endif
