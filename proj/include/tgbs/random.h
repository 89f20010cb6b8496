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

#ifndef TGBS_RANDOM_H
#define TGBS_RANDOM_H

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tgbs {

using Rng = std::mt19937_64;

/// Named substreams. Every random draw in the library comes from
/// make_rng(master_seed, stream, index), so results depend only on the seed
/// and the (stream, index) pair, never on scheduling.
enum class Stream : std::uint64_t {
    kAmplitudes = 1,
    kSquashedSampler = 2,
    kExactSampler = 3,
    kModeSubsets = 4,
    kBootstrap = 5,
    kInstance = 6,
    kSelection = 7,
};

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);
Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0);

/// n x n unitary drawn from the Haar measure (QR of a complex Ginibre matrix
/// with the phases of R's diagonal divided out).
Eigen::MatrixXcd haar_unitary(std::size_t n, Rng &rng);

}  // namespace tgbs

#endif
