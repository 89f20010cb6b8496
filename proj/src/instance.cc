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

#include "tgbs/instance.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgbs/error.h"
#include "tgbs/random.h"

namespace tgbs {

DeskInstance make_desk_instance(std::size_t output_modes, std::vector<double> pair_squeezing, double eta,
                                std::uint64_t seed, std::uint64_t index) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw InputError("transmission eta must lie in (0, 1], got " + std::to_string(eta));
    }
    DeskInstance out;
    out.spec = SqueezeSpec(std::move(pair_squeezing));
    const std::size_t k = out.spec.input_modes();
    if (output_modes == 0 || k == 0) {
        throw InputError("instance needs at least one output mode and one squeezer");
    }
    Rng rng = make_rng(seed, Stream::kInstance, index);
    const Eigen::MatrixXcd u = haar_unitary(std::max(output_modes, k), rng);
    ComplexMatrix t = std::sqrt(eta) * u.topLeftCorner(static_cast<Eigen::Index>(output_modes),
                                                       static_cast<Eigen::Index>(k));
    out.t = TransmissionMatrix(std::move(t));
    return out;
}

double squeezing_for_density(double nu, double eta) {
    if (!(nu >= 0.0) || !(eta > 0.0)) {
        throw InputError("photon density must be nonnegative and eta positive");
    }
    return std::asinh(std::sqrt(nu / eta));
}

}  // namespace tgbs
