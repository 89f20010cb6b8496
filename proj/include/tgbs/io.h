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

#ifndef TGBS_IO_H
#define TGBS_IO_H

#include <filesystem>
#include <string>
#include <vector>

#include "tgbs/click_pattern.h"
#include "tgbs/gaussian.h"

namespace tgbs {

/// Text formats:
///   squeezing    one pair squeezing parameter r per line
///   transmission header "M K", then M lines of K whitespace-separated "re im" pairs
///   samples      one M-character 0/1 string per line
///   manifest     "key = value" lines: name, squeezing, transmission, samples
///                (repeatable), note (repeatable); '#' starts a comment.
/// Relative paths in a manifest are resolved against the manifest's directory.
/// Numbers are written with 17 significant digits, so a write/read cycle is exact.

struct ExperimentBundle {
    std::string name;
    std::filesystem::path manifest;
    SqueezeSpec spec;
    TransmissionMatrix t;
    std::vector<std::filesystem::path> sample_paths;
    std::vector<SampleSet> samples;
    std::vector<std::string> notes;

    std::size_t output_modes() const { return t.output_modes(); }
    std::size_t input_modes() const { return t.input_modes(); }
};

/// Throws InputError for a missing file, malformed line, dimension mismatch,
/// non-finite entry or unphysical transmission matrix.
ExperimentBundle load_bundle(const std::filesystem::path &manifest);

/// Writes `<dir>/<name>.manifest` plus the referenced files and returns the
/// manifest path.
std::filesystem::path write_bundle(const std::filesystem::path &dir, const std::string &name,
                                   const SqueezeSpec &spec, const TransmissionMatrix &t,
                                   const std::vector<SampleSet> &samples = {});

SqueezeSpec read_squeezing(const std::filesystem::path &path);
void write_squeezing(const std::filesystem::path &path, const SqueezeSpec &spec);

TransmissionMatrix read_transmission(const std::filesystem::path &path);
void write_transmission(const std::filesystem::path &path, const TransmissionMatrix &t);

/// `modes` = 0 takes the length of the first line.
SampleSet read_samples(const std::filesystem::path &path, std::size_t modes = 0,
                       SampleSource source = SampleSource::kExperimental);
void write_samples(const std::filesystem::path &path, const SampleSet &samples);

/// Shortest round-tripping text is not required; this always uses 17 digits.
std::string format_double(double x);

}  // namespace tgbs

#endif
