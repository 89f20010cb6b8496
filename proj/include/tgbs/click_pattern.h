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

#ifndef TGBS_CLICK_PATTERN_H
#define TGBS_CLICK_PATTERN_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tgbs {

/// One threshold-detection outcome: bit j is set when detector j clicked.
class ClickPattern {
   public:
    ClickPattern() = default;
    /// All-zero pattern over `modes` detectors.
    explicit ClickPattern(std::size_t modes);

    /// Parses a string of '0'/'1' characters. Throws InputError otherwise.
    static ClickPattern from_string(std::string_view bits);
    /// Bit j of `mask` becomes mode j. Requires modes <= 64.
    static ClickPattern from_mask(std::uint64_t mask, std::size_t modes);

    std::size_t size() const { return size_; }
    bool test(std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1U; }
    void set(std::size_t j, bool value = true);

    std::size_t click_count() const;
    std::vector<std::size_t> clicked_modes() const;
    /// True when every listed mode clicked.
    bool all_clicked(std::span<const std::size_t> modes) const;
    /// Low 64 modes as a bit mask.
    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    std::string to_string() const;

    friend bool operator==(const ClickPattern &a, const ClickPattern &b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    friend bool operator<(const ClickPattern &a, const ClickPattern &b) {
        return a.size_ != b.size_ ? a.size_ < b.size_ : a.words_ < b.words_;
    }

   private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

enum class SampleSource { kExperimental, kSquashedSampler, kExactSampler };

std::string_view to_string(SampleSource s);

/// Ordered collection of click patterns sharing one mode count.
class SampleSet {
   public:
    SampleSet() = default;
    SampleSet(std::size_t modes, SampleSource source) : modes_(modes), source_(source) {}

    /// Throws InputError if the pattern length differs from modes().
    void push_back(ClickPattern p);

    std::size_t modes() const { return modes_; }
    SampleSource source() const { return source_; }
    std::size_t size() const { return patterns_.size(); }
    bool empty() const { return patterns_.empty(); }
    const std::vector<ClickPattern> &patterns() const { return patterns_; }
    const ClickPattern &operator[](std::size_t i) const { return patterns_[i]; }

    /// Entry C is the number of patterns with exactly C clicks, C = 0..M.
    std::vector<std::size_t> click_histogram() const;

    /// Set when a sampler stopped at its attempt cap before reaching the
    /// requested size.
    bool incomplete() const { return incomplete_; }
    void mark_incomplete(bool v = true) { incomplete_ = v; }

   private:
    std::vector<ClickPattern> patterns_;
    std::size_t modes_ = 0;
    SampleSource source_ = SampleSource::kExperimental;
    bool incomplete_ = false;
};

}  // namespace tgbs

#endif
