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

#include "tgbs/click_pattern.h"

#include <bit>

#include "tgbs/error.h"

namespace tgbs {

ClickPattern::ClickPattern(std::size_t modes) : words_((modes + 63) / 64, 0), size_(modes) {}

ClickPattern ClickPattern::from_string(std::string_view bits) {
    ClickPattern p(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] == '1') {
            p.set(j);
        } else if (bits[j] != '0') {
            throw InputError("click pattern contains '" + std::string(1, bits[j]) + "' at position " +
                             std::to_string(j));
        }
    }
    return p;
}

ClickPattern ClickPattern::from_mask(std::uint64_t mask, std::size_t modes) {
    if (modes > 64) {
        throw InputError("from_mask supports at most 64 modes");
    }
    ClickPattern p(modes);
    if (modes > 0) {
        p.words_[0] = modes == 64 ? mask : (mask & ((std::uint64_t{1} << modes) - 1));
    }
    return p;
}

void ClickPattern::set(std::size_t j, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (j & 63);
    if (value) {
        words_[j >> 6] |= bit;
    } else {
        words_[j >> 6] &= ~bit;
    }
}

std::size_t ClickPattern::click_count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
}

std::vector<std::size_t> ClickPattern::clicked_modes() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size_; ++j) {
        if (test(j)) {
            out.push_back(j);
        }
    }
    return out;
}

bool ClickPattern::all_clicked(std::span<const std::size_t> modes) const {
    for (std::size_t j : modes) {
        if (!test(j)) {
            return false;
        }
    }
    return true;
}

std::string ClickPattern::to_string() const {
    std::string s(size_, '0');
    for (std::size_t j = 0; j < size_; ++j) {
        if (test(j)) {
            s[j] = '1';
        }
    }
    return s;
}

std::string_view to_string(SampleSource s) {
    switch (s) {
        case SampleSource::kExperimental:
            return "experimental";
        case SampleSource::kSquashedSampler:
            return "squashed-sampler";
        case SampleSource::kExactSampler:
            return "exact-sampler";
    }
    return "unknown";
}

void SampleSet::push_back(ClickPattern p) {
    if (p.size() != modes_) {
        throw InputError("pattern of length " + std::to_string(p.size()) + " added to a sample set of " +
                         std::to_string(modes_) + " modes");
    }
    patterns_.push_back(std::move(p));
}

std::vector<std::size_t> SampleSet::click_histogram() const {
    std::vector<std::size_t> h(modes_ + 1, 0);
    for (const ClickPattern &p : patterns_) {
        ++h[p.click_count()];
    }
    return h;
}

}  // namespace tgbs
