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

#include <gtest/gtest.h>

#include "tgbs/error.h"

namespace tgbs {
namespace {

TEST(ClickPattern, StringRoundTrip) {
    const ClickPattern p = ClickPattern::from_string("0110001");
    EXPECT_EQ(p.size(), 7u);
    EXPECT_EQ(p.click_count(), 3u);
    EXPECT_EQ(p.to_string(), "0110001");
    EXPECT_EQ(p.clicked_modes(), (std::vector<std::size_t>{1, 2, 6}));
}

TEST(ClickPattern, RejectsOtherCharacters) {
    try {
        ClickPattern::from_string("01x0");
        FAIL();
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
    }
}

TEST(ClickPattern, MaskAndWideAssignments) {
    const ClickPattern p = ClickPattern::from_mask(0b1011, 4);
    EXPECT_EQ(p.to_string(), "1101");
    EXPECT_EQ(p.mask(), 0b1011u);
    ClickPattern wide(144);
    wide.set(0);
    wide.set(143);
    wide.set(70);
    EXPECT_EQ(wide.click_count(), 3u);
    EXPECT_TRUE(wide.test(143));
    wide.set(70, false);
    EXPECT_FALSE(wide.test(70));
    const std::vector<std::size_t> modes = {0, 143};
    EXPECT_TRUE(wide.all_clicked(modes));
}

TEST(SampleSet, HistogramAndLengthCheck) {
    SampleSet s(3, SampleSource::kExperimental);
    s.push_back(ClickPattern::from_string("000"));
    s.push_back(ClickPattern::from_string("101"));
    s.push_back(ClickPattern::from_string("110"));
    EXPECT_EQ(s.click_histogram(), (std::vector<std::size_t>{1, 0, 2, 0}));
    EXPECT_THROW(s.push_back(ClickPattern::from_string("10")), InputError);
}

}  // namespace
}  // namespace tgbs
