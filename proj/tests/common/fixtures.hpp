// tests/common/fixtures.hpp

// Copyright 2026  SVCQ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SVCQ_TESTS_COMMON_FIXTURES_HPP_
#define SVCQ_TESTS_COMMON_FIXTURES_HPP_

namespace svcq::testing {

// One-tier long-form TextGrid with a single interval.
inline constexpr const char *kMinimalLongTextGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 0.5
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 0.5
        intervals: size = 1
        intervals [1]:
            xmin = 0
            xmax = 0.5
            text = "AH"
)";

// Two tiers, 3 words / 8 phones, including empty-label silence intervals.
// "she sells shells": words (sil, she, sells, shells, sil collapses into the
// empty labels below); phones cover the word spans exactly.
inline constexpr const char *kTwoTierLongTextGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.6
tiers? <exists>
size = 2
item []:
    item [1]:
        class = "IntervalTier"
        name = "words"
        xmin = 0
        xmax = 1.6
        intervals: size = 5
        intervals [1]:
            xmin = 0
            xmax = 0.2
            text = ""
        intervals [2]:
            xmin = 0.2
            xmax = 0.6
            text = "she"
        intervals [3]:
            xmin = 0.6
            xmax = 1.0
            text = "sells"
        intervals [4]:
            xmin = 1.0
            xmax = 1.4
            text = "shells"
        intervals [5]:
            xmin = 1.4
            xmax = 1.6
            text = ""
    item [2]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 1.6
        intervals: size = 10
        intervals [1]:
            xmin = 0
            xmax = 0.2
            text = "sil"
        intervals [2]:
            xmin = 0.2
            xmax = 0.4
            text = "SH"
        intervals [3]:
            xmin = 0.4
            xmax = 0.6
            text = "IY"
        intervals [4]:
            xmin = 0.6
            xmax = 0.75
            text = "S"
        intervals [5]:
            xmin = 0.75
            xmax = 0.9
            text = "EH"
        intervals [6]:
            xmin = 0.9
            xmax = 1.0
            text = "L Z"
        intervals [7]:
            xmin = 1.0
            xmax = 1.15
            text = "SH"
        intervals [8]:
            xmin = 1.15
            xmax = 1.3
            text = "EH"
        intervals [9]:
            xmin = 1.3
            xmax = 1.4
            text = "L Z"
        intervals [10]:
            xmin = 1.4
            xmax = 1.6
            text = "sp"
)";

// The same document in the short syntax (plus a point tier, which parsers
// must skip).
inline constexpr const char *kTwoTierShortTextGrid = R"("ooTextFile"
"TextGrid"
0
1.6
<exists>
3
"IntervalTier"
"words"
0
1.6
5
0
0.2
""
0.2
0.6
"she"
0.6
1.0
"sells"
1.0
1.4
"shells"
1.4
1.6
""
"IntervalTier"
"phones"
0
1.6
10
0
0.2
"sil"
0.2
0.4
"SH"
0.4
0.6
"IY"
0.6
0.75
"S"
0.75
0.9
"EH"
0.9
1.0
"L Z"
1.0
1.15
"SH"
1.15
1.3
"EH"
1.3
1.4
"L Z"
1.4
1.6
"sp"
"TextTier"
"events"
0
1.6
2
0.3
"click"
0.9
"beep"
)";

// 5 words / 17 phones over 2.0 s, no silence.
inline constexpr const char *kFiveWordJsonAlignment = R"({
  "duration": 2.0,
  "words": [
    {"start": 0.0,  "end": 0.35, "label": "the"},
    {"start": 0.35, "end": 0.8,  "label": "north"},
    {"start": 0.8,  "end": 1.2,  "label": "wind"},
    {"start": 1.2,  "end": 1.55, "label": "and"},
    {"start": 1.55, "end": 2.0,  "label": "sun"}
  ],
  "phones": [
    {"start": 0.0,  "end": 0.15, "label": "DH"},
    {"start": 0.15, "end": 0.35, "label": "AH"},
    {"start": 0.35, "end": 0.5,  "label": "N"},
    {"start": 0.5,  "end": 0.6,  "label": "AO"},
    {"start": 0.6,  "end": 0.7,  "label": "R"},
    {"start": 0.7,  "end": 0.8,  "label": "TH"},
    {"start": 0.8,  "end": 0.9,  "label": "W"},
    {"start": 0.9,  "end": 1.0,  "label": "IH"},
    {"start": 1.0,  "end": 1.1,  "label": "N"},
    {"start": 1.1,  "end": 1.2,  "label": "D"},
    {"start": 1.2,  "end": 1.3,  "label": "AE"},
    {"start": 1.3,  "end": 1.45, "label": "N"},
    {"start": 1.45, "end": 1.55, "label": "D"},
    {"start": 1.55, "end": 1.7,  "label": "S"},
    {"start": 1.7,  "end": 1.85, "label": "AH"},
    {"start": 1.85, "end": 1.95, "label": "N"},
    {"start": 1.95, "end": 2.0,  "label": "Z"}
  ],
  "speaker": "fixture"
})";

}  // namespace svcq::testing

#endif  // SVCQ_TESTS_COMMON_FIXTURES_HPP_
