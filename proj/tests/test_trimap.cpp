// Copyright (c) 2026, The alphakit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "alphakit/image_io.hpp"
#include "alphakit/trimap.hpp"

using namespace testing;

TEST_CASE("all-opaque matte gives an all-FG trimap") {
  const Trimap t = generate_trimap(AlphaMatte(12, 9, 1.0f), 5);
  CHECK(t.count(TrimapLabel::kForeground) == t.pixel_count());
}

TEST_CASE("vertical step: band spans [c-2, c+1] for d=2") {
  const int c = 8;
  const Trimap t = generate_trimap(step_alpha(16, 1, c), 2);
  for (int x = 0; x < 16; ++x) {
    CAPTURE(x);
    const TrimapLabel expect = x < c - 2    ? TrimapLabel::kForeground
                               : x <= c + 1 ? TrimapLabel::kUnknown
                                            : TrimapLabel::kBackground;
    CHECK(t.at(x, 0) == expect);
  }
}

TEST_CASE("unknown region grows with the radius") {
  Rng rng(4);
  const AlphaMatte a = disc_alpha(60, 50, 18.0, 4.0);
  for (int d = 1; d < 12; ++d) {
    const Trimap small = generate_trimap(a, d);
    const Trimap big = generate_trimap(a, d + 1);
    for (std::size_t i = 0; i < small.pixel_count(); ++i) {
      if (small.labels()[i] == TrimapLabel::kUnknown) {
        CHECK(big.labels()[i] == TrimapLabel::kUnknown);
      }
    }
  }
}

TEST_CASE("erosion matches the brute-force disk oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = static_cast<int>(rng.uniform_int(1, 24));
    const int h = static_cast<int>(rng.uniform_int(1, 24));
    const int r = static_cast<int>(rng.uniform_int(1, 9));
    const AlphaMatte a = plateau_alpha(rng, w, h);
    CHECK(generate_trimap(a, r) == oracle::trimap(a, r));
  }
}

TEST_CASE("labels never contradict alpha; fractional alpha is unknown") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const AlphaMatte a = plateau_alpha(rng, 30, 30);
    Rng tr(trial);
    const Trimap t = generate_trimap(a, tr, 1, 6);
    for (std::size_t i = 0; i < t.pixel_count(); ++i) {
      const float v = a.values()[i];
      if (t.labels()[i] == TrimapLabel::kForeground) CHECK(v >= 1.0f - kPureAlphaEpsilon);
      if (t.labels()[i] == TrimapLabel::kBackground) CHECK(v <= kPureAlphaEpsilon);
      if (v > kPureAlphaEpsilon && v < 1.0f - kPureAlphaEpsilon) {
        CHECK(t.labels()[i] == TrimapLabel::kUnknown);
      }
    }
  }
}

TEST_CASE("radius validation") {
  CHECK_THROWS_AS(generate_trimap(AlphaMatte(4, 4), 0), InputError);
  Rng rng(1);
  CHECK_THROWS_AS(generate_trimap(AlphaMatte(4, 4), rng, 5, 3), InputError);
}

TEST_CASE("sweep sets") {
  const AlphaMatte a = disc_alpha(200, 180, 60.0, 6.0);
  Rng r1(10), r2(10);
  const auto sets = sweep_sets(a, r1);
  const auto again = sweep_sets(a, r2);
  REQUIRE(sets.size() == 4);
  const std::vector<std::pair<int, int>> ranges{{11, 20}, {21, 30}, {31, 40}, {41, 50}};
  const std::vector<std::string> labels{"20", "30", "40", "50"};
  std::size_t prev = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(sets[k].label == labels[k]);
    CHECK(sets[k].radius >= ranges[k].first);
    CHECK(sets[k].radius <= ranges[k].second);
    CHECK(sets[k].trimap == again[k].trimap);
    CHECK(sets[k].radius == again[k].radius);
    const std::size_t unknown = sets[k].trimap.count(TrimapLabel::kUnknown);
    CHECK(unknown >= prev);
    prev = unknown;
  }
}

TEST_CASE("trimap PNG round trip is exact") {
  TempDir dir("trimap");
  Rng rng(3);
  const Trimap t = random_trimap(rng, 33, 17);
  write_trimap_png(dir / "t.png", t);
  CHECK(read_trimap(dir / "t.png") == t);
}
