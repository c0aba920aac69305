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

#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "alphakit/augment.hpp"
#include "alphakit/compose.hpp"
#include "alphakit/filters.hpp"
#include "alphakit/jpeg_codec.hpp"

using namespace testing;

TEST_CASE("registry sizes per category") {
  const auto& reg = registry();
  CHECK(reg.at(Category::kLinearPixelwise).size() == 11);
  CHECK(reg.at(Category::kNonlinearPixelwise).size() == 3);
  CHECK(reg.at(Category::kRegionWise).size() == 2);
  for (const auto& [cat, kinds] : reg) {
    for (OpKind k : kinds) {
      CHECK(category_of(k) == cat);
      CHECK(op_kind_from_string(to_string(k)) == k);
    }
  }
  CHECK_FALSE(op_kind_from_string("sharpen").has_value());
}

TEST_CASE("realize: channel inversion and brightness are affine") {
  Rng rng(1);
  const auto inv = realize(AugmentationOp(OpKind::kChannelInversion), rng, 4, 3);
  const auto& lin = *inv.realization().linear;
  for (float a : lin.gain.values()) CHECK(a == -1.0f);
  for (float b : lin.offset.values()) CHECK(b == 1.0f);
  CHECK(lin.channel_perm == std::array<int, 3>{0, 1, 2});

  const auto br = realize(AugmentationOp::fixed(OpKind::kBrightness, 0.1), rng, 4, 3);
  const auto& blin = *br.realization().linear;
  for (float a : blin.gain.values()) CHECK(a == 1.0f);
  for (float b : blin.offset.values()) CHECK(b == 0.1f);
}

TEST_CASE("realize: same seed gives identical noise field") {
  const auto op = AugmentationOp::fixed(OpKind::kGaussianNoise, 0.05);
  Rng r1(77), r2(77);
  const auto a = realize(op, r1, 16, 9);
  const auto b = realize(op, r2, 16, 9);
  CHECK(a.realization().linear->offset == b.realization().linear->offset);
  CHECK(a.realization().values == b.realization().values);
  CHECK_THROWS_AS(realize(a, r1, 16, 9), InputError);
  CHECK_THROWS_AS(apply(op, RasterImage(16, 9)), InputError);
}

TEST_CASE("apply: identity parameters leave the image unchanged") {
  Rng rng(4);
  const RasterImage img = random_image(rng, 8, 8);
  LinearPixelwiseParams p{RasterImage(8, 8, 1.0f), RasterImage(8, 8, 0.0f), {0, 1, 2}};
  CHECK(apply_linear(p, img) == img);
  const auto br = realize(AugmentationOp::fixed(OpKind::kBrightness, 0.0), rng, 8, 8);
  CHECK(apply(br, img) == img);
}

TEST_CASE("apply: realised op is replayable bit-exactly") {
  Rng rng(6);
  const RasterImage img = random_image(rng, 12, 10);
  for (const auto& [cat, kinds] : registry()) {
    for (OpKind k : kinds) {
      CAPTURE(to_string(k));
      const auto op = realize(AugmentationOp(k), rng, 12, 10, &img);
      CHECK(apply(op, img) == apply(op, img));
    }
  }
}

TEST_CASE("apply: salt and pepper pixels become 0 or 1") {
  Rng rng(8);
  const RasterImage img = random_image(rng, 32, 32, 0.2, 0.8);
  const auto op = realize(AugmentationOp::fixed(OpKind::kSaltAndPepper, 0.2), rng, 32, 32);
  const RasterImage out = apply(op, img);
  const auto& lin = *op.realization().linear;
  int selected = 0;
  for (std::size_t i = 0; i < out.values().size(); ++i) {
    if (lin.gain.values()[i] == 0.0f) {
      ++selected;
      CHECK((out.values()[i] == 0.0f || out.values()[i] == 1.0f));
    } else {
      CHECK(out.values()[i] == img.values()[i]);
    }
  }
  CHECK(selected > 0);
}

TEST_CASE("apply: blur of an impulse reproduces the sampled Gaussian") {
  const int n = 15, c = 7;
  RasterImage img(n, n);
  for (int ch = 0; ch < 3; ++ch) img.at(c, c, ch) = 1.0f;
  Rng rng(0);
  const auto op = realize(AugmentationOp::fixed(OpKind::kGaussianBlur, 1.0), rng, n, n);
  const RasterImage out = apply(op, img);
  double norm = 0.0;
  for (int i = -3; i <= 3; ++i) norm += std::exp(-i * i / 2.0);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int dx = x - c, dy = y - c;
      double expect = 0.0;
      if (std::abs(dx) <= 3 && std::abs(dy) <= 3) {
        expect = std::exp(-dx * dx / 2.0) * std::exp(-dy * dy / 2.0) / (norm * norm);
      }
      CHECK(out.at(x, y, 1) == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("apply_to_alpha: blur on a step strip matches hand convolution") {
  AlphaMatte a(8, 1);
  for (int x = 0; x < 4; ++x) a.at(x, 0) = 1.0f;
  Rng rng(0);
  const auto op = realize(AugmentationOp::fixed(OpKind::kGaussianBlur, 0.8), rng, 8, 1);
  const AlphaMatte out = apply_to_alpha(op, a);
  const auto& k = op.realization().blur_kernel;
  const int r = static_cast<int>(k.size() / 2);
  for (int x = 0; x < 8; ++x) {
    double expect = 0.0;
    for (int i = -r; i <= r; ++i) {
      int sx = x + i;
      if (sx < 0) sx = -sx;
      if (sx > 7) sx = 14 - sx;
      expect += k[i + r] * (sx < 4 ? 1.0 : 0.0);
    }
    CHECK(out.at(x, 0) == doctest::Approx(expect).epsilon(1e-6));
  }
  for (int x = 1; x < 8; ++x) CHECK(out.at(x, 0) <= out.at(x - 1, 0));
}

TEST_CASE("apply_to_alpha: constant matte is unchanged by blur") {
  const AlphaMatte a(20, 20, 0.4f);
  Rng rng(2);
  const auto op = realize(AugmentationOp::fixed(OpKind::kGaussianBlur, 2.5), rng, 20, 20);
  const AlphaMatte out = apply_to_alpha(op, a);
  for (float v : out.values()) CHECK(v == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("apply_to_alpha: jpeg q=100 stays within 2/255") {
  Rng rng(12);
  const AlphaMatte a = disc_alpha(48, 40, 14.0, 5.0);
  const auto op = realize(AugmentationOp::fixed(OpKind::kJpegCompression, 100), rng, 48, 40);
  const AlphaMatte out = apply_to_alpha(op, a);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    worst = std::max(worst, std::fabs(static_cast<double>(out.values()[i]) - a.values()[i]));
  }
  CHECK(worst <= 2.0 / 255.0 + 1e-7);
}

TEST_CASE("apply_to_alpha rejects pixel-wise ops") {
  Rng rng(1);
  const auto op = realize(AugmentationOp(OpKind::kBrightness), rng, 4, 4);
  CHECK_THROWS_AS(apply_to_alpha(op, AlphaMatte(4, 4)), InputError);
}

TEST_CASE("linear ops commute with compositing") {
  Rng rng(2024);
  for (OpKind k : registry().at(Category::kLinearPixelwise)) {
    CAPTURE(to_string(k));
    for (int trial = 0; trial < 10; ++trial) {
      const RasterImage f = random_image(rng, 24, 20);
      const RasterImage b = random_image(rng, 24, 20);
      const AlphaMatte a = random_alpha(rng, 24, 20);
      const RasterImage img = composite(f, b, a);
      const auto op = realize(AugmentationOp(k), rng, 24, 20, &img);
      const double dev = max_abs_diff(apply(op, img), composite(apply(op, f), apply(op, b), a));
      CHECK(dev <= 1e-5);
    }
  }
}

TEST_CASE("nonlinear and region ops break the equation") {
  Rng rng(31);
  const RasterImage f = random_image(rng, 32, 32);
  const RasterImage b = random_image(rng, 32, 32);
  const AlphaMatte a = random_alpha(rng, 32, 32);
  const RasterImage img = composite(f, b, a);
  for (OpKind k : {OpKind::kGammaContrast, OpKind::kGaussianBlur}) {
    const auto op = realize(AugmentationOp::fixed(k, 2.0), rng, 32, 32);
    CHECK(max_abs_diff(apply(op, img), composite(apply(op, f), apply(op, b), a)) > 1e-3);
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(AugmentationOp(OpKind::kBrightness, ParamRange{0.3, 0.1}), InputError);
  Rng rng(1);
  CHECK_THROWS_AS(realize(AugmentationOp::fixed(OpKind::kGaussianBlur, 0.0), rng, 4, 4),
                  InputError);
  CHECK_THROWS_AS(realize(AugmentationOp::fixed(OpKind::kJpegCompression, 101), rng, 4, 4),
                  InputError);
  CHECK_THROWS_AS(realize(AugmentationOp(OpKind::kBrightness), rng, 0, 4), InputError);
}

TEST_CASE("jpeg codec round trip keeps dimensions") {
  JpegImage img{9, 7, 3, std::vector<std::uint8_t>(9 * 7 * 3, 128)};
  const JpegImage out = decode_jpeg(encode_jpeg(img, 90));
  CHECK(out.width == 9);
  CHECK(out.height == 7);
  CHECK(out.components == 3);
  for (auto p : out.pixels) CHECK(std::abs(static_cast<int>(p) - 128) <= 1);
}
