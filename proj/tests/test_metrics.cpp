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
#include "oracles.hpp"
#include "support.hpp"

#include "alphakit/image_io.hpp"
#include "alphakit/metrics.hpp"
#include "alphakit/text_io.hpp"

using namespace testing;

namespace {

AlphaMatte from_values(int w, int h, std::vector<float> v) {
  AlphaMatte a(w, h);
  std::copy(v.begin(), v.end(), a.values().begin());
  return a;
}

}  // namespace

TEST_CASE("sad and mse: hand arithmetic") {
  const AlphaMatte gt(2, 2, 0.25f);
  const AlphaMatte pred = from_values(2, 2, {0.25f, 0.75f, 0.25f, 0.75f});
  const Trimap all(2, 2);
  CHECK(*sad(pred, gt, all) == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(*mse(pred, gt, all) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(*sad(gt, gt, all) == 0.0);
  CHECK(*mse(gt, gt, all) == 0.0);

  const AlphaMatte uniform(5, 5, 0.1f);
  const AlphaMatte zero(5, 5);
  CHECK(*mse(uniform, zero, Trimap(5, 5)) == doctest::Approx(0.01).epsilon(1e-6));

  const AlphaMatte bin = step_alpha(6, 4, 3);
  AlphaMatte flipped = bin;
  for (float& v : flipped.values()) v = 1.0f - v;
  CHECK(*sad(flipped, bin, Trimap(6, 4)) == doctest::Approx(24.0 / 1000.0).epsilon(1e-12));
}

TEST_CASE("sad and mse ignore pixels outside the unknown region") {
  Rng rng(6);
  const AlphaMatte gt = random_alpha(rng, 10, 10);
  const Trimap tri = random_trimap(rng, 10, 10);
  AlphaMatte pred = random_alpha(rng, 10, 10);
  const double s0 = *sad(pred, gt, tri), m0 = *mse(pred, gt, tri);
  for (std::size_t i = 0; i < pred.values().size(); ++i) {
    if (tri.labels()[i] != TrimapLabel::kUnknown) pred.values()[i] = 0.987f;
  }
  CHECK(*sad(pred, gt, tri) == s0);
  CHECK(*mse(pred, gt, tri) == m0);
  CHECK_FALSE(sad(pred, gt, Trimap(10, 10, TrimapLabel::kForeground)).has_value());
  CHECK(sad(pred, gt, Trimap(10, 10, TrimapLabel::kForeground), MetricRegion::kWholeImage)
            .has_value());
}

TEST_CASE("sad and mse are positive for any deviation of one code") {
  AlphaMatte gt(4, 4, 0.5f);
  AlphaMatte pred = gt;
  pred.at(2, 1) += 1.0f / 255.0f;
  CHECK(*sad(pred, gt, Trimap(4, 4)) > 0.0);
  CHECK(*mse(pred, gt, Trimap(4, 4)) > 0.0);
}

TEST_CASE("sad and mse match direct summation") {
  Rng rng(101);
  for (int i = 0; i < 50; ++i) {
    const int w = static_cast<int>(rng.uniform_int(1, 40));
    const int h = static_cast<int>(rng.uniform_int(1, 40));
    const AlphaMatte p = random_alpha(rng, w, h), g = random_alpha(rng, w, h);
    const Trimap t = random_trimap(rng, w, h, 0.7);
    const auto s = sad(p, g, t), o = oracle::sad(p, g, t);
    REQUIRE(s.has_value() == o.has_value());
    if (s) CHECK(std::fabs(*s - *o) <= 1e-12);
    const auto m = mse(p, g, t), om = oracle::mse(p, g, t);
    if (m) CHECK(std::fabs(*m - *om) <= 1e-12);
  }
}

TEST_CASE("grad: zero cases and unit ramp") {
  Rng rng(2);
  const AlphaMatte a = random_alpha(rng, 20, 20);
  CHECK(*grad_error(a, a, Trimap(20, 20)) == 0.0);
  CHECK(*grad_error(AlphaMatte(20, 20, 0.2f), AlphaMatte(20, 20, 0.9f), Trimap(20, 20)) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  AlphaMatte ramp(24, 24);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) ramp.at(x, y) = static_cast<float>(x) / 64.0f;
  }
  const auto mag = gradient_magnitude(ramp, 1.4);
  CHECK(mag[12 * 24 + 12] == doctest::Approx(1.0 / 64.0).epsilon(1e-6));
}

TEST_CASE("grad: 9x9 ramp against constant matches the oracle") {
  AlphaMatte ramp(9, 9);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) ramp.at(x, y) = static_cast<float>(x) / 8.0f;
  }
  const AlphaMatte flat(9, 9, 0.5f);
  const Trimap tri(9, 9);
  CHECK(gradient_kernel_radius(1.4) == 5);
  const double got = *grad_error(flat, ramp, tri);
  CHECK(got > 0.0);
  CHECK(std::fabs(got - *oracle::grad(flat, ramp, tri)) <= 1e-9);
}

TEST_CASE("grad: random instances match the oracle") {
  Rng rng(303);
  for (int i = 0; i < 25; ++i) {
    const int w = static_cast<int>(rng.uniform_int(6, 32));
    const int h = static_cast<int>(rng.uniform_int(6, 32));
    const AlphaMatte p = random_alpha(rng, w, h), g = plateau_alpha(rng, w, h);
    const Trimap t = random_trimap(rng, w, h);
    CHECK(std::fabs(*grad_error(p, g, t) - *oracle::grad(p, g, t)) <= 1e-9);
  }
}

TEST_CASE("grad: small rasters are rejected") {
  CHECK_THROWS_AS(grad_error(AlphaMatte(5, 20), AlphaMatte(5, 20), Trimap(5, 20)), InputError);
  CHECK_THROWS_AS(grad_error(AlphaMatte(9, 9), AlphaMatte(9, 9), Trimap(9, 9), 0.0), InputError);
}

TEST_CASE("conn: zero cases") {
  Rng rng(12);
  const AlphaMatte a = plateau_alpha(rng, 12, 12);
  CHECK(*conn_error(a, a, Trimap(12, 12)) == 0.0);
  CHECK(*conn_error(AlphaMatte(6, 6, 1.0f), AlphaMatte(6, 6, 1.0f), Trimap(6, 6)) == 0.0);
  CHECK_FALSE(conn_error(AlphaMatte(6, 6, 0.5f), AlphaMatte(6, 6, 0.5f), Trimap(6, 6)).has_value());
}

TEST_CASE("conn: one flipped pixel on an 8x8 binary matte") {
  const AlphaMatte gt = step_alpha(8, 8, 4);
  AlphaMatte pred = gt;
  pred.at(4, 3) = 1.0f;
  const Trimap tri(8, 8);
  const double got = *conn_error(pred, gt, tri);
  CHECK(got > 0.0);
  CHECK(std::fabs(got - *oracle::conn(pred, gt, tri)) <= 1e-9);
}

TEST_CASE("conn: random instances match the exhaustive oracle") {
  Rng rng(404);
  for (int i = 0; i < 25; ++i) {
    const int w = static_cast<int>(rng.uniform_int(2, 16));
    const int h = static_cast<int>(rng.uniform_int(2, 16));
    const AlphaMatte p = plateau_alpha(rng, w, h), g = plateau_alpha(rng, w, h);
    const Trimap t = random_trimap(rng, w, h);
    const auto got = conn_error(p, g, t);
    const auto want = oracle::conn(p, g, t);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::fabs(*got - *want) <= 1e-9);
  }
}

TEST_CASE("evaluate: report fields and shape checks") {
  Rng rng(9);
  const AlphaMatte g = plateau_alpha(rng, 16, 16);
  const Trimap t = random_trimap(rng, 16, 16);
  const MetricReport r = evaluate(g, g, t);
  CHECK(*r.sad == 0.0);
  CHECK(*r.mse == 0.0);
  CHECK(*r.grad == 0.0);
  CHECK(*r.conn == 0.0);
  CHECK(r.unknown_px == t.count(TrimapLabel::kUnknown));
  CHECK_THROWS_AS(evaluate(g, AlphaMatte(15, 16), t), InputError);
}

TEST_CASE("evaluate_set over directories") {
  TempDir dir("evalset");
  for (const char* sub : {"pred", "gt", "tri"}) std::filesystem::create_directories(dir / sub);
  Rng rng(1);
  // Two images whose SADs are 0.001 and 0.003.
  for (int k = 0; k < 2; ++k) {
    const std::string stem = "img" + std::to_string(k);
    AlphaMatte gt(12, 12, 0.0f), pred(12, 12, 0.0f);
    pred.at(0, 0) = 1.0f;
    if (k == 1) {
      pred.at(1, 0) = 1.0f;
      pred.at(2, 0) = 1.0f;
    }
    write_alpha_png(dir / "gt" / (stem + ".png"), gt);
    write_alpha_png(dir / "pred" / (stem + ".png"), pred);
    write_trimap_png(dir / "tri" / (stem + ".png"), Trimap(12, 12));
  }
  const SetEvaluation ev = evaluate_set(dir / "pred", dir / "gt", dir / "tri");
  REQUIRE(ev.images.size() == 2);
  CHECK(*ev.images[0].report->sad == doctest::Approx(0.001));
  CHECK(*ev.images[1].report->sad == doctest::Approx(0.003));
  CHECK(*ev.mean.sad == doctest::Approx(0.002));
  CHECK(ev.missing.empty());

  const std::string csv = report_csv(ev);
  CHECK(csv.rfind("image_id,sad,mse,grad,conn,unknown_px\n", 0) == 0);
  const auto rows = parse_csv(csv);
  CHECK(rows.back()[0] == "MEAN");

  SUBCASE("gt as prediction gives zero means") {
    const SetEvaluation self = evaluate_set(dir / "gt", dir / "gt", dir / "tri", {}, 2);
    CHECK(*self.mean.sad == 0.0);
    CHECK(*self.mean.mse == 0.0);
  }
  SUBCASE("single image aggregate equals its report") {
    std::filesystem::remove(dir / "pred" / "img1.png");
    const SetEvaluation one = evaluate_set(dir / "pred", dir / "gt", dir / "tri");
    CHECK(one.mean.sad == one.images[0].report->sad);
    CHECK(one.mean.mse == one.images[0].report->mse);
  }
  SUBCASE("size mismatch is recorded per image") {
    write_alpha_png(dir / "pred" / "img1.png", AlphaMatte(13, 12));
    const SetEvaluation bad = evaluate_set(dir / "pred", dir / "gt", dir / "tri");
    CHECK_FALSE(bad.images[1].report.has_value());
    CHECK_FALSE(bad.images[1].error.empty());
    CHECK(*bad.mean.sad == doctest::Approx(0.001));
  }
  SUBCASE("missing gt is listed") {
    std::filesystem::remove(dir / "gt" / "img0.png");
    const SetEvaluation bad = evaluate_set(dir / "pred", dir / "gt", dir / "tri");
    CHECK(bad.missing == std::vector<std::string>{"img0"});
  }
}
