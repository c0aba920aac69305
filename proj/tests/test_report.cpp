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
#include "support.hpp"

#include "alphakit/report.hpp"
#include "alphakit/text_io.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

fs::path eval_csv(const TempDir& dir, const std::string& name, const std::string& mean_sad) {
  const fs::path p = dir / (name + ".csv");
  write_text_file(p, std::string(kEvalCsvHeader) + "\nimg,1,2,3,4,10\nMEAN," + mean_sad +
                         ",0.5,0.25,0.125,10\n");
  return p;
}

fs::path sweep_csv(const TempDir& dir, const std::string& method,
                   const std::vector<std::string>& labels) {
  std::string text = std::string(kSweepCsvHeader) + "\n";
  double v = 0.0;
  for (const auto& m : metric_names()) {
    for (const auto& l : labels) text += method + "," + l + "," + m + "," + format_number(v += 0.5) + "\n";
  }
  const fs::path p = dir / (method + "_sweep.csv");
  write_text_file(p, text);
  return p;
}

}  // namespace

TEST_CASE("merge_reports") {
  TempDir dir("report");
  const auto a = eval_csv(dir, "a", "0.002"), b = eval_csv(dir, "b", "0.001");

  const ComparisonTable one = merge_reports({a}, {"A"});
  REQUIRE(one.rows.size() == 1);
  CHECK(*one.rows[0].sad == 0.002);
  CHECK(*one.rows[0].conn == 0.125);

  const ComparisonTable two = merge_reports({a, b}, {"A", "B"});
  REQUIRE(two.rows.size() == 2);
  CHECK(two.rows[0].label == "B");
  CHECK(two.rows[1].label == "A");
  CHECK(two.to_csv() == merge_reports({a, b}, {"A", "B"}).to_csv());
  CHECK(two.to_markdown().find("| B |") != std::string::npos);

  CHECK_THROWS_AS(merge_reports({a, b}, {"A", "A"}), InputError);
  CHECK_THROWS_AS(merge_reports({a}, {"A", "B"}), InputError);

  write_text_file(dir / "bad.csv", "image_id,sad\nMEAN,1\n");
  try {
    merge_reports({a, dir / "bad.csv"}, {"A", "B"});
    FAIL("expected schema error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("bad.csv") != std::string::npos);
  }
  write_text_file(dir / "nomean.csv", std::string(kEvalCsvHeader) + "\nimg,1,2,3,4,10\n");
  CHECK_THROWS_AS(merge_reports({dir / "nomean.csv"}, {"X"}), InputError);
}

TEST_CASE("merge_reports: undefined values sort last") {
  TempDir dir("report_nan");
  const auto a = eval_csv(dir, "a", "nan"), b = eval_csv(dir, "b", "0.5");
  const ComparisonTable t = merge_reports({a, b}, {"A", "B"});
  CHECK(t.rows[0].label == "B");
  CHECK_FALSE(t.rows[1].sad.has_value());
}

TEST_CASE("robustness_table") {
  TempDir dir("robust");
  const std::vector<std::string> labels{"20", "30", "40", "50"};
  const auto m1 = sweep_csv(dir, "m1", labels), m2 = sweep_csv(dir, "m2", labels);
  const auto one = robustness_table({m1});
  CHECK(one.size() == 16);
  CHECK(robustness_table({m1, m2}).size() == 32);
  CHECK(*one[0].value == 0.5);
  CHECK(*one[15].value == 8.0);
  CHECK(curves_csv(one) == read_text_file(m1));

  const auto partial = sweep_csv(dir, "m3", {"20", "30", "40"});
  CHECK_THROWS_AS(robustness_table({partial}), InputError);
  CHECK_THROWS_AS(robustness_table({m1, m1}), InputError);
}

TEST_CASE("curve plot is written") {
  TempDir dir("plot");
  const auto pts = robustness_table({sweep_csv(dir, "m", {"20", "30", "40", "50"})});
  write_curve_plot(dir / "p.png", pts, "sad", {"20", "30", "40", "50"});
  CHECK(fs::file_size(dir / "p.png") > 0);
}
