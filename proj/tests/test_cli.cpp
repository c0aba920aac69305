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

#include <map>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "alphakit/commands.hpp"
#include "alphakit/image_io.hpp"
#include "alphakit/log.hpp"
#include "alphakit/report.hpp"
#include "alphakit/strategy.hpp"
#include "alphakit/text_io.hpp"
#include "alphakit/trimap.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "alphakit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> checksums(const fs::path& root) {
  std::map<std::string, std::string> sums;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) sums[fs::relative(e.path(), root).string()] = file_checksum(e.path());
  }
  return sums;
}

int count_lines(const std::string& text, const std::string& prefix) {
  int n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

struct Workspace {
  TempDir dir{"cli"};
  fs::path config;
  Workspace() {
    set_quiet(true);
    write_source_tree(dir / "src", 2, 3, 64, 60, 70, 66);
    config = dir / "cfg.json";
    write_text_file(config, R"({
      "seed": 5,
      "paths": {"train": {"fg_dir": ")" + (dir / "src/fg").string() + R"(",
                          "alpha_dir": ")" + (dir / "src/alpha").string() + R"(",
                          "bg_dir": ")" + (dir / "src/bg").string() + R"("}},
      "rules": {"train_bg_per_fg": 2, "test_bg_per_fg": 1},
      "pipeline": {"patch_size": 40}
    })");
  }
  std::vector<std::string> common(const std::string& out) const {
    return {"--config", config.string(), "--out", (dir / out).string()};
  }
  Run run(std::string sub, const std::string& out, std::vector<std::string> extra = {}) const {
    std::vector<std::string> args{std::move(sub)};
    for (auto& a : common(out)) args.push_back(a);
    for (auto& a : extra) args.push_back(a);
    return cli(args);
  }
};

// Mattes, trimaps and prediction sets for eval/sweep.
void write_eval_tree(const fs::path& root) {
  for (const char* sub : {"gt", "tri", "perfect", "half", "bad"}) fs::create_directories(root / sub);
  for (int k = 0; k < 3; ++k) {
    const std::string stem = "im" + std::to_string(k);
    const AlphaMatte gt = disc_alpha(160, 150, 40.0 + 5 * k, 3.0);
    write_alpha_png(root / "gt" / (stem + ".png"), gt, 8);
    write_trimap_png(root / "tri" / (stem + ".png"), generate_trimap(gt, 10));
    write_alpha_png(root / "perfect" / (stem + ".png"), gt, 8);
    write_alpha_png(root / "half" / (stem + ".png"), AlphaMatte(160, 150, 0.5f), 8);
    write_alpha_png(root / "bad" / (stem + ".png"),
                    k == 1 ? AlphaMatte(100, 100) : gt, 8);
  }
}

}  // namespace

TEST_CASE("cli: compose writes the manifest and composed sets") {
  Workspace ws;
  const Run r = ws.run("compose", "o1");
  CHECK(r.rc == 0);
  CHECK(fs::exists(ws.dir / "o1/manifest.json"));
  CHECK(fs::exists(ws.dir / "o1/config.json"));
  CHECK(r.out.find("4 entries") != std::string::npos);
  int composed = 0;
  for (const auto& e : fs::directory_iterator(ws.dir / "o1/composed/train")) composed += e.is_regular_file();
  CHECK(composed == 12);

  SUBCASE("rerun gives identical checksums") {
    const auto before = checksums(ws.dir / "o1");
    CHECK(ws.run("compose", "o1").rc == 0);
    CHECK(checksums(ws.dir / "o1") == before);
  }
  SUBCASE("saved config copy reruns to the same outputs") {
    const Run again = cli({"compose", "--config", (ws.dir / "o1/config.json").string(), "--out",
                           (ws.dir / "o1b").string()});
    CHECK(again.rc == 0);
    auto a = checksums(ws.dir / "o1"), b = checksums(ws.dir / "o1b");
    a.erase("config.json");
    b.erase("config.json");
    CHECK(a == b);
  }
}

TEST_CASE("cli: compose with a missing background dir names the path") {
  Workspace ws;
  fs::remove_all(ws.dir / "src/bg");
  const Run r = ws.run("compose", "o");
  CHECK(r.rc == 1);
  CHECK(r.err.find((ws.dir / "src/bg").string()) != std::string::npos);
}

TEST_CASE("cli: usage errors exit 1") {
  CHECK(cli({}).rc == 1);
  CHECK(cli({"frobnicate"}).rc == 1);
  CHECK(cli({"compose", "--workers", "0"}).rc == 1);
  CHECK(cli({"compose", "--config", "/nonexistent.json"}).rc == 1);
}

TEST_CASE("cli: augment") {
  Workspace ws;
  REQUIRE(ws.run("compose", "o").rc == 0);

  SUBCASE("frequency summary has four strategy rows") {
    const Run r = ws.run("augment", "o", {"-n", "20"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("strategy,count,frequency\n") != std::string::npos);
    for (const char* s : {"AF,", "AFB,", "AC,", "none,"}) CHECK(count_lines(r.out, s) == 1);
    CHECK(r.out.find("of 20") != std::string::npos);
    const auto records = read_text_file(ws.dir / "o/patches/records.jsonl");
    CHECK(std::count(records.begin(), records.end(), '\n') >= 15);
  }
  SUBCASE("policy file forcing AF") {
    write_text_file(ws.dir / "p.json", R"({"p_af": 1.0, "p_afb": 0.0})");
    const Run r = ws.run("augment", "o", {"-n", "10", "--policy", (ws.dir / "p.json").string()});
    CHECK(r.rc == 0);
    std::istringstream in(read_text_file(ws.dir / "o/patches/records.jsonl"));
    int n = 0;
    for (std::string line; std::getline(in, line); ++n) {
      CHECK(AugmentationRecord::from_json_line(line).strategy == Strategy::kAF);
    }
    CHECK(n == 10);
  }
  SUBCASE("audit passes") {
    const Run r = ws.run("augment", "o", {"-n", "16", "--audit", "--workers", "2"});
    CHECK(r.rc == 0);
    CHECK(r.out.find(" 0 failed") != std::string::npos);
  }
  SUBCASE("rerun gives identical checksums") {
    REQUIRE(ws.run("augment", "o", {"-n", "8"}).rc == 0);
    const auto before = checksums(ws.dir / "o");
    REQUIRE(ws.run("augment", "o", {"-n", "8", "--workers", "3"}).rc == 0);
    auto after = checksums(ws.dir / "o");
    // The config copy records the worker count.
    after.erase("config.json");
    auto b = before;
    b.erase("config.json");
    CHECK(after == b);
  }
}

TEST_CASE("cli: augment without a manifest") {
  Workspace ws;
  const Run r = ws.run("augment", "empty", {"-n", "2"});
  CHECK(r.rc == 1);
  CHECK(r.err.find("manifest") != std::string::npos);
}

TEST_CASE("cli: eval") {
  Workspace ws;
  write_eval_tree(ws.dir / "ev");
  const fs::path ev = ws.dir / "ev";
  auto args = [&](const std::string& pred) {
    return std::vector<std::string>{"--pred", (ev / pred).string(), "--gt", (ev / "gt").string(),
                                    "--trimap", (ev / "tri").string()};
  };
  SUBCASE("perfect predictions") {
    const Run r = ws.run("eval", "e", args("perfect"));
    CHECK(r.rc == 0);
    CHECK(r.out.find("MEAN sad=0 ") != std::string::npos);
    const auto rows = parse_csv(read_text_file(ws.dir / "e/eval.csv"));
    CHECK(rows[0] == CsvRow{"image_id", "sad", "mse", "grad", "conn", "unknown_px"});
    CHECK(rows.size() == 5);
    CHECK(rows.back()[0] == "MEAN");
  }
  SUBCASE("size mismatch fails unless partial results are allowed") {
    const Run strict = ws.run("eval", "e", args("bad"));
    CHECK(strict.rc == 1);
    CHECK(strict.err.find("im1") != std::string::npos);
    auto a = args("bad");
    a.push_back("--allow-partial");
    const Run partial = ws.run("eval", "e", a);
    CHECK(partial.rc == 0);
    CHECK(partial.err.find("im1") != std::string::npos);
    CHECK(partial.out.find("images=2") != std::string::npos);
  }
  SUBCASE("missing directory") {
    const Run r = ws.run("eval", "e", args("nope"));
    CHECK(r.rc == 1);
    CHECK(r.err.find("nope") != std::string::npos);
  }
}

TEST_CASE("cli: sweep and report") {
  Workspace ws;
  write_eval_tree(ws.dir / "ev");
  const fs::path ev = ws.dir / "ev";
  const Run r = ws.run("sweep", "s",
                       {"--pred", "perfect=" + (ev / "perfect").string(), "--pred",
                        "half=" + (ev / "half").string(), "--gt", (ev / "gt").string()});
  REQUIRE(r.rc == 0);
  const auto points = robustness_table({ws.dir / "s/sweep/sweep.csv"});
  CHECK(points.size() == 32);
  std::map<std::string, std::vector<double>> sad;
  for (const auto& p : points) {
    if (p.method == "perfect" && p.value) CHECK(*p.value == 0.0);
    if (p.metric == "sad") sad[p.method].push_back(*p.value);
  }
  REQUIRE(sad["half"].size() == 4);
  for (int k = 1; k < 4; ++k) CHECK(sad["half"][k] > sad["half"][k - 1]);
  const auto manifest = parse_csv(read_text_file(ws.dir / "s/sweep/sweep_manifest.csv"));
  CHECK(manifest.size() == 13);
  CHECK(fs::exists(ws.dir / "s/sweep/plot_sad.png"));

  SUBCASE("rerun is byte-identical") {
    const auto before = checksums(ws.dir / "s");
    REQUIRE(ws.run("sweep", "s",
                   {"--pred", "perfect=" + (ev / "perfect").string(), "--pred",
                    "half=" + (ev / "half").string(), "--gt", (ev / "gt").string()})
                .rc == 0);
    CHECK(checksums(ws.dir / "s") == before);
  }
  SUBCASE("report merges eval CSVs and sweep curves") {
    REQUIRE(ws.run("eval", "e1",
                   {"--pred", (ev / "perfect").string(), "--gt", (ev / "gt").string(), "--trimap",
                    (ev / "tri").string()})
                .rc == 0);
    REQUIRE(ws.run("eval", "e2",
                   {"--pred", (ev / "half").string(), "--gt", (ev / "gt").string(), "--trimap",
                    (ev / "tri").string()})
                .rc == 0);
    const Run rep = ws.run("report", "rep",
                           {"--eval", "half=" + (ws.dir / "e2/eval.csv").string(), "--eval",
                            "perfect=" + (ws.dir / "e1/eval.csv").string(), "--sweep",
                            (ws.dir / "s/sweep/sweep.csv").string()});
    CHECK(rep.rc == 0);
    const auto table = parse_csv(read_text_file(ws.dir / "rep/table.csv"));
    REQUIRE(table.size() == 3);
    CHECK(table[1][0] == "perfect");
    CHECK(table[2][0] == "half");
    CHECK(fs::exists(ws.dir / "rep/table.md"));
    CHECK(parse_csv(read_text_file(ws.dir / "rep/curves.csv")).size() == 33);
    const Run dup = ws.run("report", "rep",
                           {"--eval", "a=" + (ws.dir / "e2/eval.csv").string(), "--eval",
                            "a=" + (ws.dir / "e1/eval.csv").string()});
    CHECK(dup.rc == 1);
  }
}
