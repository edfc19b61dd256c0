// Copyright 2026 The StructPrompt Authors.
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

#include "structprompt/pipeline.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "structprompt/errors.h"
#include "structprompt/render.h"

namespace structprompt {
namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int status = -1;
  std::string out;
};

CommandResult RunCli(const std::string &args) {
  std::string command = std::string(STRUCTPROMPT_CLI) + " " + args + " 2>&1";
  CommandResult result;
  FILE *pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
  int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void Spit(const fs::path &path, const std::string &text) {
  std::ofstream(path, std::ios::binary) << text;
}

fs::path ScratchDir(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("structprompt_" + name + "_" +
                                              std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig SmallRun() {
  RunConfig cfg;
  cfg.seeds = {40, 41};
  cfg.dataset.train = 20;
  cfg.dataset.val = 5;
  cfg.dataset.test = 40;
  cfg.canvas = {256, 256, 10};
  return cfg;
}

TEST_CASE("pipeline scores a small run") {
  RunResult r = RunPipeline(SmallRun());
  REQUIRE(r.seeds.size() == 2);
  CHECK(r.exact_match.mean == 1.0);
  CHECK(r.bleu.mean == 1.0);
  CHECK(r.rouge_l.mean == 1.0);
  CHECK(r.faithful.spatial.mean == 1.0);
  CHECK(r.faithful.color.mean == 1.0);
  CHECK(r.faithful.shape.mean == 1.0);
  CHECK(r.scrambled.spatial.mean < 0.7);
  CHECK(r.scrambled.color.mean == 1.0);
  CHECK(r.faithful.n == 40);
  std::string text = RunResultToText(r);
  CHECK(text.find("1.000 \xC2\xB1 0.000") != std::string::npos);
}

TEST_CASE("pipeline writes deterministic artifacts") {
  RunConfig cfg = SmallRun();
  cfg.seeds = {7};
  cfg.max_images = 3;
  fs::path a = ScratchDir("run_a"), b = ScratchDir("run_b");
  cfg.output_dir = a;
  RunPipeline(cfg);
  cfg.output_dir = b;
  RunPipeline(cfg);
  for (const char *name : {"report.json", "report.txt", "seed-7/dataset.jsonl",
                           "seed-7/parsed.jsonl", "seed-7/augmented.jsonl",
                           "seed-7/layouts.jsonl", "seed-7/scrambled_layouts.jsonl",
                           "seed-7/report.json"}) {
    INFO(name);
    REQUIRE(fs::exists(a / name));
    CHECK(Slurp(a / name) == Slurp(b / name));
  }
  int images = 0;
  for (const auto &entry : fs::directory_iterator(a / "seed-7/images/faithful")) {
    CHECK(ReadPpm(entry.path()).width == 256);
    ++images;
  }
  CHECK(images == 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("pipeline errors name their stage") {
  RunConfig cfg = SmallRun();
  cfg.dataset.test = 6000;
  try {
    RunPipeline(cfg);
    FAIL("expected PipelineError");
  } catch (const PipelineError &e) {
    CHECK(e.stage().starts_with("gen-dataset"));
  }
  cfg = SmallRun();
  cfg.canvas = {4, 4, 10};
  CHECK_THROWS_AS(RunPipeline(cfg), PipelineError);
  cfg = SmallRun();
  cfg.seeds.clear();
  CHECK_THROWS_AS(RunPipeline(cfg), PipelineError);
}

TEST_CASE("cli parse and augment") {
  CommandResult r = RunCli("parse 'Add a purple cube at the center. Add a brown cube in "
                           "front of it on the right.'");
  CHECK(r.status == 0);
  CHECK(r.out == "Objects: [1: (purple, cube, center)], [2: (brown, cube)]. "
                 "Relations: [(2, front right of, 1)].\n");

  r = RunCli("parse 'Add a pink cube.'");
  CHECK(r.status == 1);
  CHECK(r.out.find("unknown-word") != std::string::npos);

  r = RunCli("augment --prompt 'Add a red sphere. Add a blue cube to the left of it.'");
  CHECK(r.status == 0);
  CHECK(r.out.find("\nStructured information: Objects: [1: (red, sphere)]") !=
        std::string::npos);
}

TEST_CASE("cli dataset, render and judge round trip") {
  fs::path dir = ScratchDir("cli");
  CommandResult r = RunCli("gen-dataset --train 3 --val 2 --test 6 --seed 5 --out " +
                           (dir / "d.jsonl").string());
  REQUIRE(r.status == 0);
  CHECK(r.out.find("wrote 11 samples") != std::string::npos);

  std::vector<Sample> samples = ReadJsonl(dir / "d.jsonl");
  fs::create_directories(dir / "img");
  for (const Sample &s : samples) {
    if (s.split != Split::kTest) continue;
    r = RunCli("render --canvas 256x256 --prompt '" + s.prompt.text() + "' --out " +
               (dir / "img" / (s.id + ".ppm")).string());
    REQUIRE(r.status == 0);
  }
  r = RunCli("judge --dataset " + (dir / "d.jsonl").string() + " --images " +
             (dir / "img").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("\"n\": 6") != std::string::npos);
  CHECK(r.out.find("\"formatted\": \"1.000 \xC2\xB1 0.000\"") != std::string::npos);

  r = RunCli("judge --split all --dataset " + (dir / "d.jsonl").string() + " --images " +
             (dir / "img").string());
  CHECK(r.status == 1);
  CHECK(r.out.starts_with("error: "));

  // Rendering a saved layout reproduces the same image.
  fs::path layout = dir / "l.json";
  r = RunCli("render --prompt 'Add a red cube. Add a green sphere above it.' --seed 9 "
             "--emit-layout " + layout.string() + " --out " + (dir / "a.ppm").string());
  REQUIRE(r.status == 0);
  r = RunCli("render --layout " + layout.string() + " --out " + (dir / "b.ppm").string());
  REQUIRE(r.status == 0);
  CHECK(Slurp(dir / "a.ppm") == Slurp(dir / "b.ppm"));
  fs::remove_all(dir);
}

TEST_CASE("cli metrics and inception score") {
  fs::path dir = ScratchDir("metrics");
  Spit(dir / "ref.jsonl",
       "{\"id\":\"a\",\"serialized\":\"x y z\"}\n{\"id\":\"b\",\"serialized\":\"a b c d\"}\n");
  Spit(dir / "pred.jsonl",
       "{\"id\":\"b\",\"serialized\":\"a c d\"}\n{\"id\":\"a\",\"serialized\":\"x y z\"}\n");
  CommandResult r = RunCli("metrics --metric rouge --pred " + (dir / "pred.jsonl").string() +
                           " --ref " + (dir / "ref.jsonl").string());
  CHECK(r.status == 0);
  // Mean of 1 and 6/7.
  CHECK(r.out.find("\"value\":0.928571428571") != std::string::npos);

  Spit(dir / "ce.jsonl",
       "{\"id\":\"a\",\"vocab\":[\"x\",\"y\",\"z\"],\"probs\":[[1,0,0],[0,1,0],[0,0,1]]}\n"
       "{\"id\":\"b\",\"vocab\":[\"a\",\"b\",\"c\",\"d\"],\"probs\":"
       "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}\n");
  r = RunCli("metrics --metric ce --pred " + (dir / "ce.jsonl").string() + " --ref " +
             (dir / "ref.jsonl").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("\"value\":0.0") != std::string::npos);

  Spit(dir / "p.csv", "1,0\n0,1\n");
  r = RunCli("is --probs " + (dir / "p.csv").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("\"formatted\":\"2.00 \xC2\xB1 0.00\"") != std::string::npos);

  Spit(dir / "bad.csv", "0.5,0.4\n");
  r = RunCli("is --probs " + (dir / "bad.csv").string());
  CHECK(r.status == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli run writes a report") {
  fs::path dir = ScratchDir("run");
  CommandResult r = RunCli("run --train 5 --val 5 --test 10 --seeds 1,2 --canvas 128x128 "
                           "--max-images 0 --out " + dir.string());
  CHECK(r.status == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(Slurp(dir / "report.txt") == r.out);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace structprompt
