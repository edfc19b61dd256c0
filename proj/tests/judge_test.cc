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

#include "structprompt/judge.h"

#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "structprompt/errors.h"
#include "structprompt/layout.h"
#include "structprompt/random.h"

namespace structprompt {
namespace {

Layout OneObject(Color color, Shape shape, int size, int cx = 256, int cy = 256) {
  Layout layout;
  layout.canvas = {512, 512, 10};
  layout.source.objects = {{1, color, shape, std::nullopt}};
  layout.placements = {{1, cx, cy, size}};
  return layout;
}

std::vector<Sample> TestSplit(int n, uint64_t seed) {
  DatasetConfig cfg;
  cfg.train = 1;
  cfg.val = 1;
  cfg.test = n;
  cfg.seed = seed;
  std::vector<Sample> out;
  for (Sample &s : GenerateDataset(cfg)) {
    if (s.split == Split::kTest) out.push_back(std::move(s));
  }
  return out;
}

TEST_CASE("detects a red cube") {
  auto scene = DetectScene(Render(OneObject(Color::kRed, Shape::kCube, 64), Palette::Default()),
                           Palette::Default());
  REQUIRE(scene.size() == 1);
  CHECK(scene[0].color == Color::kRed);
  CHECK(scene[0].shape == Shape::kCube);
  CHECK(scene[0].FillRatio() == 1.0);
  CHECK(scene[0].pixel_count == 4096);
  CHECK(scene[0].cx == 256.0);
  CHECK(scene[0].cy == 256.0);
}

TEST_CASE("detects a triangle by its fill ratio") {
  auto scene = DetectScene(
      Render(OneObject(Color::kYellow, Shape::kTriangle, 64), Palette::Default()),
      Palette::Default());
  REQUIRE(scene.size() == 1);
  CHECK(scene[0].shape == Shape::kTriangle);
  CHECK(scene[0].FillRatio() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("all colors and shapes are recovered with centroids within a pixel") {
  const Palette &palette = Palette::Default();
  for (int size : {32, 64, 128}) {
    int correct = 0;
    for (Color c : kAllColors) {
      for (Shape s : kAllShapes) {
        Layout layout = OneObject(c, s, size, 200, 300);
        auto scene = DetectScene(Render(layout, palette), palette);
        REQUIRE(scene.size() == 1);
        correct += scene[0].color == c && scene[0].shape == s;
        CHECK(std::abs(scene[0].cx - 200) <= 1.0);
        CHECK(std::abs(scene[0].cy - 300) <= 1.0);
        CHECK(scene[0].cx >= scene[0].x0);
        CHECK(scene[0].cx <= scene[0].x1 + 1);
      }
    }
    CHECK(correct == 24);
  }
}

TEST_CASE("fill ratios of the three classes are well separated") {
  const Palette &palette = Palette::Default();
  for (int size = 32; size <= 160; size += 7) {
    double ratio[3];
    for (Shape s : kAllShapes) {
      auto scene = DetectScene(Render(OneObject(Color::kBlue, s, size), palette), palette);
      ratio[static_cast<int>(s)] = scene[0].FillRatio();
    }
    double cube = ratio[0], sphere = ratio[1], triangle = ratio[2];
    CHECK(cube - sphere >= 0.1);
    CHECK(sphere - triangle >= 0.1);
    // A filled square has ratio 1, so its clearance above 0.95 is 0.05.
    CHECK(cube - kCubeMinFill >= 0.05);
    CHECK(kCubeMinFill - sphere >= 0.1);
    CHECK(sphere - kSphereMinFill >= 0.1);
    CHECK(kSphereMinFill - triangle >= 0.1);
  }
}

TEST_CASE("detection errors") {
  RasterImage blank(64, 64, Palette::Default().background());
  CHECK_THROWS_AS(DetectScene(blank, Palette::Default()), EmptyScene);
  blank.Set(3, 4, {1, 2, 3});
  CHECK_THROWS_AS(DetectScene(blank, Palette::Default()), UnknownColor);
}

TEST_CASE("answer_query") {
  StructuredInfo info;
  info.objects = {{1, Color::kPurple, Shape::kCube, Anchor::kCenter},
                  {2, Color::kBrown, Shape::kSphere, std::nullopt}};
  info.relations = {{2, Relation::kRightOf, 1}};
  Layout layout = SolveLayout(info, Canvas{256, 256, 10}, 3);
  auto scene = DetectScene(Render(layout, Palette::Default()), Palette::Default());
  ObjectDescription purple{Color::kPurple, Shape::kCube};
  ObjectDescription brown{Color::kBrown, Shape::kSphere};
  CHECK(AnswerQuery(scene, Query::Spatial(brown, Relation::kRightOf, purple), 10) ==
        Answer::kYes);
  CHECK(AnswerQuery(scene, Query::Spatial(brown, Relation::kLeftOf, purple), 10) == Answer::kNo);
  CHECK(AnswerQuery(scene, Query::Spatial(purple, Relation::kLeftOf, brown), 10) ==
        Answer::kYes);
  CHECK(AnswerQuery(scene, Query::Spatial({Color::kRed, Shape::kCube}, Relation::kLeftOf, brown),
                    10) == Answer::kUndecidable);
  CHECK(AnswerQuery(scene, Query::Spatial(brown, Relation::kRightOf, brown), 10) ==
        Answer::kUndecidable);
  CHECK(AnswerQuery(scene, Query::ColorOf(brown, Color::kBrown), 10) == Answer::kYes);
  CHECK(AnswerQuery(scene, Query::ColorOf(brown, Color::kRed), 10) == Answer::kNo);
  CHECK(AnswerQuery(scene, Query::ShapeOf(purple, Shape::kCube), 10) == Answer::kYes);
  CHECK(AnswerQuery(scene, Query::ShapeOf(purple, Shape::kTriangle), 10) == Answer::kNo);

  // Duplicate descriptions are undecidable.
  auto doubled = scene;
  for (const DetectedObject &d : scene) {
    if (d.color == Color::kPurple) doubled.push_back(d);
  }
  CHECK(AnswerQuery(doubled, Query::ColorOf(purple, Color::kPurple), 10) == Answer::kUndecidable);
}

TEST_CASE("faithful pipeline scores all yes; scrambled keeps attributes") {
  const Palette &palette = Palette::Default();
  Canvas canvas{256, 256, 10};
  auto samples = TestSplit(200, 17);
  std::vector<RasterImage> faithful, scrambled;
  for (size_t i = 0; i < samples.size(); ++i) {
    Layout layout = SolveLayout(samples[i].reference, canvas, MixSeed(1, i));
    faithful.push_back(Render(layout, palette));
    scrambled.push_back(Render(ScrambleLayout(layout, MixSeed(2, i)), palette));
  }
  AlignmentCounts f = EvaluateAlignment(samples, faithful, palette, canvas.margin);
  CHECK(f.samples == 200);
  CHECK(f.spatial_total == 200);
  CHECK(f.color_total == 400);
  CHECK(f.Spatial() == 1.0);
  CHECK(f.ColorRate() == 1.0);
  CHECK(f.ShapeRate() == 1.0);
  AlignmentCounts s = EvaluateAlignment(samples, scrambled, palette, canvas.margin);
  CHECK(s.Spatial() < 0.6);
  CHECK(s.ColorRate() == 1.0);
  CHECK(s.ShapeRate() == 1.0);

  // Shrinking the margin never turns a faithful yes into a no.
  for (double margin : {5.0, 1.0, 0.0}) {
    CHECK(EvaluateAlignment(samples, faithful, palette, margin).Spatial() == 1.0);
  }

  faithful.pop_back();
  CHECK_THROWS_AS(EvaluateAlignment(samples, faithful, palette, 10), CountMismatch);
}

TEST_CASE("scrambled right_of yes-rate matches chance") {
  const Palette &palette = Palette::Default();
  Canvas canvas{256, 256, 10};
  StructuredInfo info;
  info.objects = {{1, Color::kRed, Shape::kCube, Anchor::kCenter},
                  {2, Color::kBlue, Shape::kTriangle, std::nullopt}};
  info.relations = {{2, Relation::kRightOf, 1}};
  Sample sample;
  sample.reference = info;
  Layout solved = SolveLayout(info, canvas, 0);
  AlignmentCounts total;
  for (uint64_t t = 0; t < 1000; ++t) {
    total += JudgeSample(sample, Render(ScrambleLayout(solved, t), palette), palette, 10);
  }
  double chance = oracle::ChanceRate(Relation::kRightOf, 256, 256, solved.placements[0].size,
                                     kMinBoxGap, 10, 100000, 5);
  CHECK(std::abs(total.Spatial() - chance) <= 0.05);
}

TEST_CASE("undecidable scenes score no") {
  const Palette &palette = Palette::Default();
  Sample sample;
  sample.reference.objects = {{1, Color::kRed, Shape::kCube, std::nullopt},
                              {2, Color::kBlue, Shape::kCube, std::nullopt}};
  sample.reference.relations = {{2, Relation::kLeftOf, 1}};
  RasterImage blank(64, 64, palette.background());
  AlignmentCounts c = JudgeSample(sample, blank, palette, 10);
  CHECK(c.spatial_yes == 0);
  CHECK(c.color_yes == 0);
  CHECK(c.shape_yes == 0);
  CHECK(c.color_total == 2);
}

TEST_CASE("report aggregates per-seed proportions") {
  AlignmentCounts a, b, c;
  a.spatial_yes = 473; a.spatial_total = 1000; a.samples = 1000;
  b.spatial_yes = 469; b.spatial_total = 1000; b.samples = 1000;
  c.spatial_yes = 477; c.spatial_total = 1000; c.samples = 1000;
  for (auto *x : {&a, &b, &c}) {
    x->color_yes = x->color_total = 2000;
    x->shape_yes = x->shape_total = 2000;
  }
  AlignmentReport report = MakeReport({a, b, c});
  CHECK(report.spatial.Format() == "0.473 \xC2\xB1 0.004");
  CHECK(report.color.Format() == "1.000 \xC2\xB1 0.000");
  CHECK(report.n == 1000);
  auto json = ReportToJson(report);
  CHECK(json["spatial"]["per_seed"].size() == 3);
  CHECK(json["spatial"]["mean"].get<double>() == doctest::Approx(0.473));
  CHECK(json["n"] == 1000);
  CHECK(json.dump().starts_with("{\"spatial\":{\"mean\":"));
  CHECK_THROWS_AS(MakeReport({}), EmptyInput);
}

}  // namespace
}  // namespace structprompt
