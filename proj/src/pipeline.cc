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

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>

#include <spdlog/spdlog.h>

#include "structprompt/errors.h"
#include "structprompt/parser.h"
#include "structprompt/random.h"
#include "structprompt/render.h"

namespace structprompt {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Salt separating scramble streams from solver streams.
constexpr uint64_t kScrambleSalt = 0x5c4a3b1e2d7f9081ULL;

template <typename Fn>
auto Stage(const std::string &stage, uint64_t seed, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError(stage + " (seed " + std::to_string(seed) + ")", e.what());
  }
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string JsonLines(const std::vector<ordered_json> &records) {
  std::string out;
  for (const ordered_json &r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void WriteImages(const fs::path &dir, const std::vector<Sample> &samples,
                 const std::vector<RasterImage> &images, int limit) {
  fs::create_directories(dir);
  size_t count = limit < 0 ? images.size() : std::min<size_t>(images.size(), limit);
  for (size_t i = 0; i < count; ++i) {
    WritePpm(images[i], dir / (samples[i].id + ".ppm"));
  }
}

SeedResult RunSeed(const RunConfig &cfg, uint64_t seed) {
  const bool write = !cfg.output_dir.empty();
  const fs::path dir = cfg.output_dir / ("seed-" + std::to_string(seed));
  if (write) fs::create_directories(dir);
  SeedResult result;
  result.seed = seed;

  std::vector<Sample> samples = Stage("gen-dataset", seed, [&] {
    DatasetConfig dataset = cfg.dataset;
    dataset.seed = seed;
    auto out = GenerateDataset(dataset);
    if (write) WriteJsonl(out, dir / "dataset.jsonl");
    return out;
  });
  spdlog::info("seed {}: generated {} samples", seed, samples.size());

  // Parse every prompt and score it against the reference tuples.
  std::vector<std::optional<StructuredInfo>> parsed = Stage("parse", seed, [&] {
    std::vector<std::optional<StructuredInfo>> out;
    std::vector<ordered_json> records;
    std::vector<TokenSequence> candidates, references;
    int64_t exact = 0;
    double rouge_sum = 0.0;
    for (const Sample &sample : samples) {
      ordered_json record;
      record["id"] = sample.id;
      std::string serialized;
      try {
        StructuredInfo info = ParsePrompt(sample.prompt);
        serialized = Serialize(info);
        exact += info == sample.reference;
        record["serialized"] = serialized;
        out.push_back(std::move(info));
      } catch (const ParseError &e) {
        spdlog::warn("seed {}: {}: {}", seed, sample.id, e.what());
        record["error"] = e.what();
        out.push_back(std::nullopt);
      }
      candidates.push_back(Tokenize(serialized));
      references.push_back(Tokenize(sample.serialized));
      rouge_sum += RougeLScore(candidates.back(), references.back()).f1;
      records.push_back(std::move(record));
    }
    const double n = static_cast<double>(samples.size());
    result.exact_match = static_cast<double>(exact) / n;
    result.bleu = CorpusBleu(candidates, references);
    result.rouge_l = rouge_sum / n;
    if (write) WriteText(dir / "parsed.jsonl", JsonLines(records));
    return out;
  });
  spdlog::info("seed {}: parser exact match {:.4f}, BLEU {:.4f}, ROUGE-L {:.4f}", seed,
               result.exact_match, result.bleu, result.rouge_l);

  Stage("augment", seed, [&] {
    std::vector<ordered_json> records;
    for (size_t i = 0; i < samples.size(); ++i) {
      if (!parsed[i]) continue;
      AugmentedPrompt augmented = Augment(samples[i].prompt, *parsed[i]);
      ordered_json record;
      record["id"] = samples[i].id;
      record["prompt"] = augmented.plain.text();
      record["augmented"] = augmented.combined;
      records.push_back(std::move(record));
    }
    if (write) WriteText(dir / "augmented.jsonl", JsonLines(records));
  });

  // Faithful and scrambled generation over the test split.
  std::vector<Sample> test;
  std::vector<Layout> faithful_layouts, scrambled_layouts;
  Stage("solve", seed, [&] {
    for (size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].split != Split::kTest) continue;
      // A prompt the parser rejected yields no layout; fall back to an empty
      // canvas so the judge scores it "no" everywhere.
      StructuredInfo info = parsed[i] ? *parsed[i] : samples[i].reference;
      Layout layout = SolveLayout(info, cfg.canvas, MixSeed(seed, i));
      if (!parsed[i]) layout.placements.clear();
      test.push_back(samples[i]);
      faithful_layouts.push_back(std::move(layout));
    }
  });
  Stage("scramble", seed, [&] {
    for (size_t i = 0; i < faithful_layouts.size(); ++i) {
      scrambled_layouts.push_back(
          ScrambleLayout(faithful_layouts[i], MixSeed(seed ^ kScrambleSalt, i)));
    }
  });
  if (write) {
    Stage("write-layouts", seed, [&] {
      std::vector<ordered_json> faithful, scrambled;
      for (size_t i = 0; i < test.size(); ++i) {
        ordered_json f = LayoutToJson(faithful_layouts[i]);
        ordered_json s = LayoutToJson(scrambled_layouts[i]);
        f["id"] = test[i].id;
        s["id"] = test[i].id;
        faithful.push_back(std::move(f));
        scrambled.push_back(std::move(s));
      }
      WriteText(dir / "layouts.jsonl", JsonLines(faithful));
      WriteText(dir / "scrambled_layouts.jsonl", JsonLines(scrambled));
    });
  }

  const Palette &palette = Palette::Default();
  auto render_and_judge = [&](const std::string &variant, const std::vector<Layout> &layouts) {
    std::vector<RasterImage> images = Stage("render-" + variant, seed, [&] {
      std::vector<RasterImage> out;
      out.reserve(layouts.size());
      for (const Layout &layout : layouts) out.push_back(Render(layout, palette));
      if (write) WriteImages(dir / "images" / variant, test, out, cfg.max_images);
      return out;
    });
    return Stage("judge-" + variant, seed, [&] {
      return EvaluateAlignment(test, images, palette, cfg.canvas.margin);
    });
  };
  result.faithful = render_and_judge("faithful", faithful_layouts);
  result.scrambled = render_and_judge("scrambled", scrambled_layouts);
  spdlog::info("seed {}: faithful spatial {:.3f}, scrambled spatial {:.3f}", seed,
               result.faithful.Spatial(), result.scrambled.Spatial());

  if (write) {
    Stage("report", seed, [&] {
      ordered_json report;
      report["seed"] = seed;
      report["parser"] = {{"exact_match", result.exact_match},
                          {"bleu", result.bleu},
                          {"rouge_l", result.rouge_l}};
      report["faithful"] = ReportToJson(MakeReport({result.faithful}));
      report["scrambled"] = ReportToJson(MakeReport({result.scrambled}));
      WriteText(dir / "report.json", report.dump(2) + "\n");
    });
  }
  return result;
}

// Pads cells to 18 display columns; multi-byte UTF-8 counts once.
std::string TableRow(const std::vector<std::string> &cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    out += cells[i];
    if (i + 1 == cells.size()) break;
    size_t columns = 0;
    for (unsigned char c : cells[i]) columns += (c & 0xC0) != 0x80;
    out.append(columns < 18 ? 18 - columns : 1, ' ');
  }
  return out + "\n";
}

std::string Row(const std::string &label, const AlignmentReport &report) {
  return TableRow(
      {label, report.spatial.Format(), report.color.Format(), report.shape.Format()});
}

}  // namespace

RunResult RunPipeline(const RunConfig &cfg) {
  if (cfg.seeds.empty()) throw PipelineError("config", "at least one seed is required");
  Stage("config", 0, [&] { CheckCanvas(cfg.canvas); });
  if (!cfg.output_dir.empty()) {
    Stage("config", 0, [&] { fs::create_directories(cfg.output_dir); });
  }

  RunResult result;
  for (uint64_t seed : cfg.seeds) result.seeds.push_back(RunSeed(cfg, seed));

  std::vector<double> exact, bleu, rouge;
  std::vector<AlignmentCounts> faithful, scrambled;
  for (const SeedResult &s : result.seeds) {
    exact.push_back(s.exact_match);
    bleu.push_back(s.bleu);
    rouge.push_back(s.rouge_l);
    faithful.push_back(s.faithful);
    scrambled.push_back(s.scrambled);
  }
  result.exact_match = AggregateSeeds(exact);
  result.bleu = AggregateSeeds(bleu);
  result.rouge_l = AggregateSeeds(rouge);
  result.faithful = MakeReport(faithful);
  result.scrambled = MakeReport(scrambled);

  if (!cfg.output_dir.empty()) {
    Stage("report", 0, [&] {
      WriteText(cfg.output_dir / "report.json", RunResultToJson(cfg, result).dump(2) + "\n");
      WriteText(cfg.output_dir / "report.txt", RunResultToText(result));
    });
  }
  return result;
}

ordered_json RunResultToJson(const RunConfig &cfg, const RunResult &result) {
  ordered_json json;
  json["seeds"] = cfg.seeds;
  json["config"] = {{"train", cfg.dataset.train},
                    {"val", cfg.dataset.val},
                    {"test", cfg.dataset.test},
                    {"canvas", {cfg.canvas.width, cfg.canvas.height, cfg.canvas.margin}}};
  json["parser"] = {{"exact_match", MetricToJson(result.exact_match)},
                    {"bleu", MetricToJson(result.bleu)},
                    {"rouge_l", MetricToJson(result.rouge_l)}};
  json["faithful"] = ReportToJson(result.faithful);
  json["scrambled"] = ReportToJson(result.scrambled);
  return json;
}

std::string RunResultToText(const RunResult &result) {
  std::string out = "Seeds:";
  for (const SeedResult &s : result.seeds) out += " " + std::to_string(s.seed);
  out += "\n\n" + TableRow({"Parser", "exact match", "BLEU", "ROUGE-L"});
  out += TableRow({"grammar", result.exact_match.Format(), result.bleu.Format(),
                   result.rouge_l.Format()});
  out += "\n" + TableRow({"Layout", "Spatial", "Color", "Shape"});
  out += Row("faithful", result.faithful);
  out += Row("scrambled", result.scrambled);
  return out;
}

}  // namespace structprompt
