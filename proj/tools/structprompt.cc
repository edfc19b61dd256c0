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

// structprompt: command-line front end for the structured-prompt pipeline.
//
//   structprompt gen-dataset --train 500 --val 100 --test 1000 --seed 42 --out data.jsonl
//   structprompt parse "Add a purple cube at the center. Add a brown cube in front of it on the right."
//   structprompt augment --dataset data.jsonl --out augmented.jsonl
//   structprompt render --prompt "..." --emit-layout l.json --out img.ppm
//   structprompt render --layout l.json --out img.ppm
//   structprompt judge --dataset data.jsonl --images dir/ --margin 10
//   structprompt metrics --pred p.jsonl --ref r.jsonl --metric bleu|rouge|ce
//   structprompt is --probs m.csv --splits 1
//   structprompt run --seeds 40,41,42 --canvas 512x512 --margin 10 --out runs/r1
//
// Log verbosity comes from STRUCTPROMPT_LOG (trace, debug, info, warn, error,
// off); the default is warn.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "structprompt/dataset.h"
#include "structprompt/errors.h"
#include "structprompt/judge.h"
#include "structprompt/layout.h"
#include "structprompt/metrics.h"
#include "structprompt/parser.h"
#include "structprompt/pipeline.h"
#include "structprompt/render.h"
#include "structprompt/tuple.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace structprompt;

namespace {

void ConfigureLogging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char *level = std::getenv("STRUCTPROMPT_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void WriteFile(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<ordered_json> ReadJsonRecords(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  std::vector<ordered_json> records;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(ordered_json::parse(line));
    } catch (const nlohmann::json::parse_error &e) {
      throw SchemaError(e.what(), number);
    }
  }
  return records;
}

Canvas ParseCanvas(const std::string &spec, int margin) {
  Canvas canvas;
  canvas.margin = margin;
  if (std::sscanf(spec.c_str(), "%dx%d", &canvas.width, &canvas.height) != 2) {
    throw Error("canvas must look like 512x512");
  }
  CheckCanvas(canvas);
  return canvas;
}

template <typename T, typename Lookup>
std::vector<T> ParseVocabulary(const std::vector<std::string> &names, Lookup lookup,
                               const char *kind) {
  std::vector<T> out;
  for (const std::string &name : names) {
    auto value = lookup(name);
    if (!value) throw Error(std::string("unknown ") + kind + " '" + name + "'");
    out.push_back(*value);
  }
  return out;
}

ordered_json InfoToJson(const StructuredInfo &info) {
  Sample sample;
  sample.reference = info;
  ordered_json full = SampleToJson(sample);
  ordered_json json;
  json["objects"] = full["objects"];
  json["relations"] = full["relations"];
  json["serialized"] = Serialize(info);
  return json;
}

std::string Text(const ordered_json &record, const char *key, size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw SchemaError(std::string("missing string field '") + key + "'", line);
  }
  return it->get<std::string>();
}

}  // namespace

int main(int argc, char **argv) {
  ConfigureLogging();
  CLI::App app{"Structured-prompt toolkit: parse, augment, lay out, render, judge, score"};
  app.require_subcommand(1);

  // gen-dataset
  auto *gen = app.add_subcommand("gen-dataset", "Generate prompt/tuple samples as JSONL");
  DatasetConfig dataset;
  std::string gen_out;
  std::vector<std::string> colors, shapes, relations;
  gen->add_option("--train", dataset.train, "Training samples")->capture_default_str();
  gen->add_option("--val", dataset.val, "Validation samples")->capture_default_str();
  gen->add_option("--test", dataset.test, "Test samples")->capture_default_str();
  gen->add_option("--seed", dataset.seed, "Generator seed")->capture_default_str();
  gen->add_option("--colors", colors, "Restrict colors")->delimiter(',');
  gen->add_option("--shapes", shapes, "Restrict shapes")->delimiter(',');
  gen->add_option("--relations", relations, "Restrict relations (tokens)")->delimiter(',');
  gen->add_option("--out", gen_out, "Output JSONL")->required();

  // parse
  auto *parse = app.add_subcommand("parse", "Parse a prompt into tuples");
  std::string parse_text;
  bool parse_json = false;
  parse->add_option("text", parse_text, "Prompt text")->required();
  parse->add_flag("--json", parse_json, "Print objects/relations as JSON");

  // augment
  auto *augment = app.add_subcommand("augment", "Append serialized tuples to prompts");
  std::string augment_prompt, augment_dataset, augment_out;
  augment->add_option("--prompt", augment_prompt, "Single prompt");
  augment->add_option("--dataset", augment_dataset, "Dataset JSONL");
  augment->add_option("--out", augment_out, "Output JSONL (with --dataset)");

  // render
  auto *render = app.add_subcommand("render", "Render a layout to a PPM image");
  std::string render_layout, render_prompt, render_out, render_emit, render_canvas = "512x512";
  int render_margin = 10;
  uint64_t render_seed = 0;
  bool render_scramble = false;
  render->add_option("--layout", render_layout, "Layout JSON");
  render->add_option("--prompt", render_prompt, "Prompt to parse and lay out");
  render->add_option("--canvas", render_canvas, "Canvas WxH")->capture_default_str();
  render->add_option("--margin", render_margin, "Relation margin")->capture_default_str();
  render->add_option("--seed", render_seed, "Solver seed")->capture_default_str();
  render->add_flag("--scramble", render_scramble, "Randomize positions ignoring relations");
  render->add_option("--emit-layout", render_emit, "Write the solved layout JSON");
  render->add_option("--out", render_out, "Output PPM")->required();

  // judge
  auto *judge = app.add_subcommand("judge", "Judge rendered images against a dataset");
  std::string judge_dataset, judge_images, judge_split = "test", judge_out;
  double judge_margin = 10;
  judge->add_option("--dataset", judge_dataset, "Dataset JSONL")->required();
  judge->add_option("--images", judge_images, "Directory of <id>.ppm")->required();
  judge->add_option("--margin", judge_margin, "Relation margin")->capture_default_str();
  judge->add_option("--split", judge_split, "train, val, test or all")->capture_default_str();
  judge->add_option("--out", judge_out, "Write report JSON here as well");

  // metrics
  auto *metrics = app.add_subcommand("metrics", "Score predicted tuples against references");
  std::string metrics_pred, metrics_ref, metric_name;
  metrics->add_option("--pred", metrics_pred, "Predictions JSONL")->required();
  metrics->add_option("--ref", metrics_ref, "References JSONL")->required();
  metrics->add_option("--metric", metric_name, "bleu, rouge or ce")
      ->required()
      ->check(CLI::IsMember({"bleu", "rouge", "ce"}));

  // is
  auto *is = app.add_subcommand("is", "Inception Score from class probabilities");
  std::string is_probs;
  int is_splits = 1;
  is->add_option("--probs", is_probs, "CSV, one row per image")->required();
  is->add_option("--splits", is_splits, "Number of splits")->capture_default_str();

  // run
  auto *run = app.add_subcommand("run", "Run the full pipeline over several seeds");
  RunConfig run_cfg;
  std::string run_canvas = "512x512", run_out;
  int run_margin = 10;
  run->add_option("--train", run_cfg.dataset.train)->capture_default_str();
  run->add_option("--val", run_cfg.dataset.val)->capture_default_str();
  run->add_option("--test", run_cfg.dataset.test)->capture_default_str();
  run->add_option("--seeds", run_cfg.seeds, "Comma-separated seeds")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--canvas", run_canvas, "Canvas WxH")->capture_default_str();
  run->add_option("--margin", run_margin, "Relation margin")->capture_default_str();
  run->add_option("--max-images", run_cfg.max_images,
                  "PPMs written per seed and variant (-1 for all)")
      ->capture_default_str();
  run->add_option("--out", run_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!colors.empty()) dataset.colors = ParseVocabulary<Color>(colors, ColorFromName, "color");
      if (!shapes.empty()) dataset.shapes = ParseVocabulary<Shape>(shapes, ShapeFromName, "shape");
      if (!relations.empty()) {
        dataset.relations = ParseVocabulary<Relation>(relations, RelationFromToken, "relation");
      }
      auto samples = GenerateDataset(dataset);
      WriteJsonl(samples, gen_out);
      std::cout << "wrote " << samples.size() << " samples to " << gen_out << "\n";
    } else if (*parse) {
      try {
        StructuredInfo info = ParsePrompt(Prompt(parse_text));
        if (parse_json) {
          std::cout << InfoToJson(info).dump() << "\n";
        } else {
          std::cout << Serialize(info) << "\n";
        }
      } catch (const ParseError &e) {
        for (const ParseDiagnostic &d : e.diagnostics()) {
          std::cerr << "clause " << d.clause_index << " [" << d.begin << ", " << d.end
                    << ") " << DiagnosticCategoryName(d.category) << ": " << d.message
                    << "\n";
        }
        return 1;
      }
    } else if (*augment) {
      if (!augment_prompt.empty() == !augment_dataset.empty()) {
        throw Error("augment needs exactly one of --prompt or --dataset");
      }
      if (!augment_prompt.empty()) {
        Prompt prompt(augment_prompt);
        std::cout << Augment(prompt, ParsePrompt(prompt)).combined << "\n";
      } else {
        std::string out;
        for (const Sample &sample : ReadJsonl(augment_dataset)) {
          AugmentedPrompt augmented = Augment(sample.prompt, ParsePrompt(sample.prompt));
          ordered_json record;
          record["id"] = sample.id;
          record["prompt"] = augmented.plain.text();
          record["augmented"] = augmented.combined;
          out += record.dump() + "\n";
        }
        if (augment_out.empty()) {
          std::cout << out;
        } else {
          WriteFile(augment_out, out);
        }
      }
    } else if (*render) {
      if (render_layout.empty() == render_prompt.empty()) {
        throw Error("render needs exactly one of --layout or --prompt");
      }
      Layout layout;
      if (!render_layout.empty()) {
        layout = LayoutFromJson(ordered_json::parse(ReadFile(render_layout)));
      } else {
        Canvas canvas = ParseCanvas(render_canvas, render_margin);
        layout = SolveLayout(ParsePrompt(Prompt(render_prompt)), canvas, render_seed);
      }
      if (render_scramble) layout = ScrambleLayout(layout, render_seed);
      if (!render_emit.empty()) WriteFile(render_emit, LayoutToJson(layout).dump() + "\n");
      WritePpm(Render(layout, Palette::Default()), render_out);
    } else if (*judge) {
      std::vector<Sample> selected;
      std::vector<RasterImage> images;
      for (Sample &sample : ReadJsonl(judge_dataset)) {
        if (judge_split != "all" && SplitName(sample.split) != judge_split) continue;
        fs::path image_path = fs::path(judge_images) / (sample.id + ".ppm");
        if (!fs::exists(image_path)) {
          throw CountMismatch("no image for sample " + sample.id + " at " +
                              image_path.string());
        }
        images.push_back(ReadPpm(image_path));
        selected.push_back(std::move(sample));
      }
      AlignmentCounts counts =
          EvaluateAlignment(selected, images, Palette::Default(), judge_margin);
      std::string report = ReportToJson(MakeReport({counts})).dump(2) + "\n";
      std::cout << report;
      if (!judge_out.empty()) WriteFile(judge_out, report);
    } else if (*metrics) {
      auto predictions = ReadJsonRecords(metrics_pred);
      auto references = ReadJsonRecords(metrics_ref);
      std::map<std::string, std::pair<ordered_json, size_t>> by_id;
      for (size_t i = 0; i < predictions.size(); ++i) {
        by_id[Text(predictions[i], "id", i + 1)] = {predictions[i], i + 1};
      }
      std::vector<double> values;
      std::vector<TokenSequence> candidates, gold;
      for (size_t i = 0; i < references.size(); ++i) {
        std::string id = Text(references[i], "id", i + 1);
        auto it = by_id.find(id);
        if (it == by_id.end()) throw CountMismatch("no prediction for reference " + id);
        const auto &[pred, line] = it->second;
        TokenSequence ref_tokens = Tokenize(Text(references[i], "serialized", i + 1));
        if (metric_name == "ce") {
          DistributionSequence dist;
          try {
            dist.vocabulary = pred.at("vocab").get<std::vector<std::string>>();
            dist.rows = pred.at("probs").get<std::vector<std::vector<double>>>();
          } catch (const nlohmann::json::exception &e) {
            throw SchemaError(e.what(), line);
          }
          values.push_back(TokenCrossEntropy(ref_tokens, dist).value);
        } else {
          TokenSequence cand_tokens = Tokenize(Text(pred, "serialized", line));
          if (metric_name == "rouge") values.push_back(RougeLScore(cand_tokens, ref_tokens).f1);
          candidates.push_back(std::move(cand_tokens));
          gold.push_back(std::move(ref_tokens));
        }
      }
      ordered_json out;
      out["metric"] = metric_name;
      out["n"] = references.size();
      if (metric_name == "bleu") {
        out["value"] = CorpusBleu(candidates, gold);
      } else {
        out["value"] = AggregateSeeds(values).mean;
      }
      std::cout << out.dump() << "\n";
    } else if (*is) {
      MetricValue score = InceptionScore(ParseProbCsv(ReadFile(is_probs)), is_splits);
      ordered_json out = MetricToJson(score);
      out["formatted"] = score.Format(2);
      std::cout << out.dump() << "\n";
    } else if (*run) {
      run_cfg.canvas = ParseCanvas(run_canvas, run_margin);
      run_cfg.output_dir = run_out;
      RunResult result = RunPipeline(run_cfg);
      std::cout << RunResultToText(result);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
