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

#include "structprompt/layout.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "structprompt/errors.h"
#include "structprompt/random.h"

namespace structprompt {
namespace {

using nlohmann::ordered_json;

constexpr int kMinSize = 8;
constexpr int kJitterAttempts = 64;
constexpr int kScrambleAttempts = 10000;

// Directed "must be smaller than" edges on one axis: (a, b) means
// coord(b) > coord(a) + margin.
using Edges = std::vector<std::pair<int, int>>;

std::array<Edges, 2> AxisEdges(std::span<const RelationTuple> relations) {
  std::array<Edges, 2> edges;
  for (const RelationTuple &r : relations) {
    AxisSigns signs = RelationAxes(r.relation);
    if (signs.dx > 0) edges[0].push_back({r.object_id, r.subject_id});
    if (signs.dx < 0) edges[0].push_back({r.subject_id, r.object_id});
    if (signs.dy > 0) edges[1].push_back({r.object_id, r.subject_id});
    if (signs.dy < 0) edges[1].push_back({r.subject_id, r.object_id});
  }
  return edges;
}

// Returns a cycle (first id repeated at the end) or an empty vector.
std::vector<int> FindCycle(const Edges &edges) {
  std::map<int, std::vector<int>> adjacency;
  for (auto [from, to] : edges) {
    adjacency[from].push_back(to);
    adjacency[to];
  }
  enum class Mark { kNew, kActive, kDone };
  std::map<int, Mark> marks;
  std::vector<int> path;
  std::vector<int> cycle;

  std::function<bool(int)> visit = [&](int node) {
    marks[node] = Mark::kActive;
    path.push_back(node);
    for (int next : adjacency[node]) {
      if (marks[next] == Mark::kActive) {
        auto start = std::find(path.begin(), path.end(), next);
        cycle.assign(start, path.end());
        cycle.push_back(next);
        return true;
      }
      if (marks[next] == Mark::kNew && visit(next)) return true;
    }
    path.pop_back();
    marks[node] = Mark::kDone;
    return false;
  };
  for (const auto &[node, unused] : adjacency) {
    if (marks[node] == Mark::kNew && visit(node)) return cycle;
  }
  return {};
}

// Longest-path level of each node index in an acyclic graph over [0, n).
std::vector<int> Levels(int n, const Edges &edges) {
  std::vector<int> level(n, 0);
  // Bellman-Ford style relaxation; n is tiny and the graph is acyclic, so
  // n passes reach the fixpoint.
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (auto [from, to] : edges) {
      if (level[to] < level[from] + 1) {
        level[to] = level[from] + 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return level;
}

bool InsideCanvas(const Placement &p, const Canvas &canvas) {
  return 2 * p.cx - p.size >= 0 && 2 * p.cx + p.size <= 2 * canvas.width &&
         2 * p.cy - p.size >= 0 && 2 * p.cy + p.size <= 2 * canvas.height;
}

bool LayoutAcceptable(const Layout &layout) {
  for (const RelationTuple &r : layout.source.relations) {
    if (!RelationHolds(layout.placements, r, layout.canvas.margin)) return false;
  }
  const auto &ps = layout.placements;
  for (size_t i = 0; i < ps.size(); ++i) {
    if (!InsideCanvas(ps[i], layout.canvas)) return false;
    for (size_t j = i + 1; j < ps.size(); ++j) {
      if (!BoxesSeparated(ps[i], ps[j], kMinBoxGap)) return false;
    }
  }
  return true;
}

// Spacing between adjacent levels on one axis, or 0 if the levels cannot be
// fit on the axis with the given object size.
struct AxisPlan {
  int step = 0;
  int origin = 0;  // coordinate of level 0
  int slack = 0;   // free room for shifting the whole group (no anchor only)
};

AxisPlan PlanAxis(int extent, int size, int max_level, std::optional<int> anchor_level,
                  int preferred_step, int required_step) {
  AxisPlan plan;
  int half = size / 2;
  int center = extent / 2;
  int step = preferred_step;
  if (anchor_level) {
    int below = *anchor_level;
    int above = max_level - *anchor_level;
    if (below > 0) step = std::min(step, (center - half) / below);
    if (above > 0) step = std::min(step, (extent - center - half) / above);
    if (step < required_step) return {};
    plan.step = step;
    plan.origin = center - below * step;
    return plan;
  }
  if (max_level > 0) step = std::min(step, (extent - size) / max_level);
  if (step < required_step) return {};
  int span = max_level * step + size;
  plan.step = step;
  plan.slack = extent - span;
  plan.origin = plan.slack / 2 + half;
  return plan;
}

}  // namespace

void CheckCanvas(const Canvas &canvas) {
  if (canvas.width < 64 || canvas.height < 64) {
    throw Error("canvas must be at least 64x64");
  }
  if (canvas.margin <= 0 || 4 * canvas.margin >= std::min(canvas.width, canvas.height)) {
    throw Error("canvas margin must satisfy 0 < margin < min(width, height) / 4");
  }
}

const Placement *Layout::Find(int object_id) const {
  for (const Placement &p : placements) {
    if (p.object_id == object_id) return &p;
  }
  return nullptr;
}

AxisSigns RelationAxes(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf: return {-1, 0};
    case Relation::kRightOf: return {1, 0};
    case Relation::kAbove: return {0, -1};
    case Relation::kBelow: return {0, 1};
    case Relation::kInFrontOf: return {0, 1};
    case Relation::kBehind: return {0, -1};
    case Relation::kFrontLeftOf: return {-1, 1};
    case Relation::kFrontRightOf: return {1, 1};
    case Relation::kBehindLeftOf: return {-1, -1};
    case Relation::kBehindRightOf: return {1, -1};
  }
  return {};
}

bool RelationHoldsAt(double subject_x, double subject_y, double object_x,
                     double object_y, Relation relation, double margin) {
  AxisSigns signs = RelationAxes(relation);
  bool ok = true;
  if (signs.dx > 0) ok = ok && subject_x > object_x + margin;
  if (signs.dx < 0) ok = ok && subject_x < object_x - margin;
  if (signs.dy > 0) ok = ok && subject_y > object_y + margin;
  if (signs.dy < 0) ok = ok && subject_y < object_y - margin;
  return ok;
}

bool RelationHolds(std::span<const Placement> placements, const RelationTuple &tuple,
                   double margin) {
  const Placement *subject = nullptr;
  const Placement *object = nullptr;
  for (const Placement &p : placements) {
    if (p.object_id == tuple.subject_id) subject = &p;
    if (p.object_id == tuple.object_id) object = &p;
  }
  if (!subject || !object) {
    throw UnplacedObject("object " +
                         std::to_string(subject ? tuple.object_id : tuple.subject_id) +
                         " has no placement");
  }
  return RelationHoldsAt(subject->cx, subject->cy, object->cx, object->cy,
                         tuple.relation, margin);
}

std::vector<std::string> CheckLayoutGeometry(const Layout &layout) {
  std::vector<std::string> problems;
  std::set<int> placed;
  for (const Placement &p : layout.placements) {
    std::string tag = "placement " + std::to_string(p.object_id);
    if (!layout.source.Find(p.object_id)) problems.push_back(tag + " has no source object");
    if (!placed.insert(p.object_id).second) problems.push_back(tag + " is duplicated");
    if (p.size < kMinSize) problems.push_back(tag + " is smaller than 8 pixels");
    if (!InsideCanvas(p, layout.canvas)) problems.push_back(tag + " leaves the canvas");
  }
  for (const ObjectTuple &o : layout.source.objects) {
    if (!placed.count(o.id)) {
      problems.push_back("object " + std::to_string(o.id) + " is not placed");
    }
  }
  return problems;
}

bool BoxesSeparated(const Placement &a, const Placement &b, int gap) {
  // Doubled coordinates keep odd sizes exact.
  int reach = a.size + b.size + 2 * gap;
  return std::abs(2 * (a.cx - b.cx)) >= reach || std::abs(2 * (a.cy - b.cy)) >= reach;
}

std::string Inconsistency::ToString() const {
  std::string out = axis == Axis::kX ? "x-axis cycle:" : "y-axis cycle:";
  for (size_t i = 0; i < cycle.size(); ++i) {
    out += (i == 0 ? " " : " -> ") + std::to_string(cycle[i]);
  }
  return out;
}

std::optional<Inconsistency> CheckConsistency(std::span<const RelationTuple> relations) {
  auto edges = AxisEdges(relations);
  for (Axis axis : {Axis::kX, Axis::kY}) {
    auto cycle = FindCycle(edges[axis == Axis::kX ? 0 : 1]);
    if (!cycle.empty()) return Inconsistency{axis, std::move(cycle)};
  }
  return std::nullopt;
}

Layout SolveLayout(const StructuredInfo &info, const Canvas &canvas, uint64_t seed) {
  CheckCanvas(canvas);
  if (auto violations = Validate(info); !violations.empty()) {
    throw InvalidStructuredInfo(std::move(violations));
  }
  if (auto bad = CheckConsistency(info.relations)) {
    throw InconsistentRelations(bad->ToString());
  }

  Rng rng(seed);
  const int n = static_cast<int>(info.objects.size());
  // Work on indices: object id k lives at index k - 1.
  auto edges = AxisEdges(info.relations);
  for (auto &axis_edges : edges) {
    for (auto &[from, to] : axis_edges) {
      --from;
      --to;
    }
  }

  // Objects on the same level of both axes would share a center; order one
  // such pair along a randomly chosen axis. Equal longest-path levels mean no
  // path joins the pair on that axis, so the new edge keeps the graph acyclic.
  std::array<std::vector<int>, 2> levels;
  for (;;) {
    levels = {Levels(n, edges[0]), Levels(n, edges[1])};
    bool tied = false;
    for (int a = 0; a < n && !tied; ++a) {
      for (int b = a + 1; b < n && !tied; ++b) {
        if (levels[0][a] == levels[0][b] && levels[1][a] == levels[1][b]) {
          int axis = UniformInt(rng, 0, 1);
          if (UniformInt(rng, 0, 1) == 0) {
            edges[axis].push_back({a, b});
          } else {
            edges[axis].push_back({b, a});
          }
          tied = true;
        }
      }
    }
    if (!tied) break;
  }

  std::optional<int> anchor;
  for (int i = 0; i < n; ++i) {
    if (info.objects[i].anchor) anchor = i;
  }

  const int extents[2] = {canvas.width, canvas.height};
  int size = std::max(kMinSize, std::min(canvas.width, canvas.height) / 8 / 2 * 2);
  std::array<AxisPlan, 2> plans;
  for (;; size -= 2) {
    if (size < kMinSize) {
      throw Unsatisfiable("canvas too small for the requested relations");
    }
    int required = std::max(size + kMinBoxGap, canvas.margin + 1);
    int preferred = std::max(required, size + 2 * canvas.margin);
    bool fits = true;
    for (int axis = 0; axis < 2; ++axis) {
      int max_level = *std::max_element(levels[axis].begin(), levels[axis].end());
      std::optional<int> anchor_level;
      if (anchor) anchor_level = levels[axis][*anchor];
      plans[axis] = PlanAxis(extents[axis], size, max_level, anchor_level, preferred,
                             required);
      fits = fits && plans[axis].step > 0;
    }
    if (fits) break;
  }

  Layout base;
  base.canvas = canvas;
  base.source = info;
  std::array<int, 2> shift = {0, 0};
  for (int axis = 0; axis < 2; ++axis) {
    int slack = plans[axis].slack;
    if (slack > 0) shift[axis] = UniformInt(rng, -slack / 2, slack - slack / 2);
  }
  for (int i = 0; i < n; ++i) {
    Placement p;
    p.object_id = info.objects[i].id;
    p.size = size;
    p.cx = plans[0].origin + shift[0] + levels[0][i] * plans[0].step;
    p.cy = plans[1].origin + shift[1] + levels[1][i] * plans[1].step;
    base.placements.push_back(p);
  }
  if (!LayoutAcceptable(base)) {
    throw Unsatisfiable("no placement satisfies the relations on this canvas");
  }

  // Jitter every free object by at most half the step surplus so that
  // level order and box separation survive; reject anything else.
  int required = std::max(size + kMinBoxGap, canvas.margin + 1);
  int jitter[2] = {(plans[0].step - required) / 2, (plans[1].step - required) / 2};
  for (int attempt = 0; attempt < kJitterAttempts; ++attempt) {
    Layout candidate = base;
    for (int i = 0; i < n; ++i) {
      if (anchor && *anchor == i) continue;
      candidate.placements[i].cx += UniformInt(rng, -jitter[0], jitter[0]);
      candidate.placements[i].cy += UniformInt(rng, -jitter[1], jitter[1]);
    }
    if (LayoutAcceptable(candidate)) return candidate;
  }
  return base;
}

Layout ScrambleLayout(const Layout &layout, uint64_t seed) {
  CheckCanvas(layout.canvas);
  Rng rng(seed);
  Layout out = layout;
  for (int attempt = 0; attempt < kScrambleAttempts; ++attempt) {
    bool fits = true;
    for (Placement &p : out.placements) {
      int low = (p.size + 1) / 2;
      if (layout.canvas.width - low < low || layout.canvas.height - low < low) {
        throw Unsatisfiable("object larger than the canvas");
      }
      p.cx = UniformInt(rng, low, layout.canvas.width - low);
      p.cy = UniformInt(rng, low, layout.canvas.height - low);
    }
    for (size_t i = 0; i < out.placements.size() && fits; ++i) {
      for (size_t j = i + 1; j < out.placements.size() && fits; ++j) {
        fits = BoxesSeparated(out.placements[i], out.placements[j], kMinBoxGap);
      }
    }
    if (fits) return out;
  }
  throw Unsatisfiable("could not find a non-overlapping random placement");
}

ordered_json LayoutToJson(const Layout &layout) {
  ordered_json placements = ordered_json::array();
  for (const Placement &p : layout.placements) {
    placements.push_back({p.object_id, p.cx, p.cy, p.size});
  }
  ordered_json json;
  json["canvas"] = {layout.canvas.width, layout.canvas.height, layout.canvas.margin};
  json["placements"] = std::move(placements);
  json["source"] = Serialize(layout.source);
  return json;
}

Layout LayoutFromJson(const ordered_json &json) {
  auto fail = [](const std::string &message) -> Layout {
    throw Error("layout JSON: " + message);
  };
  if (!json.is_object()) return fail("not an object");
  Layout layout;
  try {
    const auto &canvas = json.at("canvas");
    if (!canvas.is_array() || canvas.size() != 3) return fail("canvas must be [w, h, margin]");
    layout.canvas = {canvas[0].get<int>(), canvas[1].get<int>(), canvas[2].get<int>()};
    for (const auto &entry : json.at("placements")) {
      if (!entry.is_array() || entry.size() != 4) {
        return fail("placements must be [id, cx, cy, size]");
      }
      layout.placements.push_back({entry[0].get<int>(), entry[1].get<int>(),
                                   entry[2].get<int>(), entry[3].get<int>()});
    }
    layout.source = ParseSerialized(json.at("source").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    return fail(e.what());
  }
  CheckCanvas(layout.canvas);
  if (auto problems = CheckLayoutGeometry(layout); !problems.empty()) {
    return fail(problems.front());
  }
  return layout;
}

}  // namespace structprompt
