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

#include "structprompt/render.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "structprompt/errors.h"

namespace structprompt {
namespace {

// Fills pixels of row y whose centers fall in [left, right).
void FillSpan(RasterImage &image, int y, double left, double right, Rgb color) {
  int x0 = std::max(0, static_cast<int>(std::ceil(left - 0.5)));
  int x1 = std::min(image.width, static_cast<int>(std::ceil(right - 0.5)));
  for (int x = x0; x < x1; ++x) image.Set(x, y, color);
}

void DrawShape(RasterImage &image, const Placement &p, Shape shape, Rgb color) {
  const double half = p.size / 2.0;
  const double top = p.cy - half;
  const double bottom = p.cy + half;
  int y0 = std::max(0, static_cast<int>(std::ceil(top - 0.5)));
  int y1 = std::min(image.height, static_cast<int>(std::ceil(bottom - 0.5)));
  for (int y = y0; y < y1; ++y) {
    const double yc = y + 0.5;
    switch (shape) {
      case Shape::kCube:
        FillSpan(image, y, p.cx - half, p.cx + half, color);
        break;
      case Shape::kSphere: {
        double dy = yc - p.cy;
        double reach_sq = half * half - dy * dy;
        if (reach_sq <= 0) break;
        // Strict inside test: (xc - cx)^2 < reach_sq.
        double reach = std::sqrt(reach_sq);
        int x0 = std::max(0, static_cast<int>(std::floor(p.cx - reach - 0.5)));
        int x1 = std::min(image.width - 1, static_cast<int>(std::ceil(p.cx + reach)));
        for (int x = x0; x <= x1; ++x) {
          double dx = x + 0.5 - p.cx;
          if (dx * dx + dy * dy < half * half) image.Set(x, y, color);
        }
        break;
      }
      case Shape::kTriangle: {
        // Apex at top-center, base spanning the bottom edge; the half-width
        // grows linearly from 0 at the apex to `half` at the base.
        double half_width = (yc - top) / 2.0;
        FillSpan(image, y, p.cx - half_width, p.cx + half_width, color);
        break;
      }
    }
  }
}

[[noreturn]] void Malformed(const std::string &message, size_t offset) {
  throw MalformedPPM(message, offset);
}

}  // namespace

RasterImage::RasterImage(int width, int height, Rgb fill) : width(width), height(height) {
  if (width <= 0 || height <= 0) throw Error("image dimensions must be positive");
  pixels.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < pixels.size(); i += 3) {
    std::copy(fill.begin(), fill.end(), pixels.begin() + i);
  }
}

Rgb RasterImage::At(int x, int y) const {
  size_t i = (static_cast<size_t>(y) * width + x) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RasterImage::Set(int x, int y, Rgb color) {
  size_t i = (static_cast<size_t>(y) * width + x) * 3;
  pixels[i] = color[0];
  pixels[i + 1] = color[1];
  pixels[i + 2] = color[2];
}

Palette::Palette()
    : colors_{{
          {255, 0, 0},      // red
          {0, 160, 0},      // green
          {0, 0, 255},      // blue
          {255, 255, 0},    // yellow
          {160, 0, 160},    // purple
          {160, 96, 0},     // brown
          {160, 160, 160},  // gray
          {0, 255, 255},    // cyan
      }},
      background_{255, 255, 255} {}

const Palette &Palette::Default() {
  static const Palette palette;
  return palette;
}

std::optional<Color> Palette::Lookup(Rgb rgb) const {
  for (Color c : kAllColors) {
    if (color(c) == rgb) return c;
  }
  return std::nullopt;
}

RasterImage Render(const Layout &layout, const Palette &palette) {
  RasterImage image(layout.canvas.width, layout.canvas.height, palette.background());
  for (const Placement &p : layout.placements) {
    const ObjectTuple *object = layout.source.Find(p.object_id);
    if (!object) throw UnplacedObject("placement for unknown object " + std::to_string(p.object_id));
    DrawShape(image, p, object->shape, palette.color(object->color));
  }
  return image;
}

std::string EncodePpm(const RasterImage &image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

RasterImage DecodePpm(std::string_view bytes) {
  size_t pos = 0;
  auto skip_space = [&] {
    size_t start = pos;
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos == start) Malformed("expected whitespace", pos);
  };
  auto read_number = [&]() -> long {
    size_t start = pos;
    long value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000) Malformed("header value too large", start);
      ++pos;
    }
    if (pos == start) Malformed("expected a decimal number", pos);
    return value;
  };

  if (bytes.substr(0, 2) != "P6") Malformed("missing P6 magic", 0);
  pos = 2;
  skip_space();
  size_t at = pos;
  long width = read_number();
  if (width <= 0) Malformed("width must be positive", at);
  skip_space();
  at = pos;
  long height = read_number();
  if (height <= 0) Malformed("height must be positive", at);
  skip_space();
  at = pos;
  if (read_number() != 255) Malformed("only maxval 255 is supported", at);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    Malformed("expected a single whitespace byte after maxval", pos);
  }
  ++pos;

  size_t expected = static_cast<size_t>(width) * height * 3;
  if (bytes.size() - pos < expected) Malformed("truncated pixel data", bytes.size());
  if (bytes.size() - pos > expected) Malformed("trailing bytes after pixel data", pos + expected);
  RasterImage image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  image.pixels.assign(bytes.begin() + pos, bytes.end());
  return image;
}

void WritePpm(const RasterImage &image, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::string bytes = EncodePpm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

RasterImage ReadPpm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DecodePpm(bytes);
}

}  // namespace structprompt
