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

#ifndef STRUCTPROMPT_RENDER_H_
#define STRUCTPROMPT_RENDER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "structprompt/layout.h"
#include "structprompt/tuple.h"

namespace structprompt {

using Rgb = std::array<uint8_t, 3>;

struct RasterImage {
  int width = 0;
  int height = 0;
  // Row-major RGB triplets, width * height * 3 bytes.
  std::vector<uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill);

  Rgb At(int x, int y) const;
  void Set(int x, int y, Rgb color);
  bool operator==(const RasterImage &) const = default;
};

class Palette {
 public:
  // The fixed table: every channel value is one of {0, 96, 160, 255}, so any
  // two entries that differ in a channel differ there by at least 64.
  static const Palette &Default();

  Rgb color(Color c) const { return colors_[static_cast<size_t>(c)]; }
  Rgb background() const { return background_; }

  // Exact reverse lookup; nullopt for the background or any other value.
  std::optional<Color> Lookup(Rgb rgb) const;

 private:
  Palette();

  std::array<Rgb, kAllColors.size()> colors_;
  Rgb background_;
};

// Rasterizes squares (cube), circles (sphere) and upward triangles with the
// pixel-center rule: pixel (x, y) is filled iff (x + 0.5, y + 0.5) lies in
// the shape, with half-open [min, max) extents. No anti-aliasing.
RasterImage Render(const Layout &layout, const Palette &palette);

// Binary P6: "P6\n<w> <h>\n255\n" followed by raw RGB.
std::string EncodePpm(const RasterImage &image);
// Throws MalformedPPM with the byte offset of the problem.
RasterImage DecodePpm(std::string_view bytes);

// Throws IoError (and MalformedPPM when reading).
void WritePpm(const RasterImage &image, const std::filesystem::path &path);
RasterImage ReadPpm(const std::filesystem::path &path);

}  // namespace structprompt

#endif  // STRUCTPROMPT_RENDER_H_
