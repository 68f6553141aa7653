// Copyright 2026 The specmap Authors. All Rights Reserved.
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
#include "specmap/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "io_util.hpp"
#include "specmap/error.hpp"
#include "specmap/rng.hpp"
#include "text.hpp"

namespace specmap {

void SceneSpec::validate() const {
  if (rows == 0 || cols == 0 || bands == 0) {
    throw ValidationError(fmt::format(
        "scene dimensions must be positive, got {}x{}x{}", rows, cols, bands));
  }
  if (classes.empty()) throw ValidationError("scene has no classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (c.info.id != static_cast<int>(i + 1)) {
      throw ValidationError("scene class ids must be consecutive from 1");
    }
    const auto& r = c.region;
    if (r.row0 > r.row1 || r.col0 > r.col1 || r.row1 >= rows || r.col1 >= cols) {
      throw ValidationError(fmt::format(
          "scene class {}: rect ({}, {})-({}, {}) is not inside the {}x{} "
          "raster",
          c.info.id, r.row0, r.col0, r.row1, r.col1, rows, cols));
    }
    if (static_cast<std::size_t>(c.mean.size()) != bands ||
        static_cast<std::size_t>(c.stddev.size()) != bands) {
      throw ValidationError(fmt::format(
          "scene class {}: mean/stddev need {} values", c.info.id, bands));
    }
    if (!c.mean.allFinite() || !c.stddev.allFinite() ||
        (c.stddev.array() < 0.0).any()) {
      throw ValidationError(fmt::format(
          "scene class {}: stddev must be finite and non-negative", c.info.id));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (classes[j].region.overlaps(r)) {
        throw ValidationError(fmt::format(
            "scene classes {} and {} have overlapping regions",
            classes[j].info.id, c.info.id));
      }
    }
  }
}

SceneSpec parse_scene_spec(std::istream& in) {
  SceneSpec spec;
  bool have_scene = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = text::split(text::trim(text::strip_comment(line)));
    if (tokens.empty()) continue;
    const auto what = fmt::format("scene spec line {}", line_no);
    if (tokens[0] == "scene") {
      if (have_scene || tokens.size() != 5) {
        throw ParseError(fmt::format(
            "{}: expected a single 'scene <rows> <cols> <bands> <seed>'", what));
      }
      spec.rows = text::to_uint(tokens[1], what);
      spec.cols = text::to_uint(tokens[2], what);
      spec.bands = text::to_uint(tokens[3], what);
      spec.seed = text::to_uint(tokens[4], what);
      have_scene = true;
      continue;
    }
    if (tokens[0] != "class") {
      throw ParseError(fmt::format("{}: unknown directive '{}'", what, tokens[0]));
    }
    if (!have_scene) {
      throw ParseError(fmt::format("{}: 'class' before the 'scene' line", what));
    }
    const std::size_t b = spec.bands;
    if (tokens.size() != 13 + 2 * b || tokens[6] != "rect" ||
        tokens[11] != "mean" || tokens[12 + b] != "stddev") {
      throw ParseError(fmt::format(
          "{}: expected 'class <id> <name> <r> <g> <b> rect <r0> <c0> <r1> "
          "<c1> mean <{} values> stddev <{} values>'",
          what, b, b));
    }
    SceneClass c;
    c.info.id = static_cast<int>(text::to_int(tokens[1], what));
    c.info.name = std::string(tokens[2]);
    std::uint64_t rgb[3];
    for (int i = 0; i < 3; ++i) {
      rgb[i] = text::to_uint(tokens[3 + i], what);
      if (rgb[i] > 255) throw ParseError(fmt::format("{}: color exceeds 255", what));
    }
    c.info.color = {static_cast<std::uint8_t>(rgb[0]),
                    static_cast<std::uint8_t>(rgb[1]),
                    static_cast<std::uint8_t>(rgb[2])};
    c.region = {text::to_uint(tokens[7], what), text::to_uint(tokens[8], what),
                text::to_uint(tokens[9], what), text::to_uint(tokens[10], what)};
    c.mean.resize(static_cast<Eigen::Index>(b));
    c.stddev.resize(static_cast<Eigen::Index>(b));
    for (std::size_t i = 0; i < b; ++i) {
      c.mean[static_cast<Eigen::Index>(i)] = text::to_double(tokens[12 + i], what);
      c.stddev[static_cast<Eigen::Index>(i)] =
          text::to_double(tokens[13 + b + i], what);
    }
    spec.classes.push_back(std::move(c));
  }
  if (!have_scene) throw ParseError("scene spec: missing 'scene' line");
  spec.validate();
  return spec;
}

SceneSpec read_scene_spec(const std::filesystem::path& path) {
  auto in = io::open_in(path);
  return parse_scene_spec(in);
}

std::string format_scene_spec(const SceneSpec& spec) {
  std::string out = fmt::format("scene {} {} {} {}\n", spec.rows, spec.cols,
                                spec.bands, spec.seed);
  for (const auto& c : spec.classes) {
    out += fmt::format("class {} {} {} {} {} rect {} {} {} {} mean", c.info.id,
                       c.info.name, c.info.color.r, c.info.color.g,
                       c.info.color.b, c.region.row0, c.region.col0,
                       c.region.row1, c.region.col1);
    for (Eigen::Index i = 0; i < c.mean.size(); ++i) {
      out += ' ' + text::format_g10(c.mean[i]);
    }
    out += " stddev";
    for (Eigen::Index i = 0; i < c.stddev.size(); ++i) {
      out += ' ' + text::format_g10(c.stddev[i]);
    }
    out += '\n';
  }
  return out;
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Scene scene{BandStack(spec.bands, spec.rows, spec.cols), {}};
  Rng rng(spec.seed);
  for (const auto& c : spec.classes) {
    scene.truth.classes.push_back(c.info);
    auto& members = scene.truth.members.emplace_back();
    members.reserve(c.region.area());
    for (std::size_t r = c.region.row0; r <= c.region.row1; ++r) {
      for (std::size_t col = c.region.col0; col <= c.region.col1; ++col) {
        members.push_back({r, col});
        for (std::size_t b = 0; b < spec.bands; ++b) {
          const auto bi = static_cast<Eigen::Index>(b);
          const double v = rng.normal(c.mean[bi], c.stddev[bi]);
          scene.image.at(b, r, col) =
              static_cast<float>(std::clamp(std::nearbyint(v), 0.0, 255.0));
        }
      }
    }
  }
  return scene;
}

SceneFiles write_scene(const Scene& scene, const SceneSpec& spec,
                       const std::filesystem::path& out_prefix) {
  const auto with = [&](std::string_view ext) {
    auto p = out_prefix;
    p += ext;
    return p;
  };
  SceneFiles files;
  files.image = with(".bsq");
  files.layout = with(".hdr");
  files.truth = with(".roi");

  const auto layout = plain_layout(scene.image, 1);
  write_bsq(files.image, scene.image, layout);
  const std::vector<std::string> comments = {
      "synthetic scene",
      fmt::format("seed: {}", spec.seed),
      "rng: mt19937_64, Box-Muller normal deviates, rounded and clamped to "
      "[0, 255]"};
  write_layout(files.layout, layout, comments);

  std::string roi;
  for (const auto& c : spec.classes) {
    roi += fmt::format("class {} {} {} {} {}\n", c.info.id, c.info.name,
                       c.info.color.r, c.info.color.g, c.info.color.b);
    roi += fmt::format("rect {} {} {} {}\n", c.region.row0, c.region.col0,
                       c.region.row1, c.region.col1);
  }
  io::write_text(files.truth, roi);

  ClassificationMap truth_map;
  truth_map.rows = spec.rows;
  truth_map.cols = spec.cols;
  truth_map.labels.assign(spec.rows * spec.cols, kUnclassified);
  for (std::size_t i = 0; i < scene.truth.class_count(); ++i) {
    truth_map.legend.push_back(scene.truth.classes[i]);
    for (const auto& p : scene.truth.members[i]) {
      truth_map.at(p.row, p.col) = static_cast<Label>(i + 1);
    }
  }
  files.truth_map = write_map(truth_map, out_prefix);
  return files;
}

}  // namespace specmap
