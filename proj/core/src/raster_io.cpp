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
#include "specmap/raster_io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

#include "io_util.hpp"
#include "specmap/error.hpp"
#include "text.hpp"

namespace specmap {

namespace io {

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace io

namespace {

constexpr std::array<std::string_view, 7> kLayoutKeys = {
    "file_header_bytes", "line_prefix_bytes", "line_suffix_bytes",
    "scan_lines",        "pixels_per_line",   "bands",
    "bytes_per_pixel"};

std::string line_context(std::size_t line_no) {
  return fmt::format("line {}", line_no);
}

}  // namespace

RasterLayout parse_layout(std::istream& in, std::vector<std::string>* warnings) {
  std::map<std::string, std::uint64_t, std::less<>> numeric;
  std::optional<ByteOrder> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(text::strip_comment(line));
    if (body.empty()) continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(fmt::format("layout {}: expected 'key: value', got '{}'",
                                   line_context(line_no), body));
    }
    const std::string key(text::trim(body.substr(0, colon)));
    const auto value = text::trim(body.substr(colon + 1));
    if (key == "byte_order") {
      if (value == "big") {
        order = ByteOrder::kBig;
      } else if (value == "little") {
        order = ByteOrder::kLittle;
      } else {
        throw ParseError(fmt::format(
            "layout {}: byte_order must be 'big' or 'little', got '{}'",
            line_context(line_no), value));
      }
      continue;
    }
    bool known = false;
    for (auto k : kLayoutKeys) known = known || k == key;
    if (!known) {
      if (warnings) {
        warnings->push_back(fmt::format("layout {}: ignoring unknown key '{}'",
                                        line_context(line_no), key));
      }
      continue;
    }
    if (numeric.contains(key)) {
      throw ParseError(fmt::format("layout {}: duplicate key '{}'",
                                   line_context(line_no), key));
    }
    numeric[key] = text::to_uint(value, fmt::format("layout key '{}'", key));
  }

  for (auto k : kLayoutKeys) {
    if (!numeric.contains(k)) {
      throw ParseError(fmt::format("layout: missing key '{}'", k));
    }
  }
  const auto get = [&](std::string_view k) { return numeric.find(k)->second; };
  RasterLayout layout;
  layout.file_header_bytes = get("file_header_bytes");
  layout.line_prefix_bytes = get("line_prefix_bytes");
  layout.line_suffix_bytes = get("line_suffix_bytes");
  layout.scan_lines = get("scan_lines");
  layout.pixels_per_line = get("pixels_per_line");
  layout.bands = get("bands");
  const auto bpp = get("bytes_per_pixel");
  if (bpp != 1 && bpp != 2) {
    throw ParseError(
        fmt::format("layout: bytes_per_pixel must be 1 or 2, got {}", bpp));
  }
  layout.bytes_per_pixel = static_cast<unsigned>(bpp);
  layout.byte_order = order.value_or(ByteOrder::kBig);
  try {
    layout.validate();
  } catch (const ValidationError& e) {
    throw ParseError(fmt::format("layout: {}", e.what()));
  }
  return layout;
}

RasterLayout read_layout(const std::filesystem::path& path) {
  auto in = io::open_in(path);
  std::vector<std::string> warnings;
  auto layout = parse_layout(in, &warnings);
  for (const auto& w : warnings) std::clog << path.string() << ": " << w << '\n';
  return layout;
}

void write_layout(const std::filesystem::path& path, const RasterLayout& layout,
                  std::span<const std::string> comments) {
  std::string out;
  for (const auto& c : comments) out += fmt::format("# {}\n", c);
  out += fmt::format("file_header_bytes: {}\n", layout.file_header_bytes);
  out += fmt::format("line_prefix_bytes: {}\n", layout.line_prefix_bytes);
  out += fmt::format("line_suffix_bytes: {}\n", layout.line_suffix_bytes);
  out += fmt::format("scan_lines: {}\n", layout.scan_lines);
  out += fmt::format("pixels_per_line: {}\n", layout.pixels_per_line);
  out += fmt::format("bands: {}\n", layout.bands);
  out += fmt::format("bytes_per_pixel: {}\n", layout.bytes_per_pixel);
  out += fmt::format("byte_order: {}\n",
                     layout.byte_order == ByteOrder::kBig ? "big" : "little");
  io::write_text(path, out);
}

BandStack read_bsq(const std::filesystem::path& data_path,
                   const RasterLayout& layout) {
  layout.validate();
  std::error_code ec;
  const auto actual = std::filesystem::file_size(data_path, ec);
  if (ec) {
    throw IoError(fmt::format("cannot stat '{}': {}", data_path.string(),
                              ec.message()));
  }
  const auto expected = layout.expected_file_size();
  if (actual != expected) {
    throw SizeMismatchError(data_path.string(), expected, actual);
  }

  auto in = io::open_in(data_path, true);
  const auto bands = static_cast<std::size_t>(layout.bands);
  const auto rows = static_cast<std::size_t>(layout.scan_lines);
  const auto cols = static_cast<std::size_t>(layout.pixels_per_line);
  const std::size_t bpp = layout.bytes_per_pixel;
  const bool big = layout.byte_order == ByteOrder::kBig;

  std::vector<float> values(bands * rows * cols);
  std::vector<unsigned char> record(layout.record_length());
  in.seekg(static_cast<std::streamoff>(layout.file_header_bytes));
  std::size_t out = 0;
  for (std::size_t line = 0; line < bands * rows; ++line) {
    in.read(reinterpret_cast<char*>(record.data()),
            static_cast<std::streamsize>(record.size()));
    if (!in) {
      throw IoError(fmt::format("'{}': short read at record {}",
                                data_path.string(), line));
    }
    const unsigned char* px = record.data() + layout.line_prefix_bytes;
    if (bpp == 1) {
      for (std::size_t c = 0; c < cols; ++c) values[out++] = px[c];
    } else {
      for (std::size_t c = 0; c < cols; ++c) {
        const unsigned hi = px[2 * c + (big ? 0 : 1)];
        const unsigned lo = px[2 * c + (big ? 1 : 0)];
        values[out++] = static_cast<float>((hi << 8) | lo);
      }
    }
  }
  return BandStack(bands, rows, cols, std::move(values));
}

void write_bsq(const std::filesystem::path& data_path, const BandStack& image,
               const RasterLayout& layout) {
  layout.validate();
  if (layout.bands != image.bands() || layout.scan_lines != image.rows() ||
      layout.pixels_per_line != image.cols()) {
    throw ValidationError(fmt::format(
        "layout describes {}x{}x{} but the image is {}x{}x{}", layout.bands,
        layout.scan_lines, layout.pixels_per_line, image.bands(), image.rows(),
        image.cols()));
  }
  const double max = layout.max_value();
  const bool big = layout.byte_order == ByteOrder::kBig;
  const std::size_t bpp = layout.bytes_per_pixel;
  std::vector<unsigned char> record(layout.record_length(), 0);

  auto out = io::open_out(data_path, true);
  const std::vector<char> header(layout.file_header_bytes, 0);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (std::size_t b = 0; b < image.bands(); ++b) {
    for (std::size_t r = 0; r < image.rows(); ++r) {
      unsigned char* px = record.data() + layout.line_prefix_bytes;
      for (std::size_t c = 0; c < image.cols(); ++c) {
        const float v = image.at(b, r, c);
        if (!(v >= 0.0f && v <= max) || v != std::floor(v)) {
          throw ValidationError(fmt::format(
              "value {} at band {} ({}, {}) is not a {}-byte DN", v, b, r, c,
              bpp));
        }
        const auto dn = static_cast<unsigned>(v);
        if (bpp == 1) {
          px[c] = static_cast<unsigned char>(dn);
        } else {
          px[2 * c + (big ? 0 : 1)] = static_cast<unsigned char>(dn >> 8);
          px[2 * c + (big ? 1 : 0)] = static_cast<unsigned char>(dn & 0xFF);
        }
      }
      out.write(reinterpret_cast<const char*>(record.data()),
                static_cast<std::streamsize>(record.size()));
    }
  }
  io::finish(out, data_path);
}

RasterLayout plain_layout(const BandStack& image, unsigned bytes_per_pixel) {
  RasterLayout layout;
  layout.scan_lines = image.rows();
  layout.pixels_per_line = image.cols();
  layout.bands = image.bands();
  layout.bytes_per_pixel = bytes_per_pixel;
  return layout;
}

TrainingRegions parse_roi(std::istream& in, std::size_t rows,
                          std::size_t cols) {
  TrainingRegions regions;
  std::unordered_map<std::uint64_t, int> owner;
  std::string line;
  std::size_t line_no = 0;

  const auto coord = [&](std::string_view token, std::size_t limit,
                         std::string_view axis) {
    const auto v = text::to_int(token, fmt::format("roi line {} {}", line_no, axis));
    if (v < 0 || static_cast<std::uint64_t>(v) >= limit) {
      throw ValidationError(fmt::format(
          "roi line {}: {} {} is outside the {}x{} raster", line_no, axis, v,
          rows, cols));
    }
    return static_cast<std::size_t>(v);
  };
  const auto add = [&](std::size_t r, std::size_t c) {
    const int cls = static_cast<int>(regions.classes.size());
    const std::uint64_t key = static_cast<std::uint64_t>(r) * cols + c;
    const auto [it, inserted] = owner.emplace(key, cls);
    if (inserted) {
      regions.members.back().push_back({r, c});
    } else if (it->second != cls) {
      throw ValidationError(fmt::format(
          "roi line {}: pixel ({}, {}) already belongs to class {}", line_no,
          r, c, it->second));
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = text::split(text::trim(text::strip_comment(line)));
    if (tokens.empty()) continue;
    const auto& kw = tokens[0];
    if (kw == "class") {
      if (tokens.size() != 6) {
        throw ParseError(fmt::format(
            "roi line {}: expected 'class <id> <name> <r> <g> <b>'", line_no));
      }
      const auto id = text::to_int(tokens[1], fmt::format("roi line {} id", line_no));
      if (id != static_cast<std::int64_t>(regions.classes.size() + 1)) {
        throw ParseError(fmt::format(
            "roi line {}: class ids must be consecutive from 1, expected {} "
            "got {}",
            line_no, regions.classes.size() + 1, id));
      }
      std::array<std::uint8_t, 3> rgb{};
      for (int i = 0; i < 3; ++i) {
        const auto v = text::to_uint(tokens[3 + i],
                                     fmt::format("roi line {} color", line_no));
        if (v > 255) {
          throw ParseError(fmt::format(
              "roi line {}: color component {} exceeds 255", line_no, v));
        }
        rgb[i] = static_cast<std::uint8_t>(v);
      }
      regions.classes.push_back(
          {static_cast<int>(id), std::string(tokens[2]), {rgb[0], rgb[1], rgb[2]}});
      regions.members.emplace_back();
    } else if (kw == "pixel" || kw == "rect") {
      if (regions.classes.empty()) {
        throw ParseError(fmt::format(
            "roi line {}: '{}' appears before any 'class' line", line_no, kw));
      }
      if (kw == "pixel") {
        if (tokens.size() != 3) {
          throw ParseError(fmt::format(
              "roi line {}: expected 'pixel <row> <col>'", line_no));
        }
        add(coord(tokens[1], rows, "row"), coord(tokens[2], cols, "col"));
      } else {
        if (tokens.size() != 5) {
          throw ParseError(fmt::format(
              "roi line {}: expected 'rect <row0> <col0> <row1> <col1>'",
              line_no));
        }
        const auto r0 = coord(tokens[1], rows, "row");
        const auto c0 = coord(tokens[2], cols, "col");
        const auto r1 = coord(tokens[3], rows, "row");
        const auto c1 = coord(tokens[4], cols, "col");
        if (r0 > r1 || c0 > c1) {
          throw ParseError(fmt::format(
              "roi line {}: rect corners must be ordered (row0 <= row1, "
              "col0 <= col1)",
              line_no));
        }
        for (std::size_t r = r0; r <= r1; ++r) {
          for (std::size_t c = c0; c <= c1; ++c) add(r, c);
        }
      }
    } else {
      throw ParseError(
          fmt::format("roi line {}: unknown directive '{}'", line_no, kw));
    }
  }
  regions.validate(rows, cols);
  return regions;
}

TrainingRegions read_roi(const std::filesystem::path& path, std::size_t rows,
                         std::size_t cols) {
  auto in = io::open_in(path);
  return parse_roi(in, rows, cols);
}

std::string format_roi(const TrainingRegions& regions) {
  std::string out;
  for (std::size_t i = 0; i < regions.classes.size(); ++i) {
    const auto& c = regions.classes[i];
    out += fmt::format("class {} {} {} {} {}\n", c.id, c.name, c.color.r,
                       c.color.g, c.color.b);
    for (const auto& p : regions.members[i]) {
      out += fmt::format("pixel {} {}\n", p.row, p.col);
    }
  }
  return out;
}

void write_roi(const std::filesystem::path& path,
               const TrainingRegions& regions) {
  io::write_text(path, format_roi(regions));
}

MapFiles map_paths(const std::filesystem::path& out_prefix) {
  const auto with = [&](std::string_view ext) {
    auto p = out_prefix;
    p += ext;
    return p;
  };
  return {with(".lbl"), with(".ppm"), with(".leg")};
}

MapFiles write_map(const ClassificationMap& map,
                   const std::filesystem::path& out_prefix) {
  map.validate();
  if (map.legend.size() > 255) {
    throw ValidationError(fmt::format(
        "{} classes cannot be stored in a one-byte label layer",
        map.legend.size()));
  }
  const auto files = map_paths(out_prefix);

  std::vector<char> bytes(map.labels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<char>(static_cast<unsigned char>(map.labels[i]));
  }
  {
    auto out = io::open_out(files.labels, true);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    io::finish(out, files.labels);
  }
  {
    auto out = io::open_out(files.image, true);
    out << "P6\n" << map.cols << ' ' << map.rows << "\n255\n";
    std::vector<char> rgb(map.labels.size() * 3);
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
      const Label l = map.labels[i];
      const Rgb c = l == kUnclassified ? Rgb{} : map.legend[l - 1].color;
      rgb[3 * i] = static_cast<char>(c.r);
      rgb[3 * i + 1] = static_cast<char>(c.g);
      rgb[3 * i + 2] = static_cast<char>(c.b);
    }
    out.write(rgb.data(), static_cast<std::streamsize>(rgb.size()));
    io::finish(out, files.image);
  }
  std::string legend = fmt::format("# size {} {}\n", map.rows, map.cols);
  for (const auto& c : map.legend) {
    legend += fmt::format("{} {} {} {} {}\n", c.id, c.name, c.color.r,
                          c.color.g, c.color.b);
  }
  io::write_text(files.legend, legend);
  return files;
}

std::vector<Label> read_labels(const std::filesystem::path& path,
                               std::size_t rows, std::size_t cols) {
  std::error_code ec;
  const auto actual = std::filesystem::file_size(path, ec);
  if (ec) {
    throw IoError(
        fmt::format("cannot stat '{}': {}", path.string(), ec.message()));
  }
  if (actual != rows * cols) {
    throw SizeMismatchError(path.string(), rows * cols, actual);
  }
  auto in = io::open_in(path, true);
  std::vector<char> bytes(rows * cols);
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw IoError(fmt::format("short read from '{}'", path.string()));
  std::vector<Label> labels(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    labels[i] = static_cast<unsigned char>(bytes[i]);
  }
  return labels;
}

Legend parse_legend(std::istream& in) {
  Legend legend;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.starts_with('#')) {
      const auto tokens = text::split(trimmed.substr(1));
      if (tokens.size() == 3 && tokens[0] == "size") {
        legend.rows = text::to_uint(tokens[1], "legend rows");
        legend.cols = text::to_uint(tokens[2], "legend cols");
      }
      continue;
    }
    const auto tokens = text::split(trimmed);
    if (tokens.empty()) continue;
    if (tokens.size() != 5) {
      throw ParseError(fmt::format(
          "legend line {}: expected 'id name r g b'", line_no));
    }
    ClassInfo info;
    info.id = static_cast<int>(text::to_int(tokens[0], "legend id"));
    if (info.id != static_cast<int>(legend.classes.size() + 1)) {
      throw ParseError(fmt::format(
          "legend line {}: ids must be consecutive from 1", line_no));
    }
    info.name = std::string(tokens[1]);
    std::array<std::uint64_t, 3> rgb{};
    for (int i = 0; i < 3; ++i) {
      rgb[i] = text::to_uint(tokens[2 + i], "legend color");
      if (rgb[i] > 255) {
        throw ParseError(fmt::format(
            "legend line {}: color component exceeds 255", line_no));
      }
    }
    info.color = {static_cast<std::uint8_t>(rgb[0]),
                  static_cast<std::uint8_t>(rgb[1]),
                  static_cast<std::uint8_t>(rgb[2])};
    legend.classes.push_back(std::move(info));
  }
  return legend;
}

Legend read_legend(const std::filesystem::path& path) {
  auto in = io::open_in(path);
  return parse_legend(in);
}

ClassificationMap read_map(const std::filesystem::path& label_path,
                           const std::filesystem::path& legend_path,
                           std::size_t rows, std::size_t cols) {
  auto legend = read_legend(legend_path);
  if (rows == 0 || cols == 0) {
    rows = legend.rows;
    cols = legend.cols;
  }
  if (rows == 0 || cols == 0) {
    throw ValidationError(fmt::format(
        "'{}' does not record the map size; pass it explicitly",
        legend_path.string()));
  }
  ClassificationMap map;
  map.rows = rows;
  map.cols = cols;
  map.labels = read_labels(label_path, rows, cols);
  map.legend = std::move(legend.classes);
  map.validate();
  return map;
}

}  // namespace specmap
