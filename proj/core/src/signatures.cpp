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
#include "specmap/signatures.hpp"

#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "io_util.hpp"
#include "specmap/error.hpp"
#include "text.hpp"

namespace specmap {

namespace {

// Sum of w_i * S_i / W written as S_0 + sum (w_i / W) (S_i - S_0), so that
// identical inputs come back bit-for-bit.
Eigen::MatrixXd weighted_average(std::span<const ClassSignature> sigs) {
  double total = 0.0;
  for (const auto& s : sigs) total += static_cast<double>(s.count - 1);
  Eigen::MatrixXd pooled = sigs.front().covariance;
  if (total <= 0.0) return pooled;
  for (std::size_t i = 1; i < sigs.size(); ++i) {
    const double w = static_cast<double>(sigs[i].count - 1) / total;
    pooled += w * (sigs[i].covariance - sigs.front().covariance);
  }
  return pooled;
}

void check_shared_bands(std::span<const ClassSignature> sigs) {
  for (const auto& s : sigs) {
    if (s.bands() != sigs.front().bands() ||
        static_cast<std::size_t>(s.covariance.rows()) != s.bands() ||
        static_cast<std::size_t>(s.covariance.cols()) != s.bands()) {
      throw ValidationError(fmt::format(
          "signature of class {} has {} bands, expected {}", s.class_id,
          s.bands(), sigs.front().bands()));
    }
  }
}

}  // namespace

std::vector<ClassInfo> SignatureSet::legend() const {
  std::vector<ClassInfo> out;
  out.reserve(signatures.size());
  for (const auto& s : signatures) out.push_back({s.class_id, s.name, s.color});
  return out;
}

void SignatureSet::validate() const {
  if (signatures.empty()) throw ValidationError("signature set is empty");
  check_shared_bands(signatures);
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    const auto& s = signatures[i];
    if (s.class_id != static_cast<int>(i + 1)) {
      throw ValidationError("signature class ids must be consecutive from 1");
    }
    if (s.count == 0) {
      throw ValidationError(
          fmt::format("signature of class {} has no pixels", s.class_id));
    }
    if (s.band_min.size() != s.mean.size() ||
        s.band_max.size() != s.mean.size()) {
      throw ValidationError(fmt::format(
          "signature of class {} has mismatched min/max lengths", s.class_id));
    }
  }
  if (pooled_covariance &&
      (static_cast<std::size_t>(pooled_covariance->rows()) != bands() ||
       static_cast<std::size_t>(pooled_covariance->cols()) != bands())) {
    throw ValidationError("pooled covariance shape does not match band count");
  }
}

ClassSignature compute_signature(std::span<const Eigen::VectorXd> pixels,
                                 int class_id) {
  if (pixels.empty()) {
    throw ValidationError(
        fmt::format("class {}: cannot compute a signature from no pixels",
                    class_id));
  }
  const auto bands = pixels.front().size();
  if (bands == 0) {
    throw ValidationError(fmt::format("class {}: pixels have no bands", class_id));
  }
  for (const auto& p : pixels) {
    if (p.size() != bands) {
      throw ValidationError(fmt::format(
          "class {}: ragged pixel vectors ({} and {} bands)", class_id, bands,
          p.size()));
    }
  }

  ClassSignature sig;
  sig.class_id = class_id;
  sig.color = default_class_color(class_id);
  sig.count = pixels.size();
  sig.mean = Eigen::VectorXd::Zero(bands);
  sig.band_min = pixels.front();
  sig.band_max = pixels.front();
  for (const auto& p : pixels) {
    sig.mean += p;
    sig.band_min = sig.band_min.cwiseMin(p);
    sig.band_max = sig.band_max.cwiseMax(p);
  }
  sig.mean /= static_cast<double>(pixels.size());

  sig.covariance = Eigen::MatrixXd::Zero(bands, bands);
  if (pixels.size() >= 2) {
    for (const auto& p : pixels) {
      const Eigen::VectorXd d = p - sig.mean;
      sig.covariance.noalias() += d * d.transpose();
    }
    sig.covariance /= static_cast<double>(pixels.size() - 1);
    // Exact symmetry regardless of accumulation order.
    sig.covariance = 0.5 * (sig.covariance + sig.covariance.transpose());
  }
  // The mean can drift an ulp outside a constant band.
  sig.mean = sig.mean.cwiseMax(sig.band_min).cwiseMin(sig.band_max);
  return sig;
}

Eigen::MatrixXd pool_covariance(std::span<const ClassSignature> signatures) {
  if (signatures.empty()) {
    throw DegenerateSignatureError("cannot pool covariance of no classes");
  }
  check_shared_bands(signatures);
  std::size_t total = 0;
  for (const auto& s : signatures) {
    if (s.degenerate()) {
      throw DegenerateSignatureError(fmt::format(
          "class {} has {} pixel(s); covariance needs at least 2", s.class_id,
          s.count));
    }
    total += s.count - 1;
  }
  if (total == 0) {
    throw DegenerateSignatureError("pooled covariance has zero total weight");
  }
  auto pooled = weighted_average(signatures);
  if (pooled.diagonal().maxCoeff() <= 0.0) {
    throw DegenerateSignatureError(
        "pooled covariance is zero: the training classes have no variance");
  }
  return pooled;
}

SignatureSet extract_signatures(const BandStack& image,
                                const TrainingRegions& regions) {
  regions.validate(image.rows(), image.cols());
  SignatureSet set;
  set.signatures.reserve(regions.class_count());
  for (std::size_t i = 0; i < regions.class_count(); ++i) {
    std::vector<Eigen::VectorXd> pixels;
    pixels.reserve(regions.members[i].size());
    for (const auto& p : regions.members[i]) {
      pixels.push_back(image.pixel(p.row, p.col));
    }
    auto sig = compute_signature(pixels, regions.classes[i].id);
    sig.name = regions.classes[i].name;
    sig.color = regions.classes[i].color;
    set.signatures.push_back(std::move(sig));
  }
  bool all_defined = true;
  for (const auto& s : set.signatures) all_defined = all_defined && !s.degenerate();
  if (all_defined) set.pooled_covariance = weighted_average(set.signatures);
  return set;
}

namespace {

std::string vector_line(std::string_view key, const Eigen::VectorXd& v) {
  std::string out(key);
  out += ':';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += ' ';
    out += text::format_g10(v[i]);
  }
  out += '\n';
  return out;
}

std::string matrix_lines(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += text::format_g10(m(r, c));
    }
    out += '\n';
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank, non-comment line split into tokens; empty at EOF.
  std::vector<std::string_view> next() {
    while (std::getline(in_, line_)) {
      ++line_no_;
      auto tokens = text::split(text::trim(text::strip_comment(line_)));
      if (!tokens.empty()) return tokens;
    }
    return {};
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

Eigen::VectorXd parse_vector(LineReader& reader, std::string_view key,
                             Eigen::Index expected) {
  const auto tokens = reader.next();
  if (tokens.empty() || tokens[0] != fmt::format("{}:", key)) {
    throw ParseError(fmt::format("signatures line {}: expected '{}:'",
                                 reader.line_no(), key));
  }
  if (expected >= 0 && static_cast<Eigen::Index>(tokens.size() - 1) != expected) {
    throw ParseError(fmt::format("signatures line {}: '{}' needs {} values",
                                 reader.line_no(), key, expected));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(tokens.size() - 1));
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    v[static_cast<Eigen::Index>(i - 1)] = text::to_double(
        tokens[i], fmt::format("signatures line {}", reader.line_no()));
  }
  return v;
}

Eigen::MatrixXd parse_matrix(LineReader& reader, Eigen::Index n) {
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto tokens = reader.next();
    if (static_cast<Eigen::Index>(tokens.size()) != n) {
      throw ParseError(fmt::format(
          "signatures line {}: covariance row needs {} values",
          reader.line_no(), n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = text::to_double(tokens[static_cast<std::size_t>(c)],
                                fmt::format("signatures line {}", reader.line_no()));
    }
  }
  return m;
}

}  // namespace

std::string format_signatures(const SignatureSet& set) {
  std::string out;
  for (const auto& s : set.signatures) {
    out += fmt::format("class {} {} {}\n", s.class_id,
                       s.name.empty() ? fmt::format("class{}", s.class_id) : s.name,
                       s.count);
    out += fmt::format("color: {} {} {}\n", s.color.r, s.color.g, s.color.b);
    out += vector_line("mean", s.mean);
    out += vector_line("min", s.band_min);
    out += vector_line("max", s.band_max);
    out += "cov:\n";
    out += matrix_lines(s.covariance);
  }
  if (set.pooled_covariance) {
    out += "pooled_cov:\n";
    out += matrix_lines(*set.pooled_covariance);
  } else {
    out += "pooled_cov: none\n";
  }
  return out;
}

SignatureSet parse_signatures(std::istream& in) {
  LineReader reader(in);
  SignatureSet set;
  Eigen::Index bands = -1;
  for (auto tokens = reader.next(); !tokens.empty(); tokens = reader.next()) {
    if (tokens[0] == "pooled_cov:") {
      if (bands < 0) {
        throw ParseError("signatures: 'pooled_cov' before any class block");
      }
      if (tokens.size() == 2 && tokens[1] == "none") {
        set.pooled_covariance.reset();
      } else if (tokens.size() == 1) {
        set.pooled_covariance = parse_matrix(reader, bands);
      } else {
        throw ParseError(fmt::format("signatures line {}: malformed pooled_cov",
                                     reader.line_no()));
      }
      if (!reader.next().empty()) {
        throw ParseError(fmt::format(
            "signatures line {}: content after pooled_cov", reader.line_no()));
      }
      set.validate();
      return set;
    }
    if (tokens[0] != "class" || tokens.size() != 4) {
      throw ParseError(fmt::format(
          "signatures line {}: expected 'class <id> <name> <n>'",
          reader.line_no()));
    }
    ClassSignature sig;
    sig.class_id = static_cast<int>(text::to_int(tokens[1], "signature id"));
    sig.name = std::string(tokens[2]);
    sig.count = text::to_uint(tokens[3], "signature pixel count");
    const auto color = parse_vector(reader, "color", 3);
    for (int i = 0; i < 3; ++i) {
      if (color[i] < 0 || color[i] > 255 || color[i] != std::floor(color[i])) {
        throw ParseError(fmt::format("signatures line {}: bad color component",
                                     reader.line_no()));
      }
    }
    sig.color = {static_cast<std::uint8_t>(color[0]),
                 static_cast<std::uint8_t>(color[1]),
                 static_cast<std::uint8_t>(color[2])};
    sig.mean = parse_vector(reader, "mean", bands);
    bands = sig.mean.size();
    if (bands == 0) throw ParseError("signatures: mean vector is empty");
    sig.band_min = parse_vector(reader, "min", bands);
    sig.band_max = parse_vector(reader, "max", bands);
    const auto cov = reader.next();
    if (cov.size() != 1 || cov[0] != "cov:") {
      throw ParseError(
          fmt::format("signatures line {}: expected 'cov:'", reader.line_no()));
    }
    sig.covariance = parse_matrix(reader, bands);
    set.signatures.push_back(std::move(sig));
  }
  throw ParseError("signatures: missing 'pooled_cov' block");
}

void write_signatures(const std::filesystem::path& path,
                      const SignatureSet& set) {
  io::write_text(path, format_signatures(set));
}

SignatureSet read_signatures(const std::filesystem::path& path) {
  auto in = io::open_in(path);
  return parse_signatures(in);
}

}  // namespace specmap
