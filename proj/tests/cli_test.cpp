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
#include "cli.hpp"

#include <cstdio>
#include <sstream>

#include <gtest/gtest.h>

#include "specmap/assessment.hpp"
#include "specmap/compare.hpp"
#include "specmap/raster_io.hpp"
#include "test_util.hpp"

namespace specmap {
namespace {

constexpr char kSpec[] =
    "scene 24 24 3 11\n"
    "class 1 water 0 0 255 rect 0 0 7 23 mean 200 30 40 stddev 4 4 4\n"
    "class 2 forest 0 255 0 rect 8 0 15 23 mean 40 190 60 stddev 4 4 4\n"
    "class 3 soil 255 0 0 rect 16 0 23 23 mean 50 60 210 stddev 4 4 4\n";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_file(p("spec.txt"), kSpec);
    ASSERT_EQ(run({"synth", "--spec", p("spec.txt"), "--out", p("s")}).code, 0);
  }

  std::string p(std::string_view name) const { return (dir_ / name).string(); }

  Result stats(bool with_model = true) {
    std::vector<std::string> args = {"stats", "--image", p("s.bsq"), "--layout", p("s.hdr"),
                                     "--roi", p("s.roi"), "--out", p("s.sig")};
    if (with_model) {
      args.insert(args.end(), {"--mlp-out", p("s.mlp"), "--epochs", "100"});
    }
    return run(args);
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, InfoReportsLayout) {
  const auto r = run({"info", "--layout", p("s.hdr"), "--image", p("s.bsq")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("24"), std::string::npos);
  EXPECT_NE(r.out.find("1728"), std::string::npos);
}

TEST_F(CliTest, ClassifyWritesMapFiles) {
  ASSERT_EQ(stats().code, 0);
  for (auto m : kAllMethods) {
    const std::string name(method_name(m));
    std::vector<std::string> args = {"classify", "--method", name, "--image", p("s.bsq"),
                                     "--layout", p("s.hdr"), "--sig", p("s.sig"),
                                     "--out", p("m_" + name)};
    if (m == Method::kMlp) {
      args.push_back("--model");
      args.push_back(p("s.mlp"));
    }
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << name << ": " << r.err;
    for (auto ext : {".lbl", ".ppm", ".leg"}) {
      EXPECT_TRUE(std::filesystem::exists(p("m_" + name + ext))) << name << ext;
    }
    EXPECT_EQ(std::filesystem::file_size(p("m_" + name + ".lbl")), 24u * 24u);
  }
}

TEST_F(CliTest, ClassifyIsByteForByteReproducible) {
  ASSERT_EQ(stats().code, 0);
  for (auto out : {"a", "b"}) {
    ASSERT_EQ(run({"classify", "--method", "maxlike", "--image", p("s.bsq"), "--layout",
                   p("s.hdr"), "--sig", p("s.sig"), "--out", p(out)})
                  .code,
              0);
  }
  for (auto ext : {".lbl", ".ppm", ".leg"}) {
    EXPECT_EQ(testing::read_file(p(std::string("a") + ext)),
              testing::read_file(p(std::string("b") + ext)));
  }
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  ASSERT_EQ(stats(false).code, 0);
  const auto r = run({"classify", "--method", "kmeans", "--image", p("s.bsq"), "--layout",
                      p("s.hdr"), "--sig", p("s.sig"), "--out", p("m")});
  EXPECT_EQ(r.code, 2);
  for (auto m : kAllMethods) EXPECT_NE(r.err.find(method_name(m)), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"classify", "--method", "box"}).code, 2);
  EXPECT_EQ(run({"classify", "--method", "mlp", "--image", p("s.bsq"), "--layout", p("s.hdr"),
                 "--sig", p("s.sig")})
                .code,
            2);
  EXPECT_EQ(run({"classify", "--method", "box", "--threshold", "3", "--image", p("s.bsq"),
                 "--layout", p("s.hdr"), "--sig", p("s.sig")})
                .code,
            2);
  EXPECT_EQ(run({"compare", "--image", p("s.bsq"), "--layout", p("s.hdr"), "--roi",
                 p("s.roi"), "--truth", p("s.roi"), "--split", "0.5", "--out", p("r")})
                .code,
            2);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  const auto r = run({"info", "--layout", p("missing.hdr")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  testing::write_file(p("short.bsq"), "abc");
  EXPECT_EQ(run({"info", "--layout", p("s.hdr"), "--image", p("short.bsq")}).code, 1);
  EXPECT_EQ(run({"stats", "--image", p("short.bsq"), "--layout", p("s.hdr"), "--roi",
                 p("s.roi"), "--out", p("x.sig")})
                .code,
            1);
}

TEST_F(CliTest, AssessReportParsesBack) {
  ASSERT_EQ(stats(false).code, 0);
  ASSERT_EQ(run({"classify", "--method", "mindist", "--image", p("s.bsq"), "--layout",
                 p("s.hdr"), "--sig", p("s.sig"), "--out", p("m")})
                .code,
            0);
  const auto r = run({"assess", "--map", p("m.lbl"), "--legend", p("m.leg"), "--truth",
                      p("s.roi"), "--out", p("rpt.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = testing::read_file(p("rpt.txt"));
  EXPECT_EQ(r.out, report);
  const auto cm = parse_report_counts(report);
  EXPECT_EQ(cm.grand_total(), 24u * 24u);
  char oa_line[96];
  std::snprintf(oa_line, sizeof oa_line, "Overall Accuracy = (%llu/%llu) = %.4f%%",
                static_cast<unsigned long long>(cm.correct()),
                static_cast<unsigned long long>(cm.grand_total()),
                100.0 * overall_accuracy(cm));
  EXPECT_NE(report.find(oa_line), std::string::npos) << oa_line;
  char kappa_line[64];
  std::snprintf(kappa_line, sizeof kappa_line, "Kappa Coefficient = %.4f", kappa(cm));
  EXPECT_NE(report.find(kappa_line), std::string::npos);
}

TEST_F(CliTest, CompareWithTruthFile) {
  const auto truth = read_roi(p("s.roi"), 24, 24);
  const auto [train, test] = split_regions(truth, 0.5, 3);
  write_roi(p("train.roi"), train);
  write_roi(p("test.roi"), test);
  const std::vector<std::string> args = {"compare", "--image", p("s.bsq"), "--layout",
                                         p("s.hdr"), "--roi", p("train.roi"), "--truth",
                                         p("test.roi"), "--out", p("rpt")};
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = testing::read_file(p("rpt.txt"));
  for (auto m : kAllMethods) {
    EXPECT_NE(text.find("(" + std::string(method_name(m)) + ") =="), std::string::npos);
  }
  std::size_t ranking_lines = 0;
  for (std::size_t pos = 0; (pos = text.find("Ranking:", pos)) != std::string::npos; ++pos) {
    ++ranking_lines;
  }
  EXPECT_EQ(ranking_lines, 1u);
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(testing::read_file(p("rpt.txt")), text);
}

TEST_F(CliTest, CompareOverlappingTruthFails) {
  const auto r = run({"compare", "--image", p("s.bsq"), "--layout", p("s.hdr"), "--roi",
                      p("s.roi"), "--truth", p("s.roi"), "--out", p("rpt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("pixel"), std::string::npos);
}

TEST_F(CliTest, CompareWithSplitIsReproducible) {
  const std::vector<std::string> args = {"compare", "--image", p("s.bsq"), "--layout",
                                         p("s.hdr"), "--roi", p("s.roi"), "--split", "0.4",
                                         "--seed", "9", "--out", p("rpt")};
  ASSERT_EQ(run(args).code, 0);
  const auto first = testing::read_file(p("rpt.txt"));
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(testing::read_file(p("rpt.txt")), first);
  EXPECT_NE(first.find("Ranking: 1."), std::string::npos);
}

}  // namespace
}  // namespace specmap
