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
#include "specmap/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "specmap/error.hpp"
#include "text.hpp"

namespace specmap {

namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kAutoRidgeFactor = 1e-6;

struct BoxRule {
  std::vector<Eigen::VectorXd> mins;
  std::vector<Eigen::VectorXd> maxs;
};

struct MinDistRule {
  std::vector<Eigen::VectorXd> means;
};

struct MahalanobisRule {
  std::vector<Eigen::VectorXd> means;
  Eigen::MatrixXd inverse;
};

struct MaxLikeRule {
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> inverses;
  std::vector<double> log_dets;
};

struct SamRule {
  std::vector<Eigen::VectorXd> unit_refs;
};

struct MlpRule {
  MlpModel model;
};

using Rule = std::variant<BoxRule, MinDistRule, MahalanobisRule, MaxLikeRule,
                          SamRule, MlpRule>;

double reciprocal_condition(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return 0.0;
  const auto& ev = solver.eigenvalues();
  const double hi = ev.maxCoeff();
  const double lo = ev.minCoeff();
  if (hi <= 0.0 || lo <= 0.0) return 0.0;
  return lo / hi;
}

double squared_distance(const Eigen::VectorXd& diff) { return diff.dot(diff); }

double quadratic_form(const Eigen::VectorXd& diff, const Eigen::MatrixXd& inv) {
  const Eigen::VectorXd y = inv * diff;
  return diff.dot(y);
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

std::vector<Eigen::VectorXd> means_of(const SignatureSet& sigs) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& s : sigs.signatures) out.push_back(s.mean);
  return out;
}

Label label_of(std::size_t index) { return static_cast<Label>(index + 1); }

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kBox:
      return "box";
    case Method::kMinDist:
      return "mindist";
    case Method::kMaxLike:
      return "maxlike";
    case Method::kSam:
      return "sam";
    case Method::kMlp:
      return "mlp";
    case Method::kMahalanobis:
      return "mahalanobis";
  }
  return "unknown";
}

std::string_view method_title(Method method) {
  switch (method) {
    case Method::kBox:
      return "Parallelepiped";
    case Method::kMinDist:
      return "Minimum Distance";
    case Method::kMaxLike:
      return "Maximum Likelihood";
    case Method::kSam:
      return "Spectral Angle Mapper";
    case Method::kMlp:
      return "Neural Network";
    case Method::kMahalanobis:
      return "Mahalanobis";
  }
  return "Unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string method_list() {
  std::string out;
  for (Method m : kAllMethods) {
    if (!out.empty()) out += ", ";
    out += method_name(m);
  }
  return out;
}

void ClassifierConfig::validate() const {
  if (max_distance_threshold &&
      !(std::isfinite(*max_distance_threshold) && *max_distance_threshold >= 0)) {
    throw ValidationError(fmt::format(
        "distance threshold must be a non-negative number, got {}",
        *max_distance_threshold));
  }
  if (max_angle_threshold_deg &&
      !(*max_angle_threshold_deg > 0 && *max_angle_threshold_deg <= 90)) {
    throw ValidationError(fmt::format(
        "angle threshold must be in (0, 90] degrees, got {}",
        *max_angle_threshold_deg));
  }
  if (min_activation_threshold &&
      !(*min_activation_threshold >= 0 && *min_activation_threshold <= 1)) {
    throw ValidationError(fmt::format(
        "activation threshold must be in [0, 1], got {}",
        *min_activation_threshold));
  }
  if (covariance_ridge &&
      !(std::isfinite(*covariance_ridge) && *covariance_ridge >= 0)) {
    throw ValidationError(fmt::format(
        "covariance ridge must be a non-negative number, got {}",
        *covariance_ridge));
  }
}

CovarianceFactor factor_covariance(const Eigen::MatrixXd& covariance,
                                   std::optional<double> ridge) {
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
    throw ValidationError("covariance must be a non-empty square matrix");
  }
  const auto n = covariance.rows();
  const auto try_factor = [](const Eigen::MatrixXd& m,
                             CovarianceFactor& out) -> bool {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    out.rcond = reciprocal_condition(m);
    if (llt.info() != Eigen::Success || out.rcond < kMinRcond) return false;
    out.inverse = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    out.inverse = 0.5 * (out.inverse + out.inverse.transpose());
    const Eigen::MatrixXd l = llt.matrixL();
    out.log_det = 2.0 * l.diagonal().array().log().sum();
    return true;
  };

  CovarianceFactor factor;
  if (try_factor(covariance, factor)) return factor;

  double eps = 0.0;
  if (ridge) {
    eps = *ridge;
  } else {
    const double mean_diag = covariance.diagonal().mean();
    eps = kAutoRidgeFactor * (mean_diag > 0.0 ? mean_diag : 1.0);
  }
  const double original_rcond = factor.rcond;
  if (eps > 0.0) {
    const Eigen::MatrixXd ridged =
        covariance + eps * Eigen::MatrixXd::Identity(n, n);
    if (try_factor(ridged, factor)) {
      factor.ridge_applied = eps;
      return factor;
    }
  }
  throw SingularCovarianceError(
      fmt::format("covariance matrix is singular (reciprocal condition "
                  "estimate {:.3g}, ridge {:.3g})",
                  eps > 0.0 ? factor.rcond : original_rcond, eps),
      eps > 0.0 ? factor.rcond : original_rcond);
}

struct Classifier::Impl {
  Method method;
  std::size_t bands = 0;
  std::size_t classes = 0;
  ClassifierConfig cfg;
  Rule rule;

  Label classify(std::span<const double> x) const;
};

Label Classifier::Impl::classify(std::span<const double> x) const {
  const auto v = as_vector(x);
  return std::visit(
      [&](const auto& r) -> Label {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, BoxRule>) {
          for (std::size_t i = 0; i < r.mins.size(); ++i) {
            if ((v.array() >= r.mins[i].array()).all() &&
                (v.array() <= r.maxs[i].array()).all()) {
              return label_of(i);
            }
          }
          return kUnclassified;
        } else if constexpr (std::is_same_v<R, MinDistRule>) {
          std::size_t best = 0;
          double best_d2 = squared_distance(v - r.means[0]);
          for (std::size_t i = 1; i < r.means.size(); ++i) {
            const double d2 = squared_distance(v - r.means[i]);
            if (d2 < best_d2) {
              best = i;
              best_d2 = d2;
            }
          }
          if (cfg.max_distance_threshold &&
              std::sqrt(best_d2) > *cfg.max_distance_threshold) {
            return kUnclassified;
          }
          return label_of(best);
        } else if constexpr (std::is_same_v<R, MahalanobisRule>) {
          std::size_t best = 0;
          double best_d2 = quadratic_form(v - r.means[0], r.inverse);
          for (std::size_t i = 1; i < r.means.size(); ++i) {
            const double d2 = quadratic_form(v - r.means[i], r.inverse);
            if (d2 < best_d2) {
              best = i;
              best_d2 = d2;
            }
          }
          if (cfg.max_distance_threshold &&
              best_d2 > *cfg.max_distance_threshold) {
            return kUnclassified;
          }
          return label_of(best);
        } else if constexpr (std::is_same_v<R, MaxLikeRule>) {
          // Minimizing ln|S_i| + d2_i is maximizing g_i. When two classes
          // share a determinant the constant cancels exactly.
          std::size_t best = 0;
          double best_d2 = quadratic_form(v - r.means[0], r.inverses[0]);
          for (std::size_t i = 1; i < r.means.size(); ++i) {
            const double d2 = quadratic_form(v - r.means[i], r.inverses[i]);
            const bool better =
                r.log_dets[i] == r.log_dets[best]
                    ? d2 < best_d2
                    : r.log_dets[i] + d2 < r.log_dets[best] + best_d2;
            if (better) {
              best = i;
              best_d2 = d2;
            }
          }
          return label_of(best);
        } else if constexpr (std::is_same_v<R, SamRule>) {
          const double norm = v.norm();
          if (norm == 0.0) return kUnclassified;
          const Eigen::VectorXd unit = v / norm;
          std::size_t best = 0;
          double best_cos = std::clamp(unit.dot(r.unit_refs[0]), -1.0, 1.0);
          for (std::size_t i = 1; i < r.unit_refs.size(); ++i) {
            const double c = std::clamp(unit.dot(r.unit_refs[i]), -1.0, 1.0);
            if (c > best_cos) {
              best = i;
              best_cos = c;
            }
          }
          if (cfg.max_angle_threshold_deg) {
            const double angle = std::acos(best_cos) * 180.0 / std::numbers::pi;
            if (angle > *cfg.max_angle_threshold_deg) return kUnclassified;
          }
          return label_of(best);
        } else {
          const Eigen::VectorXd out = r.model.forward(x);
          Eigen::Index best = 0;
          for (Eigen::Index i = 1; i < out.size(); ++i) {
            if (out[i] > out[best]) best = i;
          }
          if (cfg.min_activation_threshold &&
              out[best] < *cfg.min_activation_threshold) {
            return kUnclassified;
          }
          return label_of(static_cast<std::size_t>(best));
        }
      },
      rule);
}

Classifier::Classifier(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}
Classifier::Classifier(const Classifier&) = default;
Classifier::Classifier(Classifier&&) noexcept = default;
Classifier& Classifier::operator=(const Classifier&) = default;
Classifier& Classifier::operator=(Classifier&&) noexcept = default;
Classifier::~Classifier() = default;

Method Classifier::method() const noexcept { return impl_->method; }
std::size_t Classifier::bands() const noexcept { return impl_->bands; }
std::size_t Classifier::class_count() const noexcept { return impl_->classes; }

Label Classifier::classify(std::span<const double> x) const {
  if (x.size() != impl_->bands) {
    throw ValidationError(fmt::format(
        "pixel has {} bands, classifier expects {}", x.size(), impl_->bands));
  }
  return impl_->classify(x);
}

Classifier Classifier::from_signatures(Method method, const SignatureSet& sigs,
                                       const ClassifierConfig& cfg) {
  cfg.validate();
  sigs.validate();
  auto impl = std::make_shared<Impl>();
  impl->method = method;
  impl->bands = sigs.bands();
  impl->classes = sigs.class_count();
  impl->cfg = cfg;

  switch (method) {
    case Method::kBox: {
      BoxRule r;
      for (const auto& s : sigs.signatures) {
        r.mins.push_back(s.band_min);
        r.maxs.push_back(s.band_max);
      }
      impl->rule = std::move(r);
      break;
    }
    case Method::kMinDist:
      impl->rule = MinDistRule{means_of(sigs)};
      break;
    case Method::kMahalanobis: {
      if (!sigs.pooled_covariance) {
        for (const auto& s : sigs.signatures) {
          if (s.degenerate()) {
            throw DegenerateSignatureError(fmt::format(
                "mahalanobis: class {} has {} pixel(s); the pooled covariance "
                "needs at least 2 per class",
                s.class_id, s.count));
          }
        }
        throw DegenerateSignatureError(
            "mahalanobis: signature set carries no pooled covariance");
      }
      auto factor = factor_covariance(*sigs.pooled_covariance, cfg.covariance_ridge);
      impl->rule = MahalanobisRule{means_of(sigs), std::move(factor.inverse)};
      break;
    }
    case Method::kMaxLike: {
      MaxLikeRule r;
      r.means = means_of(sigs);
      for (const auto& s : sigs.signatures) {
        if (s.degenerate()) {
          throw DegenerateSignatureError(fmt::format(
              "maxlike: class {} has {} pixel(s); its covariance needs at "
              "least 2",
              s.class_id, s.count));
        }
        CovarianceFactor factor;
        try {
          factor = factor_covariance(s.covariance, cfg.covariance_ridge);
        } catch (const SingularCovarianceError& e) {
          throw SingularCovarianceError(
              fmt::format("maxlike: class {}: {}", s.class_id, e.what()),
              e.rcond());
        }
        r.inverses.push_back(std::move(factor.inverse));
        r.log_dets.push_back(factor.log_det);
      }
      impl->rule = std::move(r);
      break;
    }
    case Method::kSam: {
      SamRule r;
      for (const auto& s : sigs.signatures) {
        const double norm = s.mean.norm();
        if (norm == 0.0) {
          throw ValidationError(fmt::format(
              "sam: class {} has a zero reference spectrum", s.class_id));
        }
        r.unit_refs.push_back(s.mean / norm);
      }
      impl->rule = std::move(r);
      break;
    }
    case Method::kMlp:
      throw ValidationError(
          "mlp classifiers are built from a trained model, not signatures");
  }
  return Classifier(std::move(impl));
}

Classifier Classifier::from_model(const MlpModel& model,
                                  const ClassifierConfig& cfg) {
  cfg.validate();
  model.validate();
  auto impl = std::make_shared<Impl>();
  impl->method = Method::kMlp;
  impl->bands = model.inputs();
  impl->classes = model.outputs();
  impl->cfg = cfg;
  impl->rule = MlpRule{model};
  return Classifier(std::move(impl));
}

Label classify_parallelepiped(std::span<const double> x,
                              const SignatureSet& sigs,
                              const ClassifierConfig& cfg) {
  return Classifier::from_signatures(Method::kBox, sigs, cfg).classify(x);
}

Label classify_mindist(std::span<const double> x, const SignatureSet& sigs,
                       const ClassifierConfig& cfg) {
  return Classifier::from_signatures(Method::kMinDist, sigs, cfg).classify(x);
}

Label classify_mahalanobis(std::span<const double> x, const SignatureSet& sigs,
                           const ClassifierConfig& cfg) {
  return Classifier::from_signatures(Method::kMahalanobis, sigs, cfg)
      .classify(x);
}

Label classify_maxlike(std::span<const double> x, const SignatureSet& sigs,
                       const ClassifierConfig& cfg) {
  return Classifier::from_signatures(Method::kMaxLike, sigs, cfg).classify(x);
}

Label classify_sam(std::span<const double> x, const SignatureSet& sigs,
                   const ClassifierConfig& cfg) {
  return Classifier::from_signatures(Method::kSam, sigs, cfg).classify(x);
}

Label classify_mlp(std::span<const double> x, const MlpModel& model,
                   const ClassifierConfig& cfg) {
  return Classifier::from_model(model, cfg).classify(x);
}

ClassificationMap classify_image(const BandStack& image,
                                 const Classifier& classifier,
                                 std::vector<ClassInfo> legend,
                                 std::size_t threads) {
  if (image.bands() != classifier.bands()) {
    throw ValidationError(fmt::format(
        "image has {} bands, classifier expects {}", image.bands(),
        classifier.bands()));
  }
  if (legend.size() != classifier.class_count()) {
    throw ValidationError(fmt::format(
        "legend lists {} classes, classifier has {}", legend.size(),
        classifier.class_count()));
  }
  ClassificationMap map;
  map.rows = image.rows();
  map.cols = image.cols();
  map.labels.assign(image.pixel_count(), kUnclassified);
  map.legend = std::move(legend);

  const auto run_rows = [&](std::size_t row_begin, std::size_t row_end) {
    std::vector<double> px(image.bands());
    for (std::size_t r = row_begin; r < row_end; ++r) {
      for (std::size_t c = 0; c < image.cols(); ++c) {
        image.pixel(r, c, px);
        map.at(r, c) = classifier.classify(px);
      }
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), map.rows);
  if (workers <= 1) {
    run_rows(0, map.rows);
    return map;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (map.rows + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(map.rows, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_rows, begin, end);
    }
  }
  return map;
}

std::size_t threads_from_env() {
  const char* value = std::getenv("SPECMAP_THREADS");
  if (value == nullptr || *value == '\0') {
    return std::max(1u, std::thread::hardware_concurrency());
  }
  return static_cast<std::size_t>(text::to_uint(value, "SPECMAP_THREADS"));
}

}  // namespace specmap
