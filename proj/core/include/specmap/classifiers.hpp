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
/// @file classifiers.hpp
/// @brief The six supervised per-pixel decision rules and the whole-image
/// driver.
///
/// Every rule returns 0 (unclassified) or a class id in 1..K. Ties between
/// classes always go to the lowest class id.
///
/// | method        | decision                                            |
/// |---------------|-----------------------------------------------------|
/// | box           | first class whose min/max box contains x            |
/// | mindist       | argmin |x - mu_i|                                   |
/// | mahalanobis   | argmin (x - mu_i)' S^-1 (x - mu_i), S pooled        |
/// | maxlike       | argmax -ln|S_i| - (x - mu_i)' S_i^-1 (x - mu_i)     |
/// | sam           | argmin angle(x, mu_i)                               |
/// | mlp           | argmax network output                               |

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "specmap/mlp.hpp"
#include "specmap/raster.hpp"
#include "specmap/signatures.hpp"

namespace specmap {

enum class Method { kBox, kMinDist, kMaxLike, kSam, kMlp, kMahalanobis };

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::kBox, Method::kMinDist, Method::kMaxLike,
    Method::kSam, Method::kMlp,     Method::kMahalanobis};

/// CLI identifier: box, mindist, maxlike, sam, mlp, mahalanobis.
std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
/// Human-readable name, e.g. "Maximum Likelihood".
std::string_view method_title(Method method);
/// "box, mindist, maxlike, sam, mlp, mahalanobis"
std::string method_list();

struct ClassifierConfig {
  /// mindist: Euclidean distance in DN. mahalanobis: squared distance d^2.
  std::optional<double> max_distance_threshold;
  /// sam: degrees, in (0, 90].
  std::optional<double> max_angle_threshold_deg;
  /// mlp: in [0, 1].
  std::optional<double> min_activation_threshold;
  /// Added to the covariance diagonal when it is near-singular. Unset means
  /// 1e-6 x mean diagonal (1e-6 if that diagonal is zero); 0 disables.
  std::optional<double> covariance_ridge;

  /// Throws ValidationError when a threshold is outside its range.
  void validate() const;
};

/// Inverse, log-determinant and conditioning of a regularized covariance.
struct CovarianceFactor {
  Eigen::MatrixXd inverse;
  double log_det = 0.0;
  double rcond = 0.0;
  double ridge_applied = 0.0;
};

/// Factors `covariance`, adding the configured ridge only if the matrix is
/// not positive definite or its reciprocal condition number is below 1e-12.
/// Throws SingularCovarianceError when that still fails.
CovarianceFactor factor_covariance(const Eigen::MatrixXd& covariance,
                                   std::optional<double> ridge);

/// A decision rule with all per-classifier validation and matrix work done
/// once. Immutable and safe to share between threads.
class Classifier {
 public:
  /// Throws on any precondition failure: empty set, degenerate or singular
  /// covariance, zero reference spectrum, bad thresholds. For Method::kMlp
  /// use from_model().
  static Classifier from_signatures(Method method, const SignatureSet& sigs,
                                    const ClassifierConfig& cfg = {});
  static Classifier from_model(const MlpModel& model,
                               const ClassifierConfig& cfg = {});

  Method method() const noexcept;
  std::size_t bands() const noexcept;
  std::size_t class_count() const noexcept;

  /// Throws ValidationError if x has the wrong length.
  Label classify(std::span<const double> x) const;

  Classifier(const Classifier&);
  Classifier(Classifier&&) noexcept;
  Classifier& operator=(const Classifier&);
  Classifier& operator=(Classifier&&) noexcept;
  ~Classifier();

  struct Impl;

 private:
  explicit Classifier(std::shared_ptr<const Impl> impl);

  std::shared_ptr<const Impl> impl_;
};

Label classify_parallelepiped(std::span<const double> x,
                              const SignatureSet& sigs,
                              const ClassifierConfig& cfg = {});
Label classify_mindist(std::span<const double> x, const SignatureSet& sigs,
                       const ClassifierConfig& cfg = {});
Label classify_mahalanobis(std::span<const double> x, const SignatureSet& sigs,
                           const ClassifierConfig& cfg = {});
Label classify_maxlike(std::span<const double> x, const SignatureSet& sigs,
                       const ClassifierConfig& cfg = {});
Label classify_sam(std::span<const double> x, const SignatureSet& sigs,
                   const ClassifierConfig& cfg = {});
Label classify_mlp(std::span<const double> x, const MlpModel& model,
                   const ClassifierConfig& cfg = {});

/// Applies `classifier` to every pixel. Rows are split across `threads`
/// workers (0 or 1 = serial); the result does not depend on the split.
ClassificationMap classify_image(const BandStack& image,
                                 const Classifier& classifier,
                                 std::vector<ClassInfo> legend,
                                 std::size_t threads = 0);

/// Worker count from SPECMAP_THREADS; hardware concurrency when unset.
std::size_t threads_from_env();

}  // namespace specmap
