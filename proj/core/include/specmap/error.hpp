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

#pragma once

#include <stdexcept>
#include <cstdint>
#include <string>

namespace specmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (layout sidecar, ROI, signature, model, scene spec).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raw raster payload does not match the size its layout implies.
class SizeMismatchError : public Error {
 public:
  SizeMismatchError(const std::string& path, std::uintmax_t expected,
                    std::uintmax_t actual);

  std::uintmax_t expected() const noexcept { return expected_; }
  std::uintmax_t actual() const noexcept { return actual_; }

 private:
  std::uintmax_t expected_;
  std::uintmax_t actual_;
};

/// A precondition on shapes, ranges, or class sets was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Covariance statistics requested from a class with fewer than two pixels
/// or with no variance at all.
class DegenerateSignatureError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix stayed singular after regularization.
class SingularCovarianceError : public Error {
 public:
  SingularCovarianceError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}

  /// Reciprocal condition estimate of the matrix that failed to factor.
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Filesystem failure (missing input, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace specmap
