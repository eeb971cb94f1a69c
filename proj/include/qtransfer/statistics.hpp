// Copyright 2026 The qtransfer Authors
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

#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace qtransfer {

/// Elementwise running mean and variance (Welford update, Chan merge).
/// Merging in a fixed order gives reproducible bits.
class RunningMoments {
 public:
  RunningMoments() = default;
  explicit RunningMoments(Eigen::Index size)
      : mean_(Eigen::ArrayXd::Zero(size)), m2_(Eigen::ArrayXd::Zero(size)) {}

  void add(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    ++count_;
    const Eigen::ArrayXd delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningMoments& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const Eigen::ArrayXd delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta.square() * (na * nb / n);
    count_ += other.count_;
  }

  std::size_t count() const noexcept { return count_; }
  const Eigen::ArrayXd& mean() const noexcept { return mean_; }

  /// Unbiased sample variance; zero for fewer than two samples.
  Eigen::ArrayXd variance() const {
    if (count_ < 2) return Eigen::ArrayXd::Zero(mean_.size());
    return (m2_ / static_cast<double>(count_ - 1)).max(0.0);
  }

  Eigen::ArrayXd standard_error() const {
    if (count_ < 2) return Eigen::ArrayXd::Zero(mean_.size());
    return (variance() / static_cast<double>(count_)).sqrt();
  }

 private:
  std::size_t count_ = 0;
  Eigen::ArrayXd mean_;
  Eigen::ArrayXd m2_;
};

}  // namespace qtransfer
