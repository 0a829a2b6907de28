// Copyright 2026 The krselect Authors
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

#include "krselect/measures.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <unordered_map>

#include "krselect/error.h"

namespace krselect {
namespace {

constexpr double kMassTolerance = 1e-9;

bool BitwiseEqual(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::size_t BitwiseHash(std::span<const double> coords) {
  std::size_t h = 1469598103934665603ull;
  for (double c : coords) {
    std::uint64_t bits;
    std::memcpy(&bits, &c, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// Bitwise-keyed index over coordinate vectors.
class PointIndex {
 public:
  // Returns the existing index of `p` or registers it as `next`.
  std::pair<std::size_t, bool> Insert(const Point& p, std::size_t next) {
    auto& bucket = buckets_[BitwiseHash(p)];
    for (auto& [stored, idx] : bucket) {
      if (BitwiseEqual(stored, p)) return {idx, false};
    }
    bucket.emplace_back(p, next);
    return {next, true};
  }

 private:
  std::unordered_map<std::size_t, std::vector<std::pair<Point, std::size_t>>> buckets_;
};

void CheckComparable(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  if (!SameSupport(m1, m2)) {
    throw Error(ErrorCode::kSupportMismatch, "measures live on different point sets");
  }
  if (std::abs(m1.total_mass() - m2.total_mass()) > kMassTolerance) {
    throw Error(ErrorCode::kMassMismatch, "total masses differ");
  }
}

}  // namespace

PointSet::PointSet(std::vector<Point> points, std::size_t dimension)
    : points_(std::move(points)), dimension_(dimension) {
  if (dimension_ == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension must be positive");
  }
  PointIndex index;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "point " + std::to_string(i) + " has " +
                      std::to_string(points_[i].size()) + " coordinates, expected " +
                      std::to_string(dimension_));
    }
    if (!index.Insert(points_[i], i).second) {
      throw Error(ErrorCode::kDuplicatePoint,
                  "point " + std::to_string(i) + " repeats an earlier point");
    }
  }
}

std::size_t PointSet::Find(std::span<const double> coords) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (BitwiseEqual(points_[i], coords)) return i;
  }
  return points_.size();
}

bool PointSet::operator==(const PointSet& other) const {
  if (dimension_ != other.dimension_ || points_.size() != other.points_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!BitwiseEqual(points_[i], other.points_[i])) return false;
  }
  return true;
}

PointSetPtr MakePointSet(std::vector<Point> points, std::size_t dimension) {
  return std::make_shared<const PointSet>(std::move(points), dimension);
}

PointSetPtr MakeLinePointSet(const std::vector<double>& positions) {
  std::vector<Point> points;
  points.reserve(positions.size());
  for (double x : positions) points.push_back({x});
  return MakePointSet(std::move(points), 1);
}

AtomicMeasure::AtomicMeasure(PointSetPtr support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)), total_mass_(0.0) {
  if (!support_) throw Error(ErrorCode::kInvalidArgument, "null support");
  if (weights_.size() != support_->size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight count " + std::to_string(weights_.size()) +
                    " does not match support size " + std::to_string(support_->size()));
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be finite and nonnegative");
    }
    total_mass_ += w;
  }
}

bool SameSupport(const AtomicMeasure& a, const AtomicMeasure& b) {
  return a.support() == b.support() || *a.support() == *b.support();
}

AtomicMeasure Normalize(const AtomicMeasure& m) {
  if (m.total_mass() <= 0.0) throw Error(ErrorCode::kZeroMass, "cannot normalize");
  std::vector<double> w = m.weights();
  for (double& x : w) x /= m.total_mass();
  return AtomicMeasure(m.support(), std::move(w));
}

double TvDistance(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  CheckComparable(m1, m2);
  double sum = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    sum += std::abs(m1.weight(i) - m2.weight(i));
  }
  return 0.5 * sum;
}

AtomicMeasure Pushforward(const AtomicMeasure& m, const std::vector<std::size_t>& map,
                          PointSetPtr target) {
  if (!target) throw Error(ErrorCode::kInvalidArgument, "null target");
  if (map.size() != m.size()) {
    throw Error(ErrorCode::kInvalidTargetIndex, "map must cover every support index");
  }
  std::vector<double> w(target->size(), 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= target->size()) {
      throw Error(ErrorCode::kInvalidTargetIndex,
                  "index " + std::to_string(i) + " maps outside the target");
    }
    w[map[i]] += m.weight(i);
  }
  return AtomicMeasure(std::move(target), std::move(w));
}

std::pair<PointSetPtr, AtomicMeasure> EmpiricalFromSample(
    const std::vector<Point>& points, double mass) {
  if (points.empty()) throw Error(ErrorCode::kEmptySample, "no sample points");
  if (!(mass > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mass must be positive");
  const std::size_t dim = points.front().size();
  const double each = mass / static_cast<double>(points.size());
  PointIndex index;
  std::vector<Point> unique;
  std::vector<double> weights;
  for (const Point& p : points) {
    if (p.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "sample points differ in dimension");
    }
    auto [idx, inserted] = index.Insert(p, unique.size());
    if (inserted) {
      unique.push_back(p);
      weights.push_back(each);
    } else {
      weights[idx] += each;
    }
  }
  auto support = MakePointSet(std::move(unique), dim);
  AtomicMeasure measure(support, std::move(weights));
  return {support, std::move(measure)};
}

std::pair<AtomicMeasure, AtomicMeasure> OnUnionSupport(const AtomicMeasure& m1,
                                                       const AtomicMeasure& m2) {
  if (SameSupport(m1, m2)) {
    return {m1, AtomicMeasure(m1.support(), m2.weights())};
  }
  const PointSet& a = *m1.support();
  const PointSet& b = *m2.support();
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "measures differ in point dimension");
  }
  PointIndex index;
  std::vector<Point> merged(a.points());
  for (std::size_t i = 0; i < a.size(); ++i) index.Insert(a[i], i);
  std::vector<std::size_t> b_map(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    auto [idx, inserted] = index.Insert(b[j], merged.size());
    if (inserted) merged.push_back(b[j]);
    b_map[j] = idx;
  }
  auto support = MakePointSet(std::move(merged), a.dimension());
  std::vector<double> w1(support->size(), 0.0);
  std::vector<double> w2(support->size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) w1[i] = m1.weight(i);
  for (std::size_t j = 0; j < b.size(); ++j) w2[b_map[j]] += m2.weight(j);
  return {AtomicMeasure(support, std::move(w1)), AtomicMeasure(support, std::move(w2))};
}

}  // namespace krselect
