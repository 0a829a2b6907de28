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

#ifndef KRSELECT_MEASURES_H_
#define KRSELECT_MEASURES_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace krselect {

using Point = std::vector<double>;

// An ordered list of distinct coordinate vectors of a common dimension.
// Distinctness is checked bitwise on the stored doubles.
class PointSet {
 public:
  PointSet(std::vector<Point> points, std::size_t dimension);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const { return dimension_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  // Index of a point with bitwise-identical coordinates, or size() if absent.
  std::size_t Find(std::span<const double> coords) const;

  bool operator==(const PointSet& other) const;

 private:
  std::vector<Point> points_;
  std::size_t dimension_;
};

using PointSetPtr = std::shared_ptr<const PointSet>;

PointSetPtr MakePointSet(std::vector<Point> points, std::size_t dimension);
PointSetPtr MakeLinePointSet(const std::vector<double>& positions);

// Nonnegative weights on the points of a PointSet.
class AtomicMeasure {
 public:
  AtomicMeasure(PointSetPtr support, std::vector<double> weights);

  const PointSetPtr& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }
  std::size_t size() const { return weights_.size(); }

 private:
  PointSetPtr support_;
  std::vector<double> weights_;
  double total_mass_;
};

// True when both measures live on the same point list, either by sharing the
// PointSet object or by holding equal coordinate lists.
bool SameSupport(const AtomicMeasure& a, const AtomicMeasure& b);

AtomicMeasure Normalize(const AtomicMeasure& m);

// (1/2) sum_i |w1_i - w2_i|.
double TvDistance(const AtomicMeasure& m1, const AtomicMeasure& m2);

// Image measure under an index map into `target`; target weights are summed
// left to right over the source indices.
AtomicMeasure Pushforward(const AtomicMeasure& m,
                          const std::vector<std::size_t>& map,
                          PointSetPtr target);

// Builds the empirical measure placing mass/|points| on every sample, merging
// bitwise-identical samples. Support order is first occurrence.
std::pair<PointSetPtr, AtomicMeasure> EmpiricalFromSample(
    const std::vector<Point>& points, double mass);

// Re-expresses both measures on the union of their supports (first m1's
// points, then the points of m2 not already present). Missing weights are 0.
std::pair<AtomicMeasure, AtomicMeasure> OnUnionSupport(const AtomicMeasure& m1,
                                                       const AtomicMeasure& m2);

// Measure CSV: header "weight,c1,...,cr", one row per support point,
// '#'-prefixed lines ignored.
AtomicMeasure ParseMeasureCsv(const std::string& text);
AtomicMeasure LoadMeasureCsv(const std::string& path);

}  // namespace krselect

#endif  // KRSELECT_MEASURES_H_
