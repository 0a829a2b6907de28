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

#ifndef KRSELECT_METRICS_H_
#define KRSELECT_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "krselect/matrix.h"
#include "krselect/measures.h"

namespace krselect {

enum class MetricKind { kDiscrete, kLine, kCircle, kExplicit, kProduct };
enum class Combine { kL1, kLInf };

// Symbolic ground metric. Non-product kinds act on one coordinate except
// Discrete, which compares whole coordinate vectors. Explicit metrics read
// their single coordinate as an integer index into the matrix.
class Metric {
 public:
  static Metric Discrete(double k);
  static Metric Line();
  static Metric Circle(double circumference);
  // Validates symmetry, zero diagonal, nonnegativity and the triangle
  // inequality (1e-9). Up to 512 points.
  static Metric Explicit(DenseMatrix matrix);
  static Metric Product(std::vector<Metric> coords, Combine combine = Combine::kL1);

  MetricKind kind() const { return kind_; }
  double k() const { return scale_; }
  double circumference() const { return scale_; }
  const DenseMatrix& matrix() const { return matrix_; }
  const std::vector<Metric>& coords() const { return coords_; }
  Combine combine() const { return combine_; }

  // Number of coordinates a point must have; 0 means any (Discrete).
  std::size_t dimension() const;

  double Distance(std::span<const double> p, std::span<const double> q) const;

  // Throws DimensionMismatch when `points` cannot be measured by this metric.
  void CheckCompatible(const PointSet& points) const;

  std::string Describe() const;

 private:
  Metric() = default;

  MetricKind kind_ = MetricKind::kLine;
  double scale_ = 0.0;
  DenseMatrix matrix_;
  std::vector<Metric> coords_;
  Combine combine_ = Combine::kL1;
};

// Reduces s into [0, circumference).
double CanonicalCirclePosition(double s, double circumference);

double Diameter(const Metric& d, const PointSet& points);

DenseMatrix CostMatrix(const Metric& d, const PointSet& a, const PointSet& b);

// Restricts a product metric to the coordinates in `subset` (in the given
// order), keeping the combine rule.
Metric Project(const Metric& d, const std::vector<std::size_t>& subset);

// Metric config JSON: {"coords":[{"type":"discrete","k":1.0}, {"type":"line"},
// {"type":"circle","circumference":1.0}], "combine":"l1"}. A single-element
// coords list yields that coordinate's metric unwrapped; an explicit matrix is
// accepted only as the sole coordinate.
Metric ParseMetricJson(const std::string& text);
Metric LoadMetricJson(const std::string& path);

// Per-coordinate view: the coordinate list of a product, or {d} otherwise.
std::vector<Metric> CoordinateMetrics(const Metric& d);

}  // namespace krselect

#endif  // KRSELECT_METRICS_H_
