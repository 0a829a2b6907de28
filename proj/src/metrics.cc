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

#include "krselect/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krselect/error.h"

namespace krselect {
namespace {

constexpr double kMetricTolerance = 1e-9;
constexpr std::size_t kMaxExplicitPoints = 512;

std::size_t ExplicitIndex(double coord, std::size_t n) {
  if (!(coord >= 0.0) || coord != std::floor(coord) || coord >= static_cast<double>(n)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "explicit-metric coordinate must be an index below " + std::to_string(n));
  }
  return static_cast<std::size_t>(coord);
}

}  // namespace

Metric Metric::Discrete(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::kInvalidMetric, "discrete metric needs k > 0");
  }
  Metric m;
  m.kind_ = MetricKind::kDiscrete;
  m.scale_ = k;
  return m;
}

Metric Metric::Line() {
  Metric m;
  m.kind_ = MetricKind::kLine;
  return m;
}

Metric Metric::Circle(double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference)) {
    throw Error(ErrorCode::kInvalidMetric, "circle needs a positive circumference");
  }
  Metric m;
  m.kind_ = MetricKind::kCircle;
  m.scale_ = circumference;
  return m;
}

Metric Metric::Explicit(DenseMatrix matrix) {
  const std::size_t n = matrix.rows();
  if (n == 0 || matrix.cols() != n) {
    throw Error(ErrorCode::kInvalidMetric, "explicit metric must be a non-empty square matrix");
  }
  if (n > kMaxExplicitPoints) {
    throw Error(ErrorCode::kInvalidMetric, "explicit metric limited to 512 points");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(matrix(i, i)) > kMetricTolerance) {
      throw Error(ErrorCode::kInvalidMetric, "nonzero diagonal entry");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::kInvalidMetric, "entries must be finite and nonnegative");
      }
      if (std::abs(v - matrix(j, i)) > kMetricTolerance) {
        throw Error(ErrorCode::kInvalidMetric, "matrix is not symmetric");
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (matrix(i, j) > matrix(i, k) + matrix(k, j) + kMetricTolerance) {
          throw Error(ErrorCode::kInvalidMetric,
                      "triangle inequality fails at (" + std::to_string(i) + "," +
                          std::to_string(j) + ") via " + std::to_string(k));
        }
      }
    }
  }
  Metric m;
  m.kind_ = MetricKind::kExplicit;
  m.matrix_ = std::move(matrix);
  return m;
}

Metric Metric::Product(std::vector<Metric> coords, Combine combine) {
  if (coords.empty()) throw Error(ErrorCode::kInvalidMetric, "product needs coordinates");
  for (const Metric& c : coords) {
    if (c.kind() == MetricKind::kProduct) {
      throw Error(ErrorCode::kInvalidMetric, "nested products are not supported");
    }
  }
  Metric m;
  m.kind_ = MetricKind::kProduct;
  m.coords_ = std::move(coords);
  m.combine_ = combine;
  return m;
}

std::size_t Metric::dimension() const {
  switch (kind_) {
    case MetricKind::kDiscrete: return 0;
    case MetricKind::kProduct: return coords_.size();
    default: return 1;
  }
}

double Metric::Distance(std::span<const double> p, std::span<const double> q) const {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "points differ in dimension");
  }
  const std::size_t dim = dimension();
  if (dim != 0 && p.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                Describe() + " expects " + std::to_string(dim) + " coordinates");
  }
  switch (kind_) {
    case MetricKind::kDiscrete:
      return std::equal(p.begin(), p.end(), q.begin()) ? 0.0 : scale_;
    case MetricKind::kLine:
      return std::abs(p[0] - q[0]);
    case MetricKind::kCircle: {
      const double gap = std::abs(CanonicalCirclePosition(p[0], scale_) -
                                  CanonicalCirclePosition(q[0], scale_));
      return std::min(gap, scale_ - gap);
    }
    case MetricKind::kExplicit: {
      const std::size_t n = matrix_.rows();
      return matrix_(ExplicitIndex(p[0], n), ExplicitIndex(q[0], n));
    }
    case MetricKind::kProduct: {
      double acc = 0.0;
      for (std::size_t c = 0; c < coords_.size(); ++c) {
        const double dc = coords_[c].Distance(p.subspan(c, 1), q.subspan(c, 1));
        acc = combine_ == Combine::kL1 ? acc + dc : std::max(acc, dc);
      }
      return acc;
    }
  }
  return 0.0;
}

void Metric::CheckCompatible(const PointSet& points) const {
  const std::size_t dim = dimension();
  if (dim != 0 && points.dimension() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                Describe() + " expects " + std::to_string(dim) + " coordinates, points have " +
                    std::to_string(points.dimension()));
  }
  if (kind_ == MetricKind::kExplicit) {
    for (const Point& p : points.points()) ExplicitIndex(p[0], matrix_.rows());
  }
  if (kind_ == MetricKind::kProduct) {
    for (std::size_t c = 0; c < coords_.size(); ++c) {
      if (coords_[c].kind() != MetricKind::kExplicit) continue;
      for (const Point& p : points.points()) ExplicitIndex(p[c], coords_[c].matrix().rows());
    }
  }
}

std::string Metric::Describe() const {
  std::ostringstream ss;
  switch (kind_) {
    case MetricKind::kDiscrete: ss << "discrete{k=" << scale_ << "}"; break;
    case MetricKind::kLine: ss << "line"; break;
    case MetricKind::kCircle: ss << "circle{C=" << scale_ << "}"; break;
    case MetricKind::kExplicit: ss << "explicit{n=" << matrix_.rows() << "}"; break;
    case MetricKind::kProduct:
      ss << (combine_ == Combine::kL1 ? "l1" : "linf") << "(";
      for (std::size_t c = 0; c < coords_.size(); ++c) {
        if (c) ss << ",";
        ss << coords_[c].Describe();
      }
      ss << ")";
      break;
  }
  return ss.str();
}

double CanonicalCirclePosition(double s, double circumference) {
  double r = std::fmod(s, circumference);
  if (r < 0.0) r += circumference;
  if (r >= circumference) r = 0.0;
  return r;
}

double Diameter(const Metric& d, const PointSet& points) {
  d.CheckCompatible(points);
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, d.Distance(points[i], points[j]));
    }
  }
  return best;
}

DenseMatrix CostMatrix(const Metric& d, const PointSet& a, const PointSet& b) {
  d.CheckCompatible(a);
  d.CheckCompatible(b);
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "point sets differ in dimension");
  }
  DenseMatrix cost(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) cost(i, j) = d.Distance(a[i], b[j]);
  }
  return cost;
}

Metric Project(const Metric& d, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw Error(ErrorCode::kEmptySubset, "projection onto no coordinates");
  if (d.kind() != MetricKind::kProduct) {
    if (subset.size() == 1 && subset[0] == 0) return d;
    throw Error(ErrorCode::kIndexOutOfRange, "non-product metric has a single coordinate");
  }
  std::vector<Metric> coords;
  coords.reserve(subset.size());
  for (std::size_t idx : subset) {
    if (idx >= d.coords().size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "coordinate " + std::to_string(idx) + " out of range");
    }
    coords.push_back(d.coords()[idx]);
  }
  return Metric::Product(std::move(coords), d.combine());
}

std::vector<Metric> CoordinateMetrics(const Metric& d) {
  if (d.kind() == MetricKind::kProduct) return d.coords();
  return {d};
}

}  // namespace krselect
