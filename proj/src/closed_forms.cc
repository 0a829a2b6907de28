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

#include "krselect/closed_forms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "krselect/error.h"
#include "krselect/transport.h"

namespace krselect {
namespace {

constexpr double kMassTolerance = 1e-9;

void CheckOneDimensionalPair(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  if (!SameSupport(m1, m2)) {
    throw Error(ErrorCode::kSupportMismatch, "measures live on different point sets");
  }
  if (m1.support()->dimension() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "closed form needs a 1-dimensional support");
  }
  if (std::abs(m1.total_mass() - m2.total_mass()) > kMassTolerance) {
    throw Error(ErrorCode::kMassMismatch, "total masses differ");
  }
}

std::vector<std::size_t> SortedOrder(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

// Single coordinate metric behind a one-coordinate product.
const Metric& Unwrapped(const Metric& d) {
  if (d.kind() == MetricKind::kProduct && d.coords().size() == 1) return d.coords().front();
  return d;
}

double W1Lp(const AtomicMeasure& a, const AtomicMeasure& b, const Metric& d) {
  return SolveTransport(a, b, CostMatrix(d, *a.support(), *a.support())).cost;
}

double W1ProductOfMarginals(const AtomicMeasure& a, const AtomicMeasure& b, const Metric& d) {
  if (d.kind() != MetricKind::kProduct || d.combine() != Combine::kL1) {
    throw Error(ErrorCode::kInvalidArgument, "additive path needs an l1 product metric");
  }
  d.CheckCompatible(*a.support());
  std::vector<MarginalPair> pairs;
  for (std::size_t c = 0; c < d.coords().size(); ++c) {
    pairs.push_back({Marginal(a, c), Marginal(b, c), d.coords()[c]});
  }
  return W1ProductAdditive(pairs);
}

}  // namespace

double W1Discrete(const AtomicMeasure& m1, const AtomicMeasure& m2, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidMetric, "discrete metric needs k > 0");
  return k * TvDistance(m1, m2);
}

double W1Line(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  CheckOneDimensionalPair(m1, m2);
  const PointSet& pts = *m1.support();
  std::vector<double> x(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) x[i] = pts[i][0];
  const auto order = SortedOrder(x);
  double cdf_gap = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r + 1 < order.size(); ++r) {
    const std::size_t i = order[r];
    cdf_gap += m1.weight(i) - m2.weight(i);
    total += std::abs(cdf_gap) * (x[order[r + 1]] - x[i]);
  }
  return total;
}

CutProfile BuildCutProfile(const AtomicMeasure& m1, const AtomicMeasure& m2,
                           double circumference) {
  CheckOneDimensionalPair(m1, m2);
  if (!(circumference > 0.0)) {
    throw Error(ErrorCode::kInvalidMetric, "circle needs a positive circumference");
  }
  const PointSet& pts = *m1.support();
  std::vector<double> s(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s[i] = CanonicalCirclePosition(pts[i][0], circumference);
  }
  const auto order = SortedOrder(s);
  CutProfile profile;
  profile.circumference = circumference;
  double cum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t i = order[r];
    cum += m1.weight(i) - m2.weight(i);
    profile.positions.push_back(s[i]);
    profile.alpha.push_back(cum);
    const double next = r + 1 < order.size() ? s[order[r + 1]]
                                             : s[order.front()] + circumference;
    profile.lengths.push_back(next - s[i]);
  }
  return profile;
}

double CircleCutCost(const CutProfile& profile, double a) {
  double total = 0.0;
  for (std::size_t j = 0; j < profile.alpha.size(); ++j) {
    total += profile.lengths[j] * std::abs(profile.alpha[j] - a);
  }
  return total;
}

double CircleCutConstant(const CutProfile& profile) {
  const double half = 0.5 * std::accumulate(profile.lengths.begin(), profile.lengths.end(), 0.0);
  std::vector<std::size_t> order = SortedOrder(profile.alpha);
  // Walk from the largest alpha down, accumulating the length where alpha >= t.
  double upper_length = 0.0;
  for (std::size_t r = order.size(); r-- > 0;) {
    const double t = profile.alpha[order[r]];
    upper_length += profile.lengths[order[r]];
    // Include every tie at t before testing.
    while (r > 0 && profile.alpha[order[r - 1]] == t) {
      --r;
      upper_length += profile.lengths[order[r]];
    }
    if (upper_length > half) return t;
  }
  return order.empty() ? 0.0 : profile.alpha[order.front()];
}

double W1Circle(const AtomicMeasure& m1, const AtomicMeasure& m2, double circumference) {
  const CutProfile profile = BuildCutProfile(m1, m2, circumference);
  double best = std::numeric_limits<double>::infinity();
  for (double a : profile.alpha) best = std::min(best, CircleCutCost(profile, a));
  return profile.alpha.empty() ? 0.0 : best;
}

double W1ProductAdditive(const std::vector<MarginalPair>& pairs) {
  double total = 0.0;
  for (const MarginalPair& p : pairs) {
    if (p.metric.kind() == MetricKind::kProduct && p.metric.coords().size() > 1) {
      throw Error(ErrorCode::kInvalidArgument, "additive terms must be single coordinates");
    }
    total += W1(p.m1, p.m2, p.metric);
  }
  return total;
}

double W1(const AtomicMeasure& m1, const AtomicMeasure& m2, const Metric& d,
          const W1Options& options) {
  auto [a, b] = OnUnionSupport(m1, m2);
  d.CheckCompatible(*a.support());
  const Metric& base = Unwrapped(d);
  switch (options.method) {
    case W1Method::kTv:
      if (base.kind() != MetricKind::kDiscrete) {
        throw Error(ErrorCode::kInvalidArgument, "tv method needs a discrete metric");
      }
      return W1Discrete(a, b, base.k());
    case W1Method::kLine:
      if (base.kind() != MetricKind::kLine) {
        throw Error(ErrorCode::kInvalidArgument, "line method needs a line metric");
      }
      return W1Line(a, b);
    case W1Method::kCircle:
      if (base.kind() != MetricKind::kCircle) {
        throw Error(ErrorCode::kInvalidArgument, "circle method needs a circle metric");
      }
      return W1Circle(a, b, base.circumference());
    case W1Method::kLp:
      return W1Lp(a, b, d);
    case W1Method::kProduct:
      return W1ProductOfMarginals(a, b, d);
    case W1Method::kAuto:
      break;
  }
  switch (base.kind()) {
    case MetricKind::kDiscrete: return W1Discrete(a, b, base.k());
    case MetricKind::kLine: return W1Line(a, b);
    case MetricKind::kCircle: return W1Circle(a, b, base.circumference());
    case MetricKind::kExplicit: return W1Lp(a, b, d);
    case MetricKind::kProduct:
      if (options.product_measures && base.combine() == Combine::kL1) {
        return W1ProductOfMarginals(a, b, base);
      }
      return W1Lp(a, b, base);
  }
  return W1Lp(a, b, d);
}

AtomicMeasure Marginal(const AtomicMeasure& m, std::size_t coord) {
  return ProjectMeasure(m, {coord});
}

AtomicMeasure ProjectMeasure(const AtomicMeasure& m, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw Error(ErrorCode::kEmptySubset, "projection onto no coordinates");
  const PointSet& pts = *m.support();
  for (std::size_t c : subset) {
    if (c >= pts.dimension()) {
      throw Error(ErrorCode::kIndexOutOfRange, "coordinate " + std::to_string(c) + " out of range");
    }
  }
  std::vector<std::size_t> map(pts.size());
  std::vector<Point> images(pts.size(), Point(subset.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < subset.size(); ++k) images[i][k] = pts[i][subset[k]];
  }
  // Merge coinciding images; the sample helper already does bitwise merging.
  auto [support, unused] = EmpiricalFromSample(images, 1.0);
  for (std::size_t i = 0; i < pts.size(); ++i) map[i] = support->Find(images[i]);
  return Pushforward(m, map, support);
}

}  // namespace krselect
