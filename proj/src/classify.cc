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

#include "krselect/classify.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "krselect/error.h"

namespace krselect {
namespace {

constexpr double kLipschitzSlack = 1e-9;

void RequireShared(const ClassificationFunction& f, const AtomicMeasure& m1,
                   const AtomicMeasure& m2) {
  if (!SameSupport(m1, m2)) {
    throw Error(ErrorCode::kSupportMismatch, "measures must share a support");
  }
  if (f.size() != m1.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "classification function has " + std::to_string(f.size()) +
                    " values for a support of " + std::to_string(m1.size()));
  }
}

void RequireRange(const ClassificationFunction& f, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive and finite");
  }
  for (double v : f.values()) {
    if (v < 0.0 || v > delta) {
      throw Error(ErrorCode::kRangeViolation,
                  "value " + std::to_string(v) + " outside [0, " + std::to_string(delta) + "]");
    }
  }
}

// Sorted distinct values of f.
std::vector<double> Breakpoints(const ClassificationFunction& f) {
  std::vector<double> v = f.values();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ClassificationFunction::ClassificationFunction(std::vector<double> values)
    : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "classification values must be finite");
    }
  }
}

void ClassificationFunction::CertifyLipschitz(const Metric& d, const PointSet& support) {
  if (support.size() != values_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "support size differs from number of values");
  }
  d.CheckCompatible(support);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      const double dist = d.Distance(support[i], support[j]);
      if (std::abs(values_[i] - values_[j]) > dist + kLipschitzSlack) {
        lipschitz_certified_ = false;
        throw Error(ErrorCode::kNotLipschitz,
                    "|f(" + std::to_string(i) + ") - f(" + std::to_string(j) +
                        ")| exceeds their distance");
      }
    }
  }
  lipschitz_certified_ = true;
}

double SublevelMass(const ClassificationFunction& f, const AtomicMeasure& m, double t) {
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= t) mass += m.weight(i);
  }
  return mass;
}

double SublevelIntegral(const ClassificationFunction& f, const AtomicMeasure& m, double a,
                        double b) {
  if (b < a) throw Error(ErrorCode::kInvalidArgument, "integration bounds out of order");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum += m.weight(i) * std::max(0.0, b - std::max(a, f[i]));
  }
  return sum;
}

double CdfGapIntegral(const ClassificationFunction& f, const AtomicMeasure& m1,
                      const AtomicMeasure& m2) {
  RequireShared(f, m1, m2);
  const auto v = Breakpoints(f);
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    sum += std::abs(SublevelMass(f, m1, v[j]) - SublevelMass(f, m2, v[j])) * (v[j + 1] - v[j]);
  }
  return sum;
}

double EpsilonQuantity(const ClassificationFunction& f, double gamma, const AtomicMeasure& m1,
                       const AtomicMeasure& m2) {
  RequireShared(f, m1, m2);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum += f[i] <= gamma ? m1.weight(i) : m2.weight(i);
  }
  return sum;
}

ErrorReport Err(const ClassificationFunction& f, double eps, const AtomicMeasure& m1,
                const AtomicMeasure& m2) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kNegativeEps, "margin must be nonnegative");
  RequireShared(f, m1, m2);
  const double hi = eps / 2.0;
  const double lo = -eps / 2.0;
  ErrorReport r;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= hi) {
      r.eps12 += m1.weight(i);
      r.eps21 += m2.weight(i);
    }
    if (f[i] > lo) {
      r.eps12 += m2.weight(i);
      r.eps21 += m1.weight(i);
    }
  }
  r.threshold = hi;
  r.side = r.eps21 < r.eps12 ? ErrorSide::kSecondBelow : ErrorSide::kFirstBelow;
  r.err = std::min(r.eps12, r.eps21);
  return r;
}

double ValueWeightedError(const ClassificationFunction& f, double t, const AtomicMeasure& m1,
                          const AtomicMeasure& m2) {
  RequireShared(f, m1, m2);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum += f[i] * (f[i] > t ? m1.weight(i) : m2.weight(i));
  }
  return sum;
}

double GeneralErr(const ClassificationFunction& f, double t, const AtomicMeasure& m1,
                  const AtomicMeasure& m2, double delta) {
  RequireShared(f, m1, m2);
  RequireRange(f, delta);
  if (t < 0.0 || t > delta) {
    throw Error(ErrorCode::kRangeViolation, "threshold outside [0, delta]");
  }
  // E(f, t) + E(delta - f, t) on the same split B_t = {f <= t}: the value
  // weights add up to delta on every atom.
  double e12 = 0.0, e21 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool below = f[i] <= t;
    const double g = delta - f[i];
    e12 += below ? (f[i] + g) * m2.weight(i) : (f[i] + g) * m1.weight(i);
    e21 += below ? (f[i] + g) * m1.weight(i) : (f[i] + g) * m2.weight(i);
  }
  return std::min(e12, e21);
}

BayesResult BayesClassifier(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  if (!SameSupport(m1, m2)) {
    throw Error(ErrorCode::kSupportMismatch, "measures must share a support");
  }
  BayesResult r;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    // B is where m1 dominates; c_B misclassifies m1 off B and m2 on B.
    if (m1.weight(i) >= m2.weight(i)) {
      r.subset.push_back(i);
      r.error += m2.weight(i);
    } else {
      r.error += m1.weight(i);
    }
  }
  return r;
}

DeltaBoundResult DeltaBound(double w, double delta, double rho, double gamma) {
  if (!(rho >= 0.0) || !(rho < 1.0)) throw Error(ErrorCode::kInvalidRho, "rho must lie in [0, 1)");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive and finite");
  }
  if (!(w >= 0.0) || !std::isfinite(w) || !(gamma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "W and gamma must be nonnegative");
  }
  if (w > gamma * delta + 1e-9) {
    throw Error(ErrorCode::kWExceedsMass, "W is larger than gamma * delta");
  }
  const double raw = 2.0 / (1.0 - rho) * (gamma - w / delta);
  return raw < 0.0 ? DeltaBoundResult{0.0, true} : DeltaBoundResult{raw, false};
}

LowerBoundReport W1LowerBoundCheck(ClassificationFunction f, double eps, const AtomicMeasure& m1,
                                   const AtomicMeasure& m2, const Metric& d) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kNegativeEps, "margin must be nonnegative");
  if (eps > 1.0) throw Error(ErrorCode::kRangeViolation, "margin must not exceed 1");
  RequireShared(f, m1, m2);
  f.CertifyLipschitz(d, *m1.support());
  LowerBoundReport r;
  r.w1 = SolveTransport(m1, m2, CostMatrix(d, *m1.support(), *m1.support())).cost;
  r.delta = Err(f, eps, m1, m2).err;
  r.bound = eps * (1.0 - r.delta);
  r.holds = r.w1 >= r.bound - 1e-9;
  return r;
}

ThresholdResult ThresholdFromPotential(const TransportSolution& sol, const AtomicMeasure& m1,
                                       const AtomicMeasure& m2) {
  ClassificationFunction f(sol.potential);
  RequireShared(f, m1, m2);
  double best = -1.0;
  double t_star = 0.0;
  for (double t : Breakpoints(f)) {
    const double gap = std::abs(SublevelMass(f, m1, t) - SublevelMass(f, m2, t));
    if (gap > best) {
      best = gap;
      t_star = t;
    }
  }
  return {std::move(f), t_star, 1.0 - best};
}

ClassificationFunction CenteredPotential(const std::vector<double>& potential, double delta) {
  std::vector<double> v(potential);
  for (double& x : v) x -= delta / 2.0;
  return ClassificationFunction(std::move(v));
}

ComplexityReport ComplexityDescriptor(const std::vector<Point>& points,
                                      const std::vector<int>& labels, const Metric& d,
                                      double rho) {
  if (points.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per point required");
  }
  if (points.empty()) throw Error(ErrorCode::kEmptySample, "no points");
  if (!(rho >= 0.0) || !(rho < 1.0)) throw Error(ErrorCode::kInvalidRho, "rho must lie in [0, 1)");
  ComplexityReport r;
  for (int y : labels) {
    if (y == 1) {
      ++r.num_positive;
    } else if (y == -1) {
      ++r.num_negative;
    } else {
      throw Error(ErrorCode::kBadLabel, "labels must be +1 or -1");
    }
  }
  if (r.num_positive == 0 || r.num_negative == 0) {
    throw Error(ErrorCode::kSingleClass, "both classes must be present");
  }
  auto [support, unused] = EmpiricalFromSample(points, 1.0);
  d.CheckCompatible(*support);
  std::vector<double> pos(support->size(), 0.0), neg(support->size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t at = support->Find(points[i]);
    if (labels[i] == 1) {
      pos[at] += 0.5 / static_cast<double>(r.num_positive);
    } else {
      neg[at] += 0.5 / static_cast<double>(r.num_negative);
    }
  }
  r.delta = Diameter(d, *support);
  if (!(r.delta > 0.0)) throw Error(ErrorCode::kZeroDiameter, "all sample points coincide");
  const AtomicMeasure mu_pos(support, std::move(pos));
  const AtomicMeasure mu_neg(support, std::move(neg));
  r.w = SolveTransport(mu_pos, mu_neg, CostMatrix(d, *support, *support)).cost;
  r.ratio = r.w / r.delta;
  // The solver can overshoot gamma * delta by rounding only.
  const auto bound = DeltaBound(std::min(r.w, 0.5 * r.delta), r.delta, rho, 0.5);
  r.risk_bound = bound.value;
  r.risk_clamped = bound.clamped;
  return r;
}

AreaForms AreaDecomposition(const ClassificationFunction& f, double gamma, const AtomicMeasure& m1,
                            const AtomicMeasure& m2, double delta) {
  RequireShared(f, m1, m2);
  RequireRange(f, delta);
  if (gamma < 0.0 || gamma > delta) {
    throw Error(ErrorCode::kRangeViolation, "gamma outside [0, delta]");
  }
  if (std::abs(m1.total_mass() - m2.total_mass()) > 1e-9 * std::max(1.0, m1.total_mass())) {
    throw Error(ErrorCode::kMassMismatch, "measures must carry equal mass");
  }
  auto upper_set_form = [&](const AtomicMeasure& m) {
    const double mass = m.total_mass();
    const double at = SublevelMass(f, m, gamma);
    const double rectangle = gamma * (mass - at);
    const double above = (delta - gamma) * mass - SublevelIntegral(f, m, gamma, delta);
    const double below = gamma * at - SublevelIntegral(f, m, 0.0, gamma);
    return rectangle + above + below;
  };
  auto cdf_area_form = [&](const AtomicMeasure& m) {
    const double at = SublevelMass(f, m, gamma);
    const double above = SublevelIntegral(f, m, gamma, delta) - (delta - gamma) * at;
    const double below = SublevelIntegral(f, m, 0.0, gamma);
    return above + below + (delta - gamma) * at;
  };
  AreaForms r;
  r.form1 = upper_set_form(m1) - upper_set_form(m2);
  r.form2 = cdf_area_form(m2) - cdf_area_form(m1);
  for (std::size_t i = 0; i < f.size(); ++i) r.direct += f[i] * (m1.weight(i) - m2.weight(i));
  return r;
}

}  // namespace krselect
