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

#ifndef KRSELECT_CLASSIFY_H_
#define KRSELECT_CLASSIFY_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "krselect/measures.h"
#include "krselect/metrics.h"
#include "krselect/transport.h"

namespace krselect {

// Real-valued classification function given by its value at every point of a
// shared support; c_{f,t} answers +1 where f > t and -1 where f <= t.
class ClassificationFunction {
 public:
  explicit ClassificationFunction(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  // Checks |f_i - f_j| <= d(x_i, x_j) + 1e-9 on every pair and remembers the
  // outcome. Throws NotLipschitz on failure.
  void CertifyLipschitz(const Metric& d, const PointSet& support);
  bool lipschitz_certified() const { return lipschitz_certified_; }

 private:
  std::vector<double> values_;
  bool lipschitz_certified_ = false;
};

enum class ErrorSide { kFirstBelow, kSecondBelow };

struct ErrorReport {
  double eps12 = 0.0;
  double eps21 = 0.0;
  double err = 0.0;
  double threshold = 0.0;
  ErrorSide side = ErrorSide::kFirstBelow;
};

// m1({f <= gamma}) + m2({f > gamma}).
double EpsilonQuantity(const ClassificationFunction& f, double gamma, const AtomicMeasure& m1,
                       const AtomicMeasure& m2);

// Margin error with thresholds at +eps/2 and -eps/2:
// eps12 = m1({f <= eps/2}) + m2({f > -eps/2}), eps21 with the roles swapped.
ErrorReport Err(const ClassificationFunction& f, double eps, const AtomicMeasure& m1,
                const AtomicMeasure& m2);

// Value-weighted error for f with values in [0, delta], min over the two
// orderings of E(f, t) + E(delta - f, t) with B_t = {f <= t}.
double GeneralErr(const ClassificationFunction& f, double t, const AtomicMeasure& m1,
                  const AtomicMeasure& m2, double delta);

// E(f, t; m1, m2) = int_{f > t} f dm1 + int_{f <= t} f dm2.
double ValueWeightedError(const ClassificationFunction& f, double t, const AtomicMeasure& m1,
                          const AtomicMeasure& m2);

struct BayesResult {
  std::vector<std::size_t> subset;  // B = {i : m1_i >= m2_i}
  double error = 0.0;               // m1(B^c) + m2(B)
};

BayesResult BayesClassifier(const AtomicMeasure& m1, const AtomicMeasure& m2);

struct DeltaBoundResult {
  double value = 0.0;
  bool clamped = false;  // the raw bound was negative
};

// (2 / (1 - rho)) (gamma - W / delta), clamped at 0.
DeltaBoundResult DeltaBound(double w, double delta, double rho, double gamma);

struct LowerBoundReport {
  double w1 = 0.0;
  double delta = 0.0;  // err(f, eps).err
  double bound = 0.0;  // eps (1 - delta)
  bool holds = false;
};

// For a 1-Lipschitz f: W1(m1, m2) >= eps (1 - err(f, eps)).
LowerBoundReport W1LowerBoundCheck(ClassificationFunction f, double eps, const AtomicMeasure& m1,
                                   const AtomicMeasure& m2, const Metric& d);

struct ThresholdResult {
  ClassificationFunction f;
  double t_star = 0.0;
  double err0 = 0.0;  // 1 - max_t |F1(t) - F2(t)|
};

// Thresholds the Kantorovich potential of the solution at the sublevel value with
// the largest CDF gap; ties go to the smallest threshold.
ThresholdResult ThresholdFromPotential(const TransportSolution& sol, const AtomicMeasure& m1,
                                       const AtomicMeasure& m2);

// f = g - delta/2 for a potential g with values in [0, delta]. At margin
// rho * delta its error is at most DeltaBound(W, delta, rho, mass).
ClassificationFunction CenteredPotential(const std::vector<double>& potential, double delta);

struct ComplexityReport {
  double w = 0.0;
  double delta = 0.0;
  double ratio = 0.0;
  double risk_bound = 0.0;
  bool risk_clamped = false;
  std::size_t num_positive = 0;
  std::size_t num_negative = 0;
};

// W1 between the half-mass class measures of a labeled sample, relative to
// the sample diameter. Labels are +1 / -1.
ComplexityReport ComplexityDescriptor(const std::vector<Point>& points,
                                      const std::vector<int>& labels, const Metric& d,
                                      double rho);

struct AreaForms {
  double form1 = 0.0;
  double form2 = 0.0;
  double direct = 0.0;
};

// Three evaluations of int f d(m1 - m2) for f in [0, delta] split at gamma:
// the layered upper-set form, the complementary CDF-area form and the direct
// sum. m1 and m2 must carry equal mass.
AreaForms AreaDecomposition(const ClassificationFunction& f, double gamma, const AtomicMeasure& m1,
                            const AtomicMeasure& m2, double delta);

// Sublevel mass m({f <= t}).
double SublevelMass(const ClassificationFunction& f, const AtomicMeasure& m, double t);

// int_a^b m({f <= y}) dy for a <= b, exact.
double SublevelIntegral(const ClassificationFunction& f, const AtomicMeasure& m, double a,
                        double b);

// int |F1 - F2| over the real line for the pushforwards of m1, m2 by f.
double CdfGapIntegral(const ClassificationFunction& f, const AtomicMeasure& m1,
                      const AtomicMeasure& m2);

}  // namespace krselect

#endif  // KRSELECT_CLASSIFY_H_
