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

#ifndef KRSELECT_CLOSED_FORMS_H_
#define KRSELECT_CLOSED_FORMS_H_

#include <vector>

#include "krselect/measures.h"
#include "krselect/metrics.h"

namespace krselect {

// W1 under the k-discrete metric: k times the total variation distance.
double W1Discrete(const AtomicMeasure& m1, const AtomicMeasure& m2, double k);

// W1 on the real line from the cumulative differences of the sorted support.
double W1Line(const AtomicMeasure& m1, const AtomicMeasure& m2);

// Cumulative differences around the circle, starting from the smallest
// canonical position, with forward arc lengths to the next support point.
struct CutProfile {
  std::vector<double> positions;
  std::vector<double> alpha;
  std::vector<double> lengths;
  double circumference = 1.0;
};

CutProfile BuildCutProfile(const AtomicMeasure& m1, const AtomicMeasure& m2,
                           double circumference);

// Largest attained alpha value t with lambda(alpha >= t) > C/2.
double CircleCutConstant(const CutProfile& profile);

// sum_j l_j |alpha_j - a|.
double CircleCutCost(const CutProfile& profile, double a);

// min over a in {alpha_j} of CircleCutCost.
double W1Circle(const AtomicMeasure& m1, const AtomicMeasure& m2,
                double circumference);

struct MarginalPair {
  AtomicMeasure m1;
  AtomicMeasure m2;
  Metric metric;
};

// Sum of per-coordinate distances; equals W1 of the l1 product only when the
// joint measures are products of these marginals.
double W1ProductAdditive(const std::vector<MarginalPair>& pairs);

enum class W1Method { kAuto, kTv, kLine, kCircle, kLp, kProduct };

struct W1Options {
  W1Method method = W1Method::kAuto;
  // Lets kAuto take the additive path on l1 products; the caller asserts the
  // measures are products of their marginals.
  bool product_measures = false;
};

// Dispatches to a closed form or to the exact solver. Measures on different
// point lists are moved to their union support first.
double W1(const AtomicMeasure& m1, const AtomicMeasure& m2, const Metric& d,
          const W1Options& options = {});

// Marginal of `m` on coordinate `coord` (merged, first-occurrence order).
AtomicMeasure Marginal(const AtomicMeasure& m, std::size_t coord);

// Pushforward onto the coordinates in `subset`, merging points that
// coincide after projection.
AtomicMeasure ProjectMeasure(const AtomicMeasure& m,
                             const std::vector<std::size_t>& subset);

}  // namespace krselect

#endif  // KRSELECT_CLOSED_FORMS_H_
