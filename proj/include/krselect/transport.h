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

#ifndef KRSELECT_TRANSPORT_H_
#define KRSELECT_TRANSPORT_H_

#include <cstddef>
#include <vector>

#include "krselect/matrix.h"
#include "krselect/measures.h"
#include "krselect/metrics.h"

namespace krselect {

struct PlanEntry {
  std::size_t from;
  std::size_t to;
  double flow;
};

// Optimal coupling of two equal-mass measures on a shared support together
// with a 1-Lipschitz Kantorovich potential f (min f = 0) satisfying
// cost = sum_i f_i (mu1_i - mu2_i).
struct TransportSolution {
  double cost = 0.0;
  std::vector<PlanEntry> plan;
  std::vector<double> potential;
  int iterations = 0;
};

// Exact transportation solver by successive shortest paths. `cost` is the
// metric matrix on the shared support of m1 and m2.
TransportSolution SolveTransport(const AtomicMeasure& m1,
                                 const AtomicMeasure& m2,
                                 const DenseMatrix& cost);

// Forms the union support when m1 and m2 differ, materializes the cost matrix
// of `d` on it and solves. The returned indices refer to the union support.
TransportSolution SolveTransport(const AtomicMeasure& m1,
                                 const AtomicMeasure& m2, const Metric& d);

struct OptimalityCertificate {
  bool optimal = false;
  double max_violation = 0.0;
  double marginal_violation = 0.0;
  double lipschitz_violation = 0.0;
  double slackness_violation = 0.0;
  double duality_gap = 0.0;
};

// Checks primal feasibility (1e-9), the 1-Lipschitz property of the potential
// (1e-9) and f_i - f_j = c_ij on every arc carrying more than 1e-12 (1e-7).
// Never throws on malformed solutions; reports them as violations.
OptimalityCertificate VerifyOptimality(const TransportSolution& sol,
                                       const DenseMatrix& cost,
                                       const AtomicMeasure& m1,
                                       const AtomicMeasure& m2);

}  // namespace krselect

#endif  // KRSELECT_TRANSPORT_H_
