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

#ifndef KRSELECT_SELECT_H_
#define KRSELECT_SELECT_H_

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "krselect/measures.h"
#include "krselect/metrics.h"

namespace krselect {

enum class CriterionMode { kEmpiricalJoint, kProductAdditive };

// Labeled points in an r-coordinate product space with one metric per
// coordinate, combined by l1. A NaN coordinate marks a missing value; when a
// subset is evaluated, samples missing any of its coordinates are dropped and
// the class measures renormalized to mass 1/2 each.
class SelectionProblem {
 public:
  SelectionProblem(std::vector<Point> points, std::vector<int> labels,
                   std::vector<Metric> coord_metrics, std::size_t k_target,
                   CriterionMode mode = CriterionMode::kEmpiricalJoint);

  // Splits `d` into per-coordinate metrics; `d` is either an l1 product or a
  // single-coordinate metric.
  static SelectionProblem FromMetric(std::vector<Point> points, std::vector<int> labels,
                                     const Metric& d, std::size_t k_target,
                                     CriterionMode mode = CriterionMode::kEmpiricalJoint);

  std::size_t num_features() const { return coord_metrics_.size(); }
  std::size_t num_samples() const { return points_.size(); }
  std::size_t k_target() const { return k_target_; }
  CriterionMode mode() const { return mode_; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<Metric>& coord_metrics() const { return coord_metrics_; }

  // Copy with a different target size.
  SelectionProblem WithTarget(std::size_t k_target) const;

  // Class measures (positive, negative) projected on `subset`, each of mass
  // 1/2, on a common merged support.
  std::pair<AtomicMeasure, AtomicMeasure> ProjectedMeasures(
      const std::vector<std::size_t>& subset) const;

  // l1 combination of the metrics of `subset`; a single metric is returned
  // unwrapped.
  Metric SubsetMetric(const std::vector<std::size_t>& subset) const;

 private:
  std::vector<Point> points_;
  std::vector<int> labels_;
  std::vector<Metric> coord_metrics_;
  std::size_t k_target_;
  CriterionMode mode_;
};

// J(A) = W1 of the class measures projected on A. Values are memoized by the
// subset bitmask, so repeated queries return identical doubles. Safe to call
// from several threads.
class CriterionJ {
 public:
  explicit CriterionJ(const SelectionProblem& problem);
  // Holds a reference, so a temporary problem would dangle.
  explicit CriterionJ(SelectionProblem&&) = delete;

  double operator()(const std::vector<std::size_t>& subset);
  double Evaluate(std::uint64_t mask);

  std::size_t cache_size() const;

 private:
  double Compute(std::uint64_t mask) const;

  const SelectionProblem& problem_;
  mutable std::mutex mu_;
  std::unordered_map<std::uint64_t, double> cache_;
};

enum class Strategy { kBranchAndBound, kForward, kBackward, kExhaustive };

const char* StrategyName(Strategy s);

struct SelectionResult {
  std::vector<std::size_t> subset;
  double j_value = 0.0;
  std::size_t nodes_evaluated = 0;  // criterion requests, cached or not
  std::size_t nodes_pruned = 0;
  Strategy strategy = Strategy::kBranchAndBound;
};

// Exact search over the minimum solution tree, pruning any node whose J does
// not exceed the best leaf found so far. Sibling evaluations may run on up to
// `threads` threads; the result does not depend on it.
SelectionResult BranchAndBound(const SelectionProblem& problem, CriterionJ& j,
                               int threads = 0);

SelectionResult SequentialSearch(const SelectionProblem& problem, CriterionJ& j, bool forward);

// Every subset of size k_target; TooLarge above one million subsets.
SelectionResult ExhaustiveSearch(const SelectionProblem& problem, CriterionJ& j);

SelectionResult RunStrategy(const SelectionProblem& problem, Strategy strategy,
                            int threads = 0);

std::uint64_t SubsetMask(const std::vector<std::size_t>& subset);
std::vector<std::size_t> MaskSubset(std::uint64_t mask);

// C(n, k), saturating at UINT64_MAX.
std::uint64_t BinomialCoefficient(std::size_t n, std::size_t k);

}  // namespace krselect

#endif  // KRSELECT_SELECT_H_
