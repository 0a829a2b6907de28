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

#include "krselect/select.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "krselect/closed_forms.h"
#include "krselect/error.h"

namespace krselect {
namespace {

constexpr std::uint64_t kMaxExhaustive = 1000000;

void ValidateSubset(const std::vector<std::size_t>& subset, std::size_t r) {
  if (subset.empty()) throw Error(ErrorCode::kEmptySubset, "subset is empty");
  for (std::size_t i : subset) {
    if (i >= r) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "feature " + std::to_string(i) + " out of range for " + std::to_string(r));
    }
  }
}

// Evaluates J on every mask, on up to `threads` workers.
std::vector<double> EvaluateAll(CriterionJ& j, const std::vector<std::uint64_t>& masks,
                                int threads) {
  std::vector<double> out(masks.size());
  const std::size_t workers =
      std::min<std::size_t>(threads > 1 ? static_cast<std::size_t>(threads) : 1, masks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < masks.size(); ++i) out[i] = j.Evaluate(masks[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < masks.size(); i = next++) out[i] = j.Evaluate(masks[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

class BranchAndBoundSearch {
 public:
  BranchAndBoundSearch(std::size_t r, std::size_t k, CriterionJ& j, int threads)
      : r_(r), depth_(r - k), j_(j), threads_(threads) {}

  SelectionResult Run() {
    const std::uint64_t full = r_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r_) - 1;
    if (depth_ == 0) {
      Leaf(full, j_.Evaluate(full));
      ++result_.nodes_evaluated;
    } else {
      Expand(full, -1, depth_);
    }
    result_.subset = MaskSubset(best_mask_);
    result_.j_value = best_;
    result_.strategy = Strategy::kBranchAndBound;
    return result_;
  }

 private:
  struct Child {
    std::uint64_t mask;
    std::size_t removed;
    bool leaf;
    double value;
  };

  void Leaf(std::uint64_t mask, double value) {
    if (value >= best_) {
      best_ = value;
      best_mask_ = mask;
    }
  }

  // `remaining` more features must be removed, all with index > last.
  void Expand(std::uint64_t mask, long last, std::size_t remaining) {
    std::vector<Child> children;
    for (std::size_t i = static_cast<std::size_t>(last + 1); i + remaining <= r_; ++i) {
      std::uint64_t child = mask & ~(std::uint64_t{1} << i);
      bool leaf = remaining == 1;
      if (!leaf && r_ - 1 - i == remaining - 1) {
        // Only one completion is left below this child; go straight to it.
        for (std::size_t t = i + 1; t < r_; ++t) child &= ~(std::uint64_t{1} << t);
        leaf = true;
      }
      children.push_back({child, i, leaf, 0.0});
    }
    std::vector<std::uint64_t> masks;
    for (const Child& c : children) masks.push_back(c.mask);
    const auto values = EvaluateAll(j_, masks, threads_);
    result_.nodes_evaluated += children.size();
    for (std::size_t c = 0; c < children.size(); ++c) children[c].value = values[c];
    std::stable_sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.value != b.value) return a.value > b.value;
      return a.removed < b.removed;
    });
    for (const Child& c : children) {
      if (c.leaf) {
        Leaf(c.mask, c.value);
      } else if (c.value <= best_) {
        ++result_.nodes_pruned;
      } else {
        Expand(c.mask, static_cast<long>(c.removed), remaining - 1);
      }
    }
  }

  std::size_t r_;
  std::size_t depth_;
  CriterionJ& j_;
  int threads_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::uint64_t best_mask_ = 0;
  SelectionResult result_;
};

void ValidateTarget(const SelectionProblem& p) {
  if (p.num_features() > 64) {
    throw Error(ErrorCode::kTooLarge, "at most 64 features are supported");
  }
}

}  // namespace

SelectionProblem::SelectionProblem(std::vector<Point> points, std::vector<int> labels,
                                   std::vector<Metric> coord_metrics, std::size_t k_target,
                                   CriterionMode mode)
    : points_(std::move(points)),
      labels_(std::move(labels)),
      coord_metrics_(std::move(coord_metrics)),
      k_target_(k_target),
      mode_(mode) {
  const std::size_t r = coord_metrics_.size();
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "no features");
  if (r > 64) throw Error(ErrorCode::kTooLarge, "at most 64 features are supported");
  if (k_target_ < 1 || k_target_ > r) {
    throw Error(ErrorCode::kInvalidArgument,
                "target size must lie in [1, " + std::to_string(r) + "]");
  }
  for (const Metric& m : coord_metrics_) {
    if (m.kind() == MetricKind::kProduct) {
      throw Error(ErrorCode::kInvalidMetric, "coordinate metrics must not be products");
    }
  }
  if (points_.size() != labels_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per point required");
  }
  if (points_.empty()) throw Error(ErrorCode::kEmptySample, "no samples");
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != r) {
      throw Error(ErrorCode::kDimensionMismatch, "sample " + std::to_string(i) + " has " +
                                                     std::to_string(points_[i].size()) +
                                                     " coordinates, expected " +
                                                     std::to_string(r));
    }
    if (labels_[i] == 1) {
      pos = true;
    } else if (labels_[i] == -1) {
      neg = true;
    } else {
      throw Error(ErrorCode::kBadLabel, "labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw Error(ErrorCode::kSingleClass, "both classes must be present");
}

SelectionProblem SelectionProblem::FromMetric(std::vector<Point> points, std::vector<int> labels,
                                              const Metric& d, std::size_t k_target,
                                              CriterionMode mode) {
  if (d.kind() == MetricKind::kProduct && d.combine() != Combine::kL1) {
    throw Error(ErrorCode::kInvalidMetric, "feature selection needs an l1 product metric");
  }
  return SelectionProblem(std::move(points), std::move(labels), CoordinateMetrics(d), k_target,
                          mode);
}

SelectionProblem SelectionProblem::WithTarget(std::size_t k_target) const {
  return SelectionProblem(points_, labels_, coord_metrics_, k_target, mode_);
}

std::pair<AtomicMeasure, AtomicMeasure> SelectionProblem::ProjectedMeasures(
    const std::vector<std::size_t>& subset) const {
  ValidateSubset(subset, num_features());
  std::vector<Point> projected;
  std::vector<int> labels;
  std::size_t num_pos = 0, num_neg = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    Point p;
    p.reserve(subset.size());
    bool missing = false;
    for (std::size_t c : subset) {
      if (std::isnan(points_[i][c])) {
        missing = true;
        break;
      }
      p.push_back(points_[i][c]);
    }
    if (missing) continue;
    (labels_[i] == 1 ? num_pos : num_neg) += 1;
    projected.push_back(std::move(p));
    labels.push_back(labels_[i]);
  }
  if (num_pos == 0 || num_neg == 0) {
    throw Error(ErrorCode::kAllMissing, "a class has no complete samples on the subset");
  }
  auto [support, unused] = EmpiricalFromSample(projected, 1.0);
  std::vector<double> pos(support->size(), 0.0), neg(support->size(), 0.0);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    const std::size_t at = support->Find(projected[i]);
    if (labels[i] == 1) {
      pos[at] += 0.5 / static_cast<double>(num_pos);
    } else {
      neg[at] += 0.5 / static_cast<double>(num_neg);
    }
  }
  return {AtomicMeasure(support, std::move(pos)), AtomicMeasure(support, std::move(neg))};
}

Metric SelectionProblem::SubsetMetric(const std::vector<std::size_t>& subset) const {
  ValidateSubset(subset, num_features());
  if (subset.size() == 1) return coord_metrics_[subset[0]];
  std::vector<Metric> coords;
  for (std::size_t c : subset) coords.push_back(coord_metrics_[c]);
  return Metric::Product(std::move(coords), Combine::kL1);
}

CriterionJ::CriterionJ(const SelectionProblem& problem) : problem_(problem) {
  if (problem.num_features() > 64) {
    throw Error(ErrorCode::kTooLarge, "at most 64 features are supported");
  }
}

double CriterionJ::operator()(const std::vector<std::size_t>& subset) {
  ValidateSubset(subset, problem_.num_features());
  return Evaluate(SubsetMask(subset));
}

double CriterionJ::Evaluate(std::uint64_t mask) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
  }
  const double value = Compute(mask);
  std::lock_guard<std::mutex> lock(mu_);
  // A concurrent caller may have won the race; keep the first value.
  return cache_.emplace(mask, value).first->second;
}

std::size_t CriterionJ::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

double CriterionJ::Compute(std::uint64_t mask) const {
  const auto subset = MaskSubset(mask);
  ValidateSubset(subset, problem_.num_features());
  const auto [pos, neg] = problem_.ProjectedMeasures(subset);
  W1Options options;
  options.product_measures = problem_.mode() == CriterionMode::kProductAdditive;
  return W1(pos, neg, problem_.SubsetMetric(subset), options);
}

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBranchAndBound:
      return "bb";
    case Strategy::kForward:
      return "forward";
    case Strategy::kBackward:
      return "backward";
    case Strategy::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

SelectionResult BranchAndBound(const SelectionProblem& problem, CriterionJ& j, int threads) {
  ValidateTarget(problem);
  return BranchAndBoundSearch(problem.num_features(), problem.k_target(), j, threads).Run();
}

SelectionResult SequentialSearch(const SelectionProblem& problem, CriterionJ& j, bool forward) {
  ValidateTarget(problem);
  const std::size_t r = problem.num_features();
  SelectionResult result;
  result.strategy = forward ? Strategy::kForward : Strategy::kBackward;
  std::vector<bool> in(r, !forward);
  std::size_t size = forward ? 0 : r;
  auto current = [&] {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < r; ++i) {
      if (in[i]) s.push_back(i);
    }
    return s;
  };
  if (!forward && size == problem.k_target()) {
    result.j_value = j(current());
    ++result.nodes_evaluated;
  }
  while (size != problem.k_target()) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t pick = r;
    for (std::size_t i = 0; i < r; ++i) {
      if (in[i] != !forward) continue;
      in[i] = forward;
      const double value = j(current());
      in[i] = !forward;
      ++result.nodes_evaluated;
      if (value > best) {
        best = value;
        pick = i;
      }
    }
    in[pick] = forward;
    size = forward ? size + 1 : size - 1;
    result.j_value = best;
  }
  result.subset = current();
  return result;
}

SelectionResult ExhaustiveSearch(const SelectionProblem& problem, CriterionJ& j) {
  ValidateTarget(problem);
  const std::size_t r = problem.num_features();
  const std::size_t k = problem.k_target();
  if (BinomialCoefficient(r, k) > kMaxExhaustive) {
    throw Error(ErrorCode::kTooLarge, "C(" + std::to_string(r) + ", " + std::to_string(k) +
                                          ") exceeds one million subsets");
  }
  SelectionResult result;
  result.strategy = Strategy::kExhaustive;
  result.j_value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    const double value = j(s);
    ++result.nodes_evaluated;
    // Lexicographic enumeration: strict > keeps the first maximizer.
    if (value > result.j_value) {
      result.j_value = value;
      result.subset = s;
    }
    std::size_t pos = k;
    while (pos > 0 && s[pos - 1] == r - k + pos - 1) --pos;
    if (pos == 0) break;
    ++s[pos - 1];
    for (std::size_t t = pos; t < k; ++t) s[t] = s[t - 1] + 1;
  }
  return result;
}

SelectionResult RunStrategy(const SelectionProblem& problem, Strategy strategy, int threads) {
  CriterionJ j(problem);
  switch (strategy) {
    case Strategy::kBranchAndBound:
      return BranchAndBound(problem, j, threads);
    case Strategy::kForward:
      return SequentialSearch(problem, j, true);
    case Strategy::kBackward:
      return SequentialSearch(problem, j, false);
    case Strategy::kExhaustive:
      return ExhaustiveSearch(problem, j);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
}

std::uint64_t SubsetMask(const std::vector<std::size_t>& subset) {
  std::uint64_t mask = 0;
  for (std::size_t i : subset) {
    if (i >= 64) throw Error(ErrorCode::kIndexOutOfRange, "feature index above 63");
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

std::vector<std::size_t> MaskSubset(std::uint64_t mask) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < 64; ++i) {
    if (mask >> i & 1) s.push_back(i);
  }
  return s;
}

std::uint64_t BinomialCoefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // Exact in 128 bits while the result fits 64.
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace krselect
