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

#ifndef KRSELECT_TREND_H_
#define KRSELECT_TREND_H_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "krselect/measures.h"

namespace krselect {

// Case/control counts per genotype category. Categories with no individuals
// are dropped at construction (see dropped_empty()) unless `drop_empty` is
// false, in which case they raise EmptyCategory.
class ContingencyTable {
 public:
  ContingencyTable(const std::vector<double>& cases, const std::vector<double>& controls,
                   bool drop_empty = true);

  const std::vector<double>& cases() const { return cases_; }
  const std::vector<double>& controls() const { return controls_; }
  const std::vector<double>& totals() const { return totals_; }
  // Original category index of every kept category.
  const std::vector<std::size_t>& kept() const { return kept_; }
  bool dropped_empty() const { return kept_.size() != num_categories_; }
  std::size_t num_categories() const { return num_categories_; }

  double n() const { return n_; }
  double r() const { return r_; }
  double s() const { return s_; }
  double p() const { return r_ / n_; }
  double q() const { return s_ / n_; }

  // Scores for the kept categories, taken from a full-length score vector.
  std::vector<double> KeptScores(const std::vector<double>& scores) const;

 private:
  std::size_t num_categories_;
  std::vector<double> cases_;
  std::vector<double> controls_;
  std::vector<double> totals_;
  std::vector<std::size_t> kept_;
  double n_ = 0.0;
  double r_ = 0.0;
  double s_ = 0.0;
};

inline constexpr std::array<double, 3> kAdditiveScores = {0.0, 0.5, 1.0};
inline constexpr std::array<double, 3> kDominantScores = {0.0, 1.0, 1.0};
inline constexpr std::array<double, 3> kRecessiveScores = {0.0, 0.0, 1.0};

// Brandt-Snedecor form: (1/pq) sum n_i (p_i - p)^2.
double PearsonChi2(const ContingencyTable& t);
// Expected-count form: sum (r_i - n_i p)^2/(n_i p) + sum (s_i - n_i q)^2/(n_i q).
double PearsonChi2TwoSum(const ContingencyTable& t);

// Cochran-Armitage trend statistic (score-weighted numerator form).
double Catt(const ContingencyTable& t, const std::vector<double>& scores);
// The same statistic through the fitted slope: (b^2/pq) sum n_i (c_i - cbar)^2.
double CattSlopeForm(const ContingencyTable& t, const std::vector<double>& scores);

struct CochranParts {
  double t_ca = 0.0;
  double t_fit = 0.0;
};

// Pearson = trend + lack of fit, with the fitted line p + b (c_i - cbar).
CochranParts CochranDecompose(const ContingencyTable& t, const std::vector<double>& scores);

// Probability weights mu_i with densities alpha_i; mean() = sum alpha_i mu_i.
class WeightedProfile {
 public:
  WeightedProfile(std::vector<double> weights, std::vector<double> alpha);

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& alpha() const { return alpha_; }
  std::size_t size() const { return weights_.size(); }
  double mean() const { return mean_; }

 private:
  std::vector<double> weights_;
  std::vector<double> alpha_;
  double mean_ = 0.0;
};

// (sum c (alpha - m) mu)^2 / V_mu(c).
double TFunctional(const std::vector<double>& c, const WeightedProfile& prof);

// Supremum of TFunctional over scores, attained at c = alpha:
// sum (alpha_i - p)^2 mu_i. Zero for constant alpha.
double TSup(const WeightedProfile& prof);

// Least-squares slope of alpha on c under mu.
double TrendSlope(const std::vector<double>& c, const WeightedProfile& prof);
// sum (alpha - p - b(c)(c - E c))^2 mu, so that TSup = TFunctional + residual.
double TrendResidual(const std::vector<double>& c, const WeightedProfile& prof);

// Maximizing middle score x* for scores (0, x, 1) on a three-point profile;
// alpha is sorted first.
double OptimalScore3pt(const WeightedProfile& prof);

struct GeneralizedStats {
  double t_ca = 0.0;
  double t_chi2 = 0.0;
};

// Generalized trend and Pearson statistics from raw case and control measures
// on a shared support. Points carrying no mass in either measure are ignored.
GeneralizedStats GeneralizedTrendStats(const AtomicMeasure& cases,
                                       const AtomicMeasure& controls,
                                       const std::vector<double>& scores);

struct Chi2Bounds {
  double lower = 0.0;
  double stat = 0.0;
  double upper = 0.0;
  // W1 of the normalized class measures under the k-discrete metric.
  double w1_reference = 0.0;
};

// Sandwich of the generalized Pearson statistic by the l1 norm of
// g = alpha_r - p_r: (n/p_r p_s)|g|_1^2 <= stat <= (n/p_r p_s)|g|_inf |g|_1.
Chi2Bounds KrChi2Bounds(const AtomicMeasure& cases, const AtomicMeasure& controls, double k);

// Class measures on a shared index support {0, 1, ..., m-1}.
std::pair<AtomicMeasure, AtomicMeasure> TableMeasures(const std::vector<double>& cases,
                                                      const std::vector<double>& controls);

// One table per line: "r0 r1 r2 s0 s1 s2", whitespace separated. Blank and
// '#' lines are skipped.
std::vector<std::array<double, 6>> ParseTrendTables(const std::string& text);
std::vector<std::array<double, 6>> LoadTrendTables(const std::string& path);

}  // namespace krselect

#endif  // KRSELECT_TREND_H_
