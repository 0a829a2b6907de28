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

#include "krselect/trend.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "krselect/closed_forms.h"
#include "krselect/error.h"
#include "text_util.h"

namespace krselect {
namespace {

constexpr double kMaxExactCount = 9007199254740992.0;  // 2^53
constexpr double kZeroVariance = 1e-14;

void CheckScores(const std::vector<double>& c, std::size_t n) {
  if (c.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(n) + " scores, got " + std::to_string(c.size()));
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "scores must be finite");
  }
}

struct ScoreMoments {
  double mean = 0.0;       // cbar = sum n_i c_i / n
  double spread = 0.0;     // sum n_i (c_i - cbar)^2
  double covariance = 0.0; // sum n_i (p_i - p)(c_i - cbar)
};

ScoreMoments Moments(const ContingencyTable& t, const std::vector<double>& c) {
  ScoreMoments m;
  for (std::size_t i = 0; i < c.size(); ++i) m.mean += t.totals()[i] * c[i];
  m.mean /= t.n();
  double scale = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double dc = c[i] - m.mean;
    const double pi = t.cases()[i] / t.totals()[i];
    m.spread += t.totals()[i] * dc * dc;
    m.covariance += t.totals()[i] * (pi - t.p()) * dc;
    scale = std::max(scale, c[i] * c[i]);
  }
  if (m.spread <= kZeroVariance * t.n() * (1.0 + scale)) {
    throw Error(ErrorCode::kConstantScores, "scores are constant on the observed categories");
  }
  return m;
}

void CheckMargins(const ContingencyTable& t) {
  if (t.r() <= 0.0 || t.s() <= 0.0) {
    throw Error(ErrorCode::kDegenerateMargin, "table needs both cases and controls");
  }
}

struct ClassProfile {
  WeightedProfile profile;
  std::vector<std::size_t> kept;  // support indices with mass
  double n;
  double p_r;
  double p_s;
};

ClassProfile BuildClassProfile(const AtomicMeasure& cases, const AtomicMeasure& controls) {
  if (!SameSupport(cases, controls)) {
    throw Error(ErrorCode::kSupportMismatch, "case and control measures need a shared support");
  }
  const double n = cases.total_mass() + controls.total_mass();
  if (!(n > 0.0)) throw Error(ErrorCode::kZeroMass, "no mass in either class");
  const double p_r = cases.total_mass() / n;
  const double p_s = controls.total_mass() / n;
  if (p_r <= 0.0 || p_s <= 0.0) {
    throw Error(ErrorCode::kDegenerateMargin, "both classes need positive mass");
  }
  std::vector<double> mu, alpha;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const double total = cases.weight(i) + controls.weight(i);
    if (total <= 0.0) continue;
    kept.push_back(i);
    mu.push_back(total / n);
    alpha.push_back(cases.weight(i) / total);
  }
  return {WeightedProfile(std::move(mu), std::move(alpha)), std::move(kept), n, p_r, p_s};
}

}  // namespace

ContingencyTable::ContingencyTable(const std::vector<double>& cases,
                                   const std::vector<double>& controls, bool drop_empty)
    : num_categories_(cases.size()) {
  if (cases.size() != controls.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "case and control rows differ in length");
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (double v : {cases[i], controls[i]}) {
      if (!(v >= 0.0) || v != std::floor(v) || v > kMaxExactCount) {
        throw Error(ErrorCode::kInvalidArgument, "counts must be nonnegative integers below 2^53");
      }
    }
    const double total = cases[i] + controls[i];
    if (total == 0.0) {
      if (!drop_empty) {
        throw Error(ErrorCode::kEmptyCategory, "category " + std::to_string(i) + " is empty");
      }
      continue;
    }
    kept_.push_back(i);
    cases_.push_back(cases[i]);
    controls_.push_back(controls[i]);
    totals_.push_back(total);
    r_ += cases[i];
    s_ += controls[i];
  }
  n_ = r_ + s_;
  if (kept_.size() < 2) {
    throw Error(ErrorCode::kEmptyCategory, "fewer than two categories have observations");
  }
}

std::vector<double> ContingencyTable::KeptScores(const std::vector<double>& scores) const {
  CheckScores(scores, num_categories_);
  std::vector<double> out;
  out.reserve(kept_.size());
  for (std::size_t i : kept_) out.push_back(scores[i]);
  return out;
}

double PearsonChi2(const ContingencyTable& t) {
  CheckMargins(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.totals().size(); ++i) {
    const double dev = t.cases()[i] / t.totals()[i] - t.p();
    sum += t.totals()[i] * dev * dev;
  }
  return sum / (t.p() * t.q());
}

double PearsonChi2TwoSum(const ContingencyTable& t) {
  CheckMargins(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.totals().size(); ++i) {
    const double er = t.totals()[i] * t.p();
    const double es = t.totals()[i] * t.q();
    sum += (t.cases()[i] - er) * (t.cases()[i] - er) / er;
    sum += (t.controls()[i] - es) * (t.controls()[i] - es) / es;
  }
  return sum;
}

double Catt(const ContingencyTable& t, const std::vector<double>& scores) {
  CheckMargins(t);
  const auto c = t.KeptScores(scores);
  Moments(t, c);
  double num = 0.0, first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    num += c[i] * (t.q() * t.cases()[i] - t.p() * t.controls()[i]);
    const double share = t.totals()[i] / t.n();
    first += c[i] * share;
    second += c[i] * c[i] * share;
  }
  return num * num / (t.n() * t.p() * t.q() * (second - first * first));
}

double CattSlopeForm(const ContingencyTable& t, const std::vector<double>& scores) {
  CheckMargins(t);
  const auto m = Moments(t, t.KeptScores(scores));
  const double b = m.covariance / m.spread;
  return b * b * m.spread / (t.p() * t.q());
}

CochranParts CochranDecompose(const ContingencyTable& t, const std::vector<double>& scores) {
  CheckMargins(t);
  const auto c = t.KeptScores(scores);
  const auto m = Moments(t, c);
  const double b = m.covariance / m.spread;
  CochranParts parts;
  parts.t_ca = Catt(t, scores);
  double fit = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double predicted = t.p() + b * (c[i] - m.mean);
    const double dev = t.cases()[i] / t.totals()[i] - predicted;
    fit += t.totals()[i] * dev * dev;
  }
  parts.t_fit = fit / (t.p() * t.q());
  return parts;
}

WeightedProfile::WeightedProfile(std::vector<double> weights, std::vector<double> alpha)
    : weights_(std::move(weights)), alpha_(std::move(alpha)) {
  if (weights_.size() != alpha_.size() || weights_.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "profile needs matching non-empty weights and densities");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !(alpha_[i] >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "profile weights and densities must be nonnegative");
    }
    total += weights_[i];
    mean_ += alpha_[i] * weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kMassMismatch, "profile weights must sum to 1");
  }
}

double TFunctional(const std::vector<double>& c, const WeightedProfile& prof) {
  CheckScores(c, prof.size());
  double ec = 0.0, ec2 = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double mu = prof.weights()[i];
    ec += c[i] * mu;
    ec2 += c[i] * c[i] * mu;
    cross += c[i] * (prof.alpha()[i] - prof.mean()) * mu;
  }
  // Centered second moment, less cancellation than ec2 - ec^2.
  double variance = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    variance += (c[i] - ec) * (c[i] - ec) * prof.weights()[i];
  }
  if (variance <= kZeroVariance) {
    throw Error(ErrorCode::kZeroVariance, "scores are constant under the profile weights");
  }
  return cross * cross / variance;
}

double TSup(const WeightedProfile& prof) {
  double sum = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double dev = prof.alpha()[i] - prof.mean();
    sum += dev * dev * prof.weights()[i];
  }
  return sum;
}

double TrendSlope(const std::vector<double>& c, const WeightedProfile& prof) {
  CheckScores(c, prof.size());
  double ec = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) ec += c[i] * prof.weights()[i];
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double dc = c[i] - ec;
    num += (prof.alpha()[i] - prof.mean()) * dc * prof.weights()[i];
    den += dc * dc * prof.weights()[i];
  }
  if (den <= kZeroVariance) {
    throw Error(ErrorCode::kZeroVariance, "scores are constant under the profile weights");
  }
  return num / den;
}

double TrendResidual(const std::vector<double>& c, const WeightedProfile& prof) {
  const double b = TrendSlope(c, prof);
  double ec = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) ec += c[i] * prof.weights()[i];
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = prof.alpha()[i] - prof.mean() - b * (c[i] - ec);
    sum += r * r * prof.weights()[i];
  }
  return sum;
}

double OptimalScore3pt(const WeightedProfile& prof) {
  if (prof.size() != 3) {
    throw Error(ErrorCode::kDimensionMismatch, "three-point profile required");
  }
  for (double mu : prof.weights()) {
    if (!(mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "all three weights must be positive");
  }
  std::array<double, 3> a = {prof.alpha()[0], prof.alpha()[1], prof.alpha()[2]};
  std::sort(a.begin(), a.end());
  if (a[0] == a[2]) throw Error(ErrorCode::kDegenerateAlpha, "alpha is constant");
  return (a[1] - a[0]) / (a[2] - a[0]);
}

GeneralizedStats GeneralizedTrendStats(const AtomicMeasure& cases, const AtomicMeasure& controls,
                                       const std::vector<double>& scores) {
  CheckScores(scores, cases.size());
  const ClassProfile cp = BuildClassProfile(cases, controls);
  std::vector<double> c;
  for (std::size_t i : cp.kept) c.push_back(scores[i]);
  const double factor = cp.n / (cp.p_r * cp.p_s);
  return {factor * TFunctional(c, cp.profile), factor * TSup(cp.profile)};
}

Chi2Bounds KrChi2Bounds(const AtomicMeasure& cases, const AtomicMeasure& controls, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidMetric, "discrete metric needs k > 0");
  const ClassProfile cp = BuildClassProfile(cases, controls);
  const WeightedProfile& prof = cp.profile;
  double l1 = 0.0, l2sq = 0.0, linf = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double g = std::abs(prof.alpha()[i] - cp.p_r);
    l1 += g * prof.weights()[i];
    l2sq += g * g * prof.weights()[i];
    linf = std::max(linf, g);
  }
  const double factor = cp.n / (cp.p_r * cp.p_s);
  Chi2Bounds b;
  b.lower = factor * l1 * l1;
  b.stat = factor * l2sq;
  b.upper = factor * linf * l1;
  b.w1_reference = W1Discrete(Normalize(cases), Normalize(controls), k);
  return b;
}

std::pair<AtomicMeasure, AtomicMeasure> TableMeasures(const std::vector<double>& cases,
                                                      const std::vector<double>& controls) {
  if (cases.size() != controls.size() || cases.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "case and control rows differ in length");
  }
  std::vector<double> idx(cases.size());
  std::iota(idx.begin(), idx.end(), 0.0);
  auto support = MakeLinePointSet(idx);
  return {AtomicMeasure(support, cases), AtomicMeasure(support, controls)};
}

std::vector<std::array<double, 6>> ParseTrendTables(const std::string& text) {
  std::vector<std::array<double, 6>> tables;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = internal::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = internal::SplitWhitespace(line);
    if (fields.size() != 6) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected 6 counts");
    }
    std::array<double, 6> row{};
    for (std::size_t f = 0; f < 6; ++f) {
      const auto v = internal::ParseDouble(fields[f]);
      if (!v || *v < 0.0 || *v != std::floor(*v)) {
        throw Error(ErrorCode::kMalformedLine,
                    "line " + std::to_string(line_no) + ": bad count '" + fields[f] + "'");
      }
      row[f] = *v;
    }
    tables.push_back(row);
  }
  return tables;
}

std::vector<std::array<double, 6>> LoadTrendTables(const std::string& path) {
  return ParseTrendTables(internal::ReadFile(path));
}

}  // namespace krselect
