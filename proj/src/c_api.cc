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

#include "krselect/krselect.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "krselect/classify.h"
#include "krselect/closed_forms.h"
#include "krselect/error.h"
#include "krselect/ingest.h"
#include "krselect/measures.h"
#include "krselect/metrics.h"
#include "krselect/select.h"
#include "krselect/transport.h"
#include "krselect/trend.h"

struct kr_measure {
  krselect::AtomicMeasure m;
};

struct kr_metric {
  krselect::Metric d;
};

struct kr_sample {
  krselect::LabeledSample sample;
  double call_rate = -1.0;
};

namespace {

using krselect::Error;
using krselect::ErrorCode;

thread_local std::string last_error;

kr_status Fail(kr_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
kr_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return KR_OK;
  } catch (const Error& e) {
    return Fail(static_cast<kr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(KR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(KR_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

krselect::W1Method ToMethod(kr_w1_method method) {
  switch (method) {
    case KR_W1_AUTO:
      return krselect::W1Method::kAuto;
    case KR_W1_TV:
      return krselect::W1Method::kTv;
    case KR_W1_LINE:
      return krselect::W1Method::kLine;
    case KR_W1_CIRCLE:
      return krselect::W1Method::kCircle;
    case KR_W1_LP:
      return krselect::W1Method::kLp;
    case KR_W1_PRODUCT:
      return krselect::W1Method::kProduct;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown W1 method");
}

krselect::Strategy ToStrategy(kr_strategy s) {
  switch (s) {
    case KR_STRATEGY_BB:
      return krselect::Strategy::kBranchAndBound;
    case KR_STRATEGY_FORWARD:
      return krselect::Strategy::kForward;
    case KR_STRATEGY_BACKWARD:
      return krselect::Strategy::kBackward;
    case KR_STRATEGY_EXHAUSTIVE:
      return krselect::Strategy::kExhaustive;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
}

// Random probability weights with roughly a quarter of the atoms empty.
std::vector<double> RandomWeights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = u(rng) < 0.25 ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> DistinctUniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v;
  while (v.size() < n) {
    const double x = u(rng);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  return v;
}

double ExactW1(const krselect::AtomicMeasure& m1, const krselect::AtomicMeasure& m2,
               const krselect::Metric& d) {
  return krselect::SolveTransport(m1, m2, krselect::CostMatrix(d, *m1.support(), *m1.support()))
      .cost;
}

// Returns (closed form, exact) for one random instance of `family`.
std::pair<double, double> VerifyInstance(kr_verify_family family, std::mt19937_64& rng) {
  using krselect::AtomicMeasure;
  using krselect::Metric;
  std::uniform_int_distribution<std::size_t> size(2, 30);
  switch (family) {
    case KR_VERIFY_LINE: {
      auto support = krselect::MakeLinePointSet(DistinctUniform(rng, size(rng), -10.0, 10.0));
      const AtomicMeasure m1(support, RandomWeights(rng, support->size()));
      const AtomicMeasure m2(support, RandomWeights(rng, support->size()));
      return {krselect::W1Line(m1, m2), ExactW1(m1, m2, Metric::Line())};
    }
    case KR_VERIFY_DISCRETE: {
      const double k = std::bernoulli_distribution(0.5)(rng) ? 1.0 : 2.5;
      auto support = krselect::MakeLinePointSet(DistinctUniform(rng, size(rng), 0.0, 1.0));
      const AtomicMeasure m1(support, RandomWeights(rng, support->size()));
      const AtomicMeasure m2(support, RandomWeights(rng, support->size()));
      return {krselect::W1Discrete(m1, m2, k), ExactW1(m1, m2, Metric::Discrete(k))};
    }
    case KR_VERIFY_CIRCLE: {
      const double c = std::bernoulli_distribution(0.5)(rng) ? 1.0 : 2.0 * std::numbers::pi;
      auto support = krselect::MakeLinePointSet(DistinctUniform(rng, size(rng), 0.0, c));
      const AtomicMeasure m1(support, RandomWeights(rng, support->size()));
      const AtomicMeasure m2(support, RandomWeights(rng, support->size()));
      return {krselect::W1Circle(m1, m2, c), ExactW1(m1, m2, Metric::Circle(c))};
    }
    case KR_VERIFY_PRODUCT: {
      const std::size_t r = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
      std::vector<std::vector<double>> pos(r), w1(r), w2(r);
      std::vector<krselect::MarginalPair> pairs;
      for (std::size_t c = 0; c < r; ++c) {
        pos[c] = DistinctUniform(rng, 3, 0.0, 5.0);
        w1[c] = RandomWeights(rng, 3);
        w2[c] = RandomWeights(rng, 3);
        auto line = krselect::MakeLinePointSet(pos[c]);
        pairs.push_back({AtomicMeasure(line, w1[c]), AtomicMeasure(line, w2[c]), Metric::Line()});
      }
      std::vector<krselect::Point> points;
      std::vector<double> j1, j2;
      std::vector<std::size_t> idx(r, 0);
      while (true) {
        krselect::Point p(r);
        double a = 1.0, b = 1.0;
        for (std::size_t c = 0; c < r; ++c) {
          p[c] = pos[c][idx[c]];
          a *= w1[c][idx[c]];
          b *= w2[c][idx[c]];
        }
        points.push_back(std::move(p));
        j1.push_back(a);
        j2.push_back(b);
        std::size_t c = 0;
        while (c < r && ++idx[c] == 3) idx[c++] = 0;
        if (c == r) break;
      }
      auto support = krselect::MakePointSet(std::move(points), r);
      const AtomicMeasure m1(support, j1);
      const AtomicMeasure m2(support, j2);
      const Metric d = Metric::Product(std::vector<Metric>(r, Metric::Line()));
      // Products of probability vectors can drift from mass 1 by an ulp.
      return {krselect::W1ProductAdditive(pairs),
              ExactW1(krselect::Normalize(m1), krselect::Normalize(m2), d)};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown verification family");
}

}  // namespace

extern "C" {

const char* kr_version(void) { return "0.1.0"; }

const char* kr_status_name(kr_status status) {
  if (status == KR_OK) return "Ok";
  if (status == KR_INTERNAL) return "Internal";
  if (status >= KR_ZERO_MASS && status <= KR_NUMERIC_FAILURE) {
    return krselect::ErrorCodeName(static_cast<ErrorCode>(status));
  }
  return "Unknown";
}

int kr_status_is_input_error(kr_status status) {
  switch (status) {
    case KR_OK:
    case KR_NON_FINITE_COST:
    case KR_NUMERIC_FAILURE:
    case KR_INTERNAL:
      return 0;
    default:
      return 1;
  }
}

const char* kr_last_error(void) { return last_error.c_str(); }

kr_status kr_measure_load_csv(const char* path, kr_measure** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new kr_measure{krselect::LoadMeasureCsv(path)};
  });
}

kr_status kr_measure_parse_csv(const char* text, kr_measure** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new kr_measure{krselect::ParseMeasureCsv(text)};
  });
}

kr_status kr_measure_create(const double* coords, const double* weights, size_t n, size_t dim,
                            kr_measure** out) {
  return Guard([&] {
    Require(coords != nullptr && weights != nullptr && out != nullptr, "null argument");
    std::vector<krselect::Point> points;
    for (size_t i = 0; i < n; ++i) points.emplace_back(coords + i * dim, coords + (i + 1) * dim);
    *out = new kr_measure{krselect::AtomicMeasure(krselect::MakePointSet(std::move(points), dim),
                                                  std::vector<double>(weights, weights + n))};
  });
}

size_t kr_measure_size(const kr_measure* m) { return m ? m->m.size() : 0; }
double kr_measure_mass(const kr_measure* m) { return m ? m->m.total_mass() : 0.0; }
void kr_measure_free(kr_measure* m) { delete m; }

kr_status kr_metric_load_json(const char* path, kr_metric** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new kr_metric{krselect::LoadMetricJson(path)};
  });
}

kr_status kr_metric_parse_json(const char* text, kr_metric** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new kr_metric{krselect::ParseMetricJson(text)};
  });
}

kr_status kr_metric_genotype(size_t r, int line_scores, double k, kr_metric** out) {
  return Guard([&] {
    Require(out != nullptr && r > 0, "need an output handle and at least one SNP");
    const krselect::Metric coord =
        line_scores ? krselect::Metric::Line() : krselect::Metric::Discrete(k);
    *out = new kr_metric{r == 1 ? coord
                                : krselect::Metric::Product(std::vector<krselect::Metric>(r, coord))};
  });
}

size_t kr_metric_dimension(const kr_metric* d) { return d ? d->d.dimension() : 0; }
void kr_metric_free(kr_metric* d) { delete d; }

kr_status kr_w1(const kr_measure* m1, const kr_measure* m2, const kr_metric* d,
                kr_w1_method method, double* out) {
  return Guard([&] {
    Require(m1 && m2 && d && out, "null argument");
    krselect::W1Options options;
    options.method = ToMethod(method);
    *out = krselect::W1(m1->m, m2->m, d->d, options);
  });
}

kr_status kr_w1_certified(const kr_measure* m1, const kr_measure* m2, const kr_metric* d,
                          double* w1, kr_certificate* cert) {
  return Guard([&] {
    Require(m1 && m2 && d && w1, "null argument");
    const auto [a, b] = krselect::OnUnionSupport(m1->m, m2->m);
    d->d.CheckCompatible(*a.support());
    const auto cost = krselect::CostMatrix(d->d, *a.support(), *a.support());
    const auto sol = krselect::SolveTransport(a, b, cost);
    *w1 = sol.cost;
    if (cert) {
      const auto c = krselect::VerifyOptimality(sol, cost, a, b);
      *cert = {c.optimal ? 1 : 0,         c.max_violation,       c.marginal_violation,
               c.lipschitz_violation,     c.slackness_violation, c.duality_gap};
    }
  });
}

kr_status kr_trend(const double* cases, const double* controls, const double* scores, size_t m,
                   double k, kr_trend_result* out) {
  return Guard([&] {
    Require(cases && controls && scores && out, "null argument");
    const std::vector<double> r(cases, cases + m), s(controls, controls + m);
    const std::vector<double> c(scores, scores + m);
    const krselect::ContingencyTable table(r, s);
    kr_trend_result res{};
    res.pearson = krselect::PearsonChi2(table);
    res.pearson_two_sum = krselect::PearsonChi2TwoSum(table);
    const auto parts = krselect::CochranDecompose(table, c);
    res.catt = parts.t_ca;
    res.catt_slope = krselect::CattSlopeForm(table, c);
    res.t_fit = parts.t_fit;
    const auto [mr, ms] = krselect::TableMeasures(r, s);
    const auto gen = krselect::GeneralizedTrendStats(mr, ms, c);
    res.generalized_t_ca = gen.t_ca;
    res.generalized_t_chi2 = gen.t_chi2;
    const auto bounds = krselect::KrChi2Bounds(mr, ms, k);
    res.bound_lower = bounds.lower;
    res.bound_stat = bounds.stat;
    res.bound_upper = bounds.upper;
    res.w1_discrete = bounds.w1_reference;
    res.dropped_empty = table.dropped_empty() ? 1 : 0;
    *out = res;
  });
}

kr_status kr_trend_load_tables(const char* path, double** rows, size_t* count) {
  return Guard([&] {
    Require(path && rows && count, "null argument");
    const auto tables = krselect::LoadTrendTables(path);
    auto buffer = std::make_unique<double[]>(std::max<size_t>(1, 6 * tables.size()));
    for (size_t i = 0; i < tables.size(); ++i) {
      std::copy(tables[i].begin(), tables[i].end(), buffer.get() + 6 * i);
    }
    *count = tables.size();
    *rows = buffer.release();
  });
}

void kr_free_doubles(double* p) { delete[] p; }

kr_status kr_sample_load_csv(const char* path, kr_sample** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = new kr_sample{krselect::LoadLabeledCsv(path), -1.0};
  });
}

kr_status kr_sample_load_gen(const char* gen_path, const char* phenotype_path, double threshold,
                             kr_sample** out) {
  return Guard([&] {
    Require(gen_path && phenotype_path && out, "null argument");
    const auto ds = krselect::LoadGen(gen_path, threshold);
    const auto labels = krselect::LoadPhenotype(phenotype_path);
    const auto problem = krselect::ToSelectionProblem(ds, labels, {}, {}, 1);
    krselect::LabeledSample sample{problem.points(), problem.labels(), ds.num_snps()};
    *out = new kr_sample{std::move(sample), ds.call_rate};
  });
}

size_t kr_sample_size(const kr_sample* s) { return s ? s->sample.points.size() : 0; }
size_t kr_sample_dimension(const kr_sample* s) { return s ? s->sample.dimension : 0; }
double kr_sample_call_rate(const kr_sample* s) { return s ? s->call_rate : -1.0; }
void kr_sample_free(kr_sample* s) { delete s; }

kr_status kr_complexity(const kr_sample* s, const kr_metric* d, double rho,
                        kr_complexity_result* out) {
  return Guard([&] {
    Require(s && d && out, "null argument");
    const auto r = krselect::ComplexityDescriptor(s->sample.points, s->sample.labels, d->d, rho);
    *out = {r.w,
            r.delta,
            r.ratio,
            r.risk_bound,
            r.risk_clamped ? 1 : 0,
            r.num_positive,
            r.num_negative};
  });
}

kr_status kr_select(const kr_sample* s, const kr_metric* d, size_t k, kr_strategy strategy,
                    int product_additive, int threads, kr_selection_result* out) {
  return Guard([&] {
    Require(s && d && out, "null argument");
    const auto problem = krselect::SelectionProblem::FromMetric(
        s->sample.points, s->sample.labels, d->d, k,
        product_additive ? krselect::CriterionMode::kProductAdditive
                         : krselect::CriterionMode::kEmpiricalJoint);
    const auto r = krselect::RunStrategy(problem, ToStrategy(strategy), threads);
    kr_selection_result res{};
    res.subset_size = r.subset.size();
    std::copy(r.subset.begin(), r.subset.end(), res.subset);
    res.j_value = r.j_value;
    res.nodes_evaluated = r.nodes_evaluated;
    res.nodes_pruned = r.nodes_pruned;
    *out = res;
  });
}

kr_status kr_verify(kr_verify_family family, unsigned long long seed, size_t instances,
                    double tol, kr_verify_stats* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    Require(tol >= 0.0, "tolerance must be nonnegative");
    std::mt19937_64 rng(seed);
    kr_verify_stats stats{};
    for (size_t i = 0; i < instances; ++i) {
      const auto [closed, exact] = VerifyInstance(family, rng);
      const double err = std::abs(closed - exact) / std::max(1.0, exact);
      stats.max_error = std::max(stats.max_error, err);
      ++stats.checked;
      if (!(err <= tol)) ++stats.failed;
    }
    *out = stats;
  });
}

}  // extern "C"
