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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every random check uses a fixed seed.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "krselect/classify.h"
#include "krselect/closed_forms.h"
#include "krselect/ingest.h"
#include "krselect/select.h"
#include "krselect/transport.h"
#include "krselect/trend.h"
#include "test_util.h"

namespace krselect {
namespace {

namespace kt = krselect::testing;

// Collects failures; the first few are kept for the report line.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void Near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << " want " << want;
    Expect(std::abs(got - want) <= tol, os.str());
  }
  void Max(double err) { max_err_ = std::max(max_err_, err); }
  void Note(const std::string& info) { info_.push_back(info); }
  bool ok() const { return failures_ == 0 && checks_ > 0; }
  std::string Summary() const {
    std::ostringstream os;
    os << checks_ << " checks";
    if (max_err_ > 0.0) os << ", max err " << max_err_;
    for (const auto& i : info_) os << ", " << i;
    for (const auto& n : notes_) os << "; " << n;
    if (failures_ > 0) os << " (" << failures_ << " failed)";
    return os.str();
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  double max_err_ = 0.0;
  std::vector<std::string> notes_;
  std::vector<std::string> info_;
};

// Wraps a check body so that an unexpected exception fails the criterion.
template <typename F>
void Guarded(Check& c, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.Expect(false, std::string("exception: ") + e.what());
  }
}

double Lp(const AtomicMeasure& a, const AtomicMeasure& b, const Metric& d) {
  return SolveTransport(a, b, CostMatrix(d, *a.support(), *b.support())).cost;
}

// 1. Line closed form against the exact solver.
void LineOracle(Check& c) {
  std::mt19937_64 rng(1001);
  for (int t = 0; t < 300; ++t) {
    const auto [a, b] = kt::RandomLinePair(rng, kt::RandomSize(rng, 1, 30));
    const double lp = Lp(a, b, Metric::Line());
    const double cf = W1Line(a, b);
    c.Max(std::abs(cf - lp));
    c.Expect(std::abs(cf - lp) <= 1e-8 * std::max(1.0, lp), "line instance " + std::to_string(t));
  }
  auto s = MakeLinePointSet({0.0, 1.0, 3.0});
  const AtomicMeasure m1(s, {0.5, 0.5, 0.0}), m2(s, {0.0, 0.0, 1.0});
  c.Near(W1Line(m1, m2), 2.5, 1e-12, "golden line");
  c.Near(Lp(m1, m2, Metric::Line()), 2.5, 1e-12, "golden line exact");
}

// 2. k times total variation against the exact solver.
void DiscreteOracle(Check& c) {
  std::mt19937_64 rng(1002);
  for (int t = 0; t < 300; ++t) {
    const double k = t % 2 == 0 ? 1.0 : 2.5;
    const auto [a, b] = kt::RandomLinePair(rng, kt::RandomSize(rng, 1, 30));
    const double lp = Lp(a, b, Metric::Discrete(k));
    const double cf = W1Discrete(a, b, k);
    c.Max(std::abs(cf - lp));
    c.Expect(std::abs(cf - lp) <= 1e-8 * std::max(1.0, lp), "discrete instance " + std::to_string(t));
    c.Expect(std::abs(cf - k * kt::TvOracle(a.weights(), b.weights())) <= 1e-12, "tv oracle");
  }
  auto s = MakeLinePointSet({0.0, 1.0});
  c.Near(W1Discrete(AtomicMeasure(s, {1.0, 0.0}), AtomicMeasure(s, {0.5, 0.5}), 1.0), 0.5, 1e-15,
         "golden discrete");
}

// 3. Circle cut formula against the exact solver with arc-length costs.
void CircleOracle(Check& c) {
  std::mt19937_64 rng(1003);
  for (int t = 0; t < 300; ++t) {
    const double circ = t % 2 == 0 ? 1.0 : 2.0 * std::numbers::pi;
    const std::size_t n = kt::RandomSize(rng, 1, 30);
    auto s = MakeLinePointSet(kt::DistinctValues(rng, n, 0.0, circ));
    const AtomicMeasure a(s, kt::RandomWeights(rng, n)), b(s, kt::RandomWeights(rng, n));
    const double lp = Lp(a, b, Metric::Circle(circ));
    const double cf = W1Circle(a, b, circ);
    c.Max(std::abs(cf - lp));
    c.Expect(std::abs(cf - lp) <= 1e-8 * std::max(1.0, lp), "circle instance " + std::to_string(t));
    // The cost a -> sum l_j |alpha_j - a| is convex and piecewise linear with
    // kinks at the alpha_j, so its minimum is the smallest kink value.
    const auto profile = BuildCutProfile(a, b, circ);
    double best = std::numeric_limits<double>::infinity();
    for (double alpha : profile.alpha) {
      double cost = 0.0;
      for (std::size_t j = 0; j < profile.alpha.size(); ++j) {
        cost += profile.lengths[j] * std::abs(profile.alpha[j] - alpha);
      }
      best = std::min(best, cost);
    }
    const double at_cut = CircleCutCost(profile, CircleCutConstant(profile));
    c.Expect(std::abs(at_cut - best) <= 1e-9, "cut constant " + std::to_string(t));
  }
}

// Random product instance: per-coordinate marginals, joint = product measure.
struct ProductInstance {
  AtomicMeasure joint1, joint2;
  Metric metric;
  std::vector<MarginalPair> marginals;
};

ProductInstance RandomProduct(std::mt19937_64& rng) {
  const std::size_t dims = kt::RandomSize(rng, 2, 4);
  const std::size_t per = dims == 2 ? 7 : dims == 3 ? 4 : 3;
  std::vector<std::vector<double>> xs, w1s, w2s;
  std::vector<Metric> metrics;
  std::vector<MarginalPair> marginals;
  for (std::size_t j = 0; j < dims; ++j) {
    const std::size_t n = kt::RandomSize(rng, 1, per);
    Metric m = Metric::Line();
    double lo = -3.0, hi = 3.0;
    switch (kt::RandomSize(rng, 0, 2)) {
      case 0:
        m = Metric::Line();
        break;
      case 1:
        m = Metric::Discrete(0.5 + std::uniform_real_distribution<double>(0, 2)(rng));
        break;
      default:
        m = Metric::Circle(2.0);
        lo = 0.0;
        hi = 2.0;
    }
    xs.push_back(kt::DistinctValues(rng, n, lo, hi));
    w1s.push_back(kt::RandomWeights(rng, n));
    w2s.push_back(kt::RandomWeights(rng, n));
    auto s = MakeLinePointSet(xs.back());
    marginals.push_back({AtomicMeasure(s, w1s.back()), AtomicMeasure(s, w2s.back()), m});
    metrics.push_back(m);
  }
  std::vector<Point> pts(1, Point{});
  std::vector<double> j1(1, 1.0), j2(1, 1.0);
  for (std::size_t j = 0; j < dims; ++j) {
    std::vector<Point> next;
    std::vector<double> n1, n2;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      for (std::size_t i = 0; i < xs[j].size(); ++i) {
        Point q = pts[p];
        q.push_back(xs[j][i]);
        next.push_back(std::move(q));
        n1.push_back(j1[p] * w1s[j][i]);
        n2.push_back(j2[p] * w2s[j][i]);
      }
    }
    pts = std::move(next);
    j1 = std::move(n1);
    j2 = std::move(n2);
  }
  auto support = MakePointSet(std::move(pts), dims);
  return {AtomicMeasure(support, j1), AtomicMeasure(support, j2),
          Metric::Product(std::move(metrics)), std::move(marginals)};
}

// 4. Additivity over l1 products of product measures.
void ProductAdditivity(Check& c) {
  std::mt19937_64 rng(1004);
  for (int t = 0; t < 100; ++t) {
    const auto inst = RandomProduct(rng);
    const double lp = Lp(inst.joint1, inst.joint2, inst.metric);
    const double add = W1ProductAdditive(inst.marginals);
    c.Max(std::abs(lp - add));
    c.Expect(std::abs(lp - add) <= 1e-8 * std::max(1.0, lp), "product " + std::to_string(t));
  }
}

// 5. Optimality certificates of exact solves, checked from scratch.
void DualityCertificate(Check& c) {
  std::mt19937_64 rng(1005);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = kt::RandomSize(rng, 1, 25);
    PointSetPtr s;
    Metric d = Metric::Line();
    switch (t % 4) {
      case 0:
        s = MakeLinePointSet(kt::DistinctValues(rng, n, -5, 5));
        d = Metric::Line();
        break;
      case 1:
        s = MakeLinePointSet(kt::DistinctValues(rng, n, 0, 3));
        d = Metric::Circle(3.0);
        break;
      case 2:
        s = MakeLinePointSet(kt::DistinctValues(rng, n, -5, 5));
        d = Metric::Discrete(1.5);
        break;
      default:
        s = MakePointSet(kt::RandomGridPoints(rng, n, 3, 4), 3);
        d = Metric::Product({Metric::Line(), Metric::Line(), Metric::Discrete(2.0)});
    }
    const AtomicMeasure a(s, kt::RandomWeights(rng, n)), b(s, kt::RandomWeights(rng, n));
    const auto cost = CostMatrix(d, *s, *s);
    const auto sol = SolveTransport(a, b, cost);
    const auto cert = kt::IndependentCertificate(sol, cost, a.weights(), b.weights());
    c.Max(std::max({cert.marginal, cert.dual, cert.gap, cert.slackness}));
    c.Expect(cert.marginal <= 1e-9 && cert.dual <= 1e-9, "feasibility " + std::to_string(t));
    c.Expect(cert.gap <= 1e-7, "gap " + std::to_string(t));
    c.Expect(cert.slackness <= 1e-7, "tight arcs " + std::to_string(t));
    c.Expect(VerifyOptimality(sol, cost, a, b).optimal, "library certificate " + std::to_string(t));
  }
}

// 6. Metric properties of W1.
void MetricProperties(Check& c) {
  std::mt19937_64 rng(1006);
  const double slack = 1e-9;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = kt::RandomSize(rng, 2, 20);
    auto s = MakeLinePointSet(kt::DistinctValues(rng, n, -5, 5));
    const AtomicMeasure a(s, kt::RandomWeights(rng, n)), b(s, kt::RandomWeights(rng, n)),
        e(s, kt::RandomWeights(rng, n));
    const Metric d = Metric::Line();
    const double ab = Lp(a, b, d), ba = Lp(b, a, d), ae = Lp(a, e, d), eb = Lp(e, b, d);
    c.Expect(std::abs(ab - ba) <= slack, "symmetry");
    c.Expect(ab <= ae + eb + slack, "triangle");

    // Removing a common part leaves the distance unchanged.
    const double frac = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<double> ra(n), rb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double common = frac * std::min(a.weight(i), b.weight(i));
      ra[i] = a.weight(i) - common;
      rb[i] = b.weight(i) - common;
    }
    if (std::accumulate(ra.begin(), ra.end(), 0.0) > 1e-12) {
      c.Expect(std::abs(Lp(AtomicMeasure(s, ra), AtomicMeasure(s, rb), d) - ab) <= slack,
               "mass subtraction");
    }

    // Diameter times total variation bounds W1.
    c.Expect(ab <= Diameter(d, *s) * kt::TvOracle(a.weights(), b.weights()) + slack, "tv bound");

    // An L-Lipschitz map contracts W1 by at most L. Clamping merges points.
    const double lip = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    std::vector<double> image;
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = lip * std::clamp((*s)[i][0], -1.0, 1.0);
      auto it = std::find(image.begin(), image.end(), y);
      map[i] = static_cast<std::size_t>(it - image.begin());
      if (it == image.end()) image.push_back(y);
    }
    auto target = MakeLinePointSet(image);
    const double pushed = Lp(Pushforward(a, map, target), Pushforward(b, map, target), d);
    c.Expect(pushed <= lip * ab + slack, "lipschitz contraction");

    // Reflections and translations are isometries of the line.
    std::vector<double> moved(n);
    const double shift = std::uniform_real_distribution<double>(-10, 10)(rng);
    for (std::size_t i = 0; i < n; ++i) moved[i] = shift - (*s)[i][0];
    auto ms = MakeLinePointSet(moved);
    c.Expect(std::abs(Lp(AtomicMeasure(ms, a.weights()), AtomicMeasure(ms, b.weights()), d) - ab) <=
                 slack,
             "line isometry");
  }
  // Rotations of the circle and coordinate swaps of a product.
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = kt::RandomSize(rng, 2, 15);
    const auto pos = kt::DistinctValues(rng, n, 0.0, 2.0);
    auto s = MakeLinePointSet(pos);
    const auto w1 = kt::RandomWeights(rng, n), w2 = kt::RandomWeights(rng, n);
    const double base = Lp(AtomicMeasure(s, w1), AtomicMeasure(s, w2), Metric::Circle(2.0));
    const double rot = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    std::vector<double> turned(n);
    for (std::size_t i = 0; i < n; ++i) turned[i] = CanonicalCirclePosition(pos[i] + rot, 2.0);
    auto ts = MakeLinePointSet(turned);
    c.Expect(std::abs(Lp(AtomicMeasure(ts, w1), AtomicMeasure(ts, w2), Metric::Circle(2.0)) -
                      base) <= slack,
             "circle isometry");

    auto pts = kt::RandomGridPoints(rng, n, 2, 5);
    const Metric prod = Metric::Product({Metric::Line(), Metric::Line()});
    auto ps = MakePointSet(pts, 2);
    const double pbase = Lp(AtomicMeasure(ps, w1), AtomicMeasure(ps, w2), prod);
    for (auto& p : pts) std::swap(p[0], p[1]);
    auto sw = MakePointSet(pts, 2);
    c.Expect(std::abs(Lp(AtomicMeasure(sw, w1), AtomicMeasure(sw, w2), prod) - pbase) <= slack,
             "coordinate swap isometry");
  }
}

std::vector<double> RandomCounts(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<int> u(0, 60);
  std::vector<double> v(m);
  for (double& x : v) x = u(rng);
  return v;
}

// 7. Pearson, trend and lack-of-fit identities.
void TrendIdentities(Check& c) {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> score(-2.0, 2.0);
  int done = 0;
  while (done < 500) {
    const std::size_t m = kt::RandomSize(rng, 2, 5);
    const auto r = RandomCounts(rng, m), s = RandomCounts(rng, m);
    std::vector<double> sc(m);
    for (double& x : sc) x = score(rng);
    try {
      const ContingencyTable t(r, s);
      const auto kept = t.KeptScores(sc);
      if (*std::max_element(kept.begin(), kept.end()) == *std::min_element(kept.begin(), kept.end()))
        continue;
      const double p1 = PearsonChi2(t), p2 = PearsonChi2TwoSum(t);
      const double c1 = Catt(t, sc), c2 = CattSlopeForm(t, sc);
      const auto parts = CochranDecompose(t, sc);
      c.Max(std::max({kt::RelErr(p1, p2), kt::RelErr(c1, c2),
                      kt::RelErr(parts.t_ca + parts.t_fit, p1)}));
      c.Expect(kt::RelErr(p1, p2) <= 1e-9, "pearson forms");
      c.Expect(kt::RelErr(c1, c2) <= 1e-9, "trend forms");
      c.Expect(kt::RelErr(parts.t_ca, c1) <= 1e-9, "decomposition trend part");
      c.Expect(kt::RelErr(parts.t_ca + parts.t_fit, p1) <= 1e-9, "decomposition");
      ++done;
    } catch (const Error& e) {
      // Tables with a single populated category or margin are skipped.
      if (e.code() != ErrorCode::kEmptyCategory && e.code() != ErrorCode::kDegenerate) throw;
    }
  }
  const ContingencyTable g({10, 20, 30}, {30, 20, 10});
  const std::vector<double> add(kAdditiveScores.begin(), kAdditiveScores.end());
  const std::vector<double> rec(kRecessiveScores.begin(), kRecessiveScores.end());
  c.Near(PearsonChi2(g), 20.0, 1e-9, "golden pearson");
  c.Near(Catt(g, add), 20.0, 1e-9, "golden additive trend");
  c.Near(Catt(g, rec), 15.0, 1e-9, "golden recessive trend");
  c.Near(CochranDecompose(g, rec).t_fit, 5.0, 1e-9, "golden recessive lack of fit");
}

WeightedProfile RandomProfile(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto w = kt::RandomWeights(rng, m, 0.0);
  double total = 0.0;
  for (double x : w) total += x;
  w.back() += 1.0 - total;
  std::vector<double> alpha(m);
  for (double& a : alpha) a = u(rng);
  return WeightedProfile(w, alpha);
}

// Independent T: (sum c (alpha - mean) mu)^2 / Var_mu(c).
double TOracle(const std::vector<double>& c, const std::vector<double>& mu,
               const std::vector<double>& alpha) {
  double p = 0, ec = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    p += alpha[i] * mu[i];
    ec += c[i] * mu[i];
  }
  double num = 0, var = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    num += c[i] * (alpha[i] - p) * mu[i];
    var += (c[i] - ec) * (c[i] - ec) * mu[i];
  }
  return num * num / var;
}

// 8. The T functional.
void TFunctionalSuite(Check& c) {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = kt::RandomSize(rng, 2, 6);
    const auto prof = RandomProfile(rng, m);
    std::vector<double> sc(m);
    for (double& x : sc) x = u(rng);
    const double base = TFunctional(sc, prof);
    c.Expect(kt::RelErr(base, TOracle(sc, prof.weights(), prof.alpha())) <= 1e-9, "oracle");

    const double a = u(rng) + (u(rng) > 0 ? 4.0 : -4.0), b = u(rng);
    std::vector<double> affine(m);
    for (std::size_t i = 0; i < m; ++i) affine[i] = a * sc[i] + b;
    c.Expect(kt::RelErr(TFunctional(affine, prof), base) <= 1e-9, "affine invariance");

    std::vector<double> flipped(m);
    for (std::size_t i = 0; i < m; ++i) flipped[i] = 1.0 - prof.alpha()[i];
    c.Expect(kt::RelErr(TFunctional(sc, WeightedProfile(prof.weights(), flipped)), base) <= 1e-9,
             "alpha symmetry");

    const double sup = TSup(prof);
    c.Expect(std::abs(base + TrendResidual(sc, prof) - sup) <= 1e-9, "pythagorean");
    c.Expect(std::abs(TFunctional(prof.alpha(), prof) - sup) <= 1e-9, "sup at alpha");
  }
  // Random search never beats the supremum.
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = kt::RandomSize(rng, 2, 5);
    const auto prof = RandomProfile(rng, m);
    const double sup = TSup(prof);
    double best = 0.0;
    std::vector<double> sc(m);
    for (int k = 0; k < 10000; ++k) {
      for (double& x : sc) x = u(rng);
      best = std::max(best, TOracle(sc, prof.weights(), prof.alpha()));
    }
    c.Expect(best <= sup + 1e-9, "random search above sup");
  }
  // Two categories: every nonconstant score gives (alpha1 - alpha0)^2 mu0 mu1.
  for (int t = 0; t < 100; ++t) {
    const auto prof = RandomProfile(rng, 2);
    const double want = std::pow(prof.alpha()[1] - prof.alpha()[0], 2) * prof.weights()[0] *
                        prof.weights()[1];
    c.Expect(std::abs(TFunctional({u(rng), u(rng) + 7.0}, prof) - want) <= 1e-12, "two point");
  }
  c.Near(TFunctional({0.0, 1.0}, WeightedProfile({0.5, 0.5}, {0.25, 0.75})), 0.0625, 1e-15,
         "two point golden");
  // Three categories: x* beats a 101-point grid of middle scores.
  for (int t = 0; t < 100; ++t) {
    auto prof = RandomProfile(rng, 3);
    std::vector<double> alpha = prof.alpha();
    std::sort(alpha.begin(), alpha.end());
    if (alpha[2] - alpha[0] < 1e-6) continue;
    const WeightedProfile sorted(prof.weights(), alpha);
    const double x = OptimalScore3pt(sorted);
    const double at = TFunctional({0.0, x, 1.0}, sorted);
    for (int g = 0; g <= 100; ++g) {
      const double y = g / 100.0;
      c.Expect(TOracle({0.0, y, 1.0}, sorted.weights(), alpha) <= at + 1e-12, "three point grid");
    }
  }
  c.Near(OptimalScore3pt(WeightedProfile({0.2, 0.5, 0.3}, {0.25, 0.5, 0.75})), 0.5, 1e-15,
         "three point golden");
}

// 9. Sandwich bounds of the generalized Pearson statistic.
void ChiSquareSandwich(Check& c) {
  std::mt19937_64 rng(1009);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = kt::RandomSize(rng, 2, 8);
    auto s = MakeLinePointSet(kt::DistinctValues(rng, m, 0, 10));
    const AtomicMeasure cases(s, kt::RandomWeights(rng, m, 0.1, 30.0));
    const AtomicMeasure controls(s, kt::RandomWeights(rng, m, 0.1, 50.0));
    const auto b = KrChi2Bounds(cases, controls, 1.0);
    const double tol = 1e-9 * std::max(1.0, b.stat);
    c.Expect(b.lower <= b.stat + tol && b.stat <= b.upper + tol,
             "sandwich " + std::to_string(t));
  }
  const auto [r, ctl] = TableMeasures({10, 20, 30}, {30, 20, 10});
  const auto g = KrChi2Bounds(r, ctl, 1.0);
  c.Near(g.lower, 40.0 / 3.0, 1e-9, "golden lower");
  c.Near(g.stat, 20.0, 1e-9, "golden stat");
  c.Near(g.upper, 20.0, 1e-9, "golden upper");
}

// Random 1-Lipschitz function on the line: a scaled McShane extension.
ClassificationFunction RandomLipschitz(std::mt19937_64& rng, const PointSet& s) {
  std::uniform_real_distribution<double> u(-5.0, 5.0), scale(0.0, 1.0);
  const std::size_t anchors = kt::RandomSize(rng, 1, 4);
  std::vector<double> ys(anchors), vs(anchors);
  for (std::size_t j = 0; j < anchors; ++j) {
    ys[j] = u(rng);
    vs[j] = u(rng) / 5.0;
  }
  const double l = scale(rng);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < anchors; ++j) best = std::min(best, vs[j] + std::abs(s[i][0] - ys[j]));
    f[i] = l * best - 0.5;
  }
  return ClassificationFunction(f);
}

// 10. Classifier bounds.
void ClassifierBounds(Check& c) {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Lower bound W1 >= eps (1 - err) for 1-Lipschitz f.
  for (int t = 0; t < 200; ++t) {
    const auto [a, b] = kt::RandomLinePair(rng, kt::RandomSize(rng, 2, 20));
    const auto f = RandomLipschitz(rng, *a.support());
    const auto rep = W1LowerBoundCheck(f, unit(rng), a, b, Metric::Line());
    c.Expect(rep.holds, "lower bound " + std::to_string(t));
  }
  for (int t = 0; t < 150; ++t) {
    const auto [a, b] = kt::RandomLinePair(rng, kt::RandomSize(rng, 2, 20));
    const auto sol = SolveTransport(a, b, Metric::Line());
    const double delta = Diameter(Metric::Line(), *a.support());
    const ClassificationFunction g(sol.potential);
    // The family s m2(f > s D) + (1 - t) m1(f <= t D) <= 1 - W/D over s < t.
    for (int i = 0; i <= 10; ++i) {
      for (int j = i + 1; j <= 10; ++j) {
        const double s = i / 10.0, tt = j / 10.0;
        const double lhs = s * (1.0 - SublevelMass(g, b, s * delta)) +
                           (1.0 - tt) * SublevelMass(g, a, tt * delta);
        c.Expect(lhs <= 1.0 - sol.cost / delta + 1e-7, "family s<t");
      }
    }
    // Thresholding the optimal potential achieves the distance.
    const auto th = ThresholdFromPotential(sol, a, b);
    c.Expect(sol.cost <= delta * (1.0 - th.err0) + 1e-7, "threshold achieves W");
    // The centred potential meets the margin bound on half-mass measures.
    std::vector<double> ha(a.size()), hb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ha[i] = a.weight(i) / 2;
      hb[i] = b.weight(i) / 2;
    }
    const AtomicMeasure pa(a.support(), ha), pb(b.support(), hb);
    const auto half = SolveTransport(pa, pb, Metric::Line());
    const double rho = unit(rng) * 0.9;
    const auto centred = CenteredPotential(half.potential, delta);
    const auto err = Err(centred, rho * delta, pa, pb);
    const auto bound = DeltaBound(std::min(half.cost, delta / 2), delta, rho, 0.5);
    c.Expect(err.eps12 <= bound.value + 1e-7, "margin bound");
  }
  // Bayes error = 1 - TV, against every subset.
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = kt::RandomSize(rng, 1, 12);
    const auto [a, b] = kt::RandomLinePair(rng, n);
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e += (mask >> i & 1) ? b.weight(i) : a.weight(i);
      best = std::min(best, e);
    }
    const double bayes = BayesClassifier(a, b).error;
    c.Expect(std::abs(bayes - best) <= 1e-7, "bayes oracle");
    c.Expect(std::abs(bayes - (1.0 - kt::TvOracle(a.weights(), b.weights()))) <= 1e-7, "bayes tv");
  }
  // Three expressions of int f d(m1 - m2) for equal-mass measures.
  for (int t = 0; t < 200; ++t) {
    const auto [a, b] = kt::RandomLinePair(rng, kt::RandomSize(rng, 2, 20));
    const double delta = Diameter(Metric::Line(), *a.support());
    const auto sol = SolveTransport(a, b, Metric::Line());
    const ClassificationFunction g(sol.potential);
    const auto r = AreaDecomposition(g, unit(rng) * delta, a, b, delta);
    c.Expect(std::abs(r.form1 - r.direct) <= 1e-7 && std::abs(r.form2 - r.direct) <= 1e-7,
             "area forms");
    c.Expect(std::abs(r.direct - sol.cost) <= 1e-7, "area form equals W");
    std::vector<double> v(a.size());
    for (double& x : v) x = unit(rng) * delta;
    const auto q = AreaDecomposition(ClassificationFunction(v), unit(rng) * delta, a, b, delta);
    c.Expect(std::abs(q.form1 - q.direct) <= 1e-7 && std::abs(q.form2 - q.direct) <= 1e-7,
             "area forms random f");
  }
}

SelectionProblem RandomSelection(std::mt19937_64& rng, std::size_t r, std::size_t k,
                                 CriterionMode mode) {
  // Feature scales spread over several orders of magnitude, as in real
  // marker panels; a few features carry a class shift.
  const std::size_t n = 24;
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-5.0, 2.0), shift(0.0, 1.5);
  std::vector<Point> pts(n, Point(r));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < n / 2 ? 1 : -1;
  for (std::size_t c = 0; c < r; ++c) {
    const double scale = std::exp(log_scale(rng));
    const double d = shift(rng);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i][c] = scale * (noise(rng) + (labels[i] == 1 ? d : 0.0));
    }
  }
  return SelectionProblem(std::move(pts), std::move(labels),
                          std::vector<Metric>(r, Metric::Line()), k, mode);
}

// 11. Selection.
void SelectionOptimality(Check& c) {
  std::mt19937_64 rng(1011);
  int fewer = 0;
  const int instances = 50;
  for (int t = 0; t < instances; ++t) {
    const std::size_t r = kt::RandomSize(rng, 8, 12);
    const std::size_t k = kt::RandomSize(rng, 3, 5);
    const auto p = RandomSelection(rng, r, k, CriterionMode::kEmpiricalJoint);
    CriterionJ j(p);
    const auto bb = BranchAndBound(p, j);
    const auto ex = ExhaustiveSearch(p, j);
    c.Expect(bb.j_value == ex.j_value, "bb optimum " + std::to_string(t));
    if (bb.nodes_evaluated < ex.nodes_evaluated) ++fewer;
  }
  c.Note("bb strictly fewer nodes on " + std::to_string(fewer) + "/" + std::to_string(instances));
  c.Expect(fewer * 5 >= instances * 4,
           "bb evaluated fewer nodes on " + std::to_string(fewer) + "/" + std::to_string(instances));
  // Monotone under inclusion, additive in product mode.
  for (int t = 0; t < 20; ++t) {
    const std::size_t r = kt::RandomSize(rng, 2, 6);
    const auto joint = RandomSelection(rng, r, 1, CriterionMode::kEmpiricalJoint);
    const auto additive = RandomSelection(rng, r, 1, CriterionMode::kProductAdditive);
    CriterionJ jj(joint), ja(additive);
    for (std::uint64_t mask = 1; mask < (1ull << r); ++mask) {
      for (std::size_t f = 0; f < r; ++f) {
        if (!(mask >> f & 1)) {
          c.Expect(jj.Evaluate(mask) <= jj.Evaluate(mask | (1ull << f)) + 1e-9, "monotone");
        }
      }
      double sum = 0.0;
      for (std::size_t f : MaskSubset(mask)) sum += ja({f});
      c.Expect(std::abs(ja.Evaluate(mask) - sum) <= 1e-9 * std::max(1.0, sum), "additive");
    }
  }
}

// 12. Genotype ingestion.
void Ingestion(Check& c) {
  const auto ds = LoadGen(std::string(KRSELECT_TEST_DATA_DIR) + "/sample.gen");
  const int m = kMissingCall;
  const std::vector<std::vector<int>> want = {{0, m, m}, {2, 0, 2}, {1, 1, 0}, {2, 2, 1}};
  c.Expect(ds.calls == want, "golden call matrix");
  c.Near(ds.call_rate, 11.0 / 12.0, 1e-15, "call rate");
  c.Expect(ds.snps.size() == 3 && ds.snps[1].rs_id == "rs2", "metadata");
  // Triples summing to 0.9 in decimal are called even when the binary sum
  // falls a rounding step short.
  const auto edge = ParseGen("s r 1 A B 0.2 0.3 0.4 0.1 0.7 0.1 0.3 0.3 0.29\n");
  c.Expect(edge.calls[0][0] == 2 && edge.calls[1][0] == 1, "boundary sum called");
  c.Expect(edge.calls[2][0] == m, "below threshold missing");
  c.Near(ParseCallsCsv(WriteCallsCsv(ds)).call_rate, ds.call_rate, 0.0, "csv round trip");
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun RunCli(const std::string& args) {
  CliRun r;
  FILE* p = popen((std::string(KRSELECT_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// 13. End to end through the command line.
void EndToEnd(Check& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("krselect_acceptance_" + std::to_string(getpid()));
  fs::create_directories(dir);
  std::mt19937_64 rng(1013);
  std::bernoulli_distribution coin(0.5);
  {
    std::ofstream csv(dir / "sample.csv");
    csv << "label,c1,c2,c3,c4\n";
    for (int i = 0; i < 40; ++i) {
      const bool pos = i < 20;
      csv << (pos ? "+1" : "-1") << "," << (pos ? 1 : 0);
      for (int f = 0; f < 3; ++f) csv << "," << (coin(rng) ? 0.05 : 0.0);
      csv << "\n";
    }
    std::ofstream metric(dir / "metric.json");
    metric << R"({"coords":[{"type":"line"},{"type":"line"},{"type":"line"},{"type":"line"}],)"
           << R"("combine":"l1"})";
  }
  const std::string sample =
      "--sample " + (dir / "sample.csv").string() + " --metric " + (dir / "metric.json").string();
  const auto cx = RunCli("complexity " + sample + " --rho 0.1");
  c.Expect(cx.code == 0, "complexity exit");
  if (cx.code == 0) {
    const double ratio = nlohmann::json::parse(cx.out)["results"]["ratio"].get<double>();
    c.Expect(ratio >= 0.4, "complexity ratio " + std::to_string(ratio));
  }
  for (const char* s : {"bb", "forward", "backward", "exhaustive"}) {
    for (const char* mode : {"joint", "additive"}) {
      const std::string args =
          "select " + sample + " --k 1 --strategy " + s + " --mode " + mode;
      const auto a = RunCli(args), b = RunCli(args);
      c.Expect(a.code == 0, std::string("select exit ") + s);
      c.Expect(a.out == b.out, std::string("byte-identical ") + s);
      if (a.code == 0) {
        c.Expect(nlohmann::json::parse(a.out)["results"]["features"] == nlohmann::json({1}),
                 std::string("signal coordinate first ") + s);
      }
    }
    const auto two = RunCli("select " + sample + " --k 2 --strategy " + s);
    if (two.code == 0) {
      const auto f = nlohmann::json::parse(two.out)["results"]["features"];
      c.Expect(f.size() == 2 && f[0] == 1, std::string("signal kept at k=2 ") + s);
    }
  }
  const auto c2 = RunCli("complexity " + sample + " --rho 0.1");
  c.Expect(c2.out == cx.out, "complexity byte-identical");
  std::error_code ec;
  fs::remove_all(dir, ec);
}

}  // namespace
}  // namespace krselect

int main() {
  using krselect::Check;
  struct Criterion {
    const char* name;
    void (*run)(Check&);
  };
  const Criterion criteria[] = {
      {"line closed form vs exact solver", krselect::LineOracle},
      {"discrete closed form vs exact solver", krselect::DiscreteOracle},
      {"circle closed form vs exact solver", krselect::CircleOracle},
      {"product additivity", krselect::ProductAdditivity},
      {"duality certificates", krselect::DualityCertificate},
      {"metric properties of W1", krselect::MetricProperties},
      {"trend identities", krselect::TrendIdentities},
      {"T functional", krselect::TFunctionalSuite},
      {"chi-square sandwich", krselect::ChiSquareSandwich},
      {"classifier bounds", krselect::ClassifierBounds},
      {"selection optimality", krselect::SelectionOptimality},
      {"genotype ingestion", krselect::Ingestion},
      {"end to end", krselect::EndToEnd},
  };
  int failed = 0;
  int index = 0;
  for (const auto& cr : criteria) {
    ++index;
    Check c;
    const auto start = std::chrono::steady_clock::now();
    krselect::Guarded(c, [&] { cr.run(c); });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.2fs]\n", c.ok() ? "PASS" : "FAIL", index, cr.name,
                c.Summary().c_str(), secs);
    std::fflush(stdout);
    if (!c.ok()) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
