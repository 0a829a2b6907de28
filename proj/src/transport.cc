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

#include "krselect/transport.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>

#include "krselect/error.h"

namespace krselect {
namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kResidualFraction = 1e-12;
constexpr std::size_t kMaxSupport = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest paths on the bipartite network
//   S -> source s (cap a_s, cost 0) -> sink t (cap inf, cost c_st) -> T
// (cap b_t, cost 0). Node potentials keep every residual reduced cost
// nonnegative so each shortest path is found by Dijkstra.
class SspSolver {
 public:
  SspSolver(std::vector<std::size_t> sources, std::vector<double> supply,
            std::vector<std::size_t> sinks, std::vector<double> demand,
            const DenseMatrix& cost, double eps)
      : sources_(std::move(sources)),
        sinks_(std::move(sinks)),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(cost),
        eps_(eps),
        num_sources_(sources_.size()),
        num_sinks_(sinks_.size()),
        pi_(num_sources_ + num_sinks_ + 2, 0.0),
        arcs_from_source_(num_sources_),
        arcs_into_sink_(num_sinks_) {}

  int Run() {
    int iterations = 0;
    while (HasRemaining(supply_) && HasRemaining(demand_)) {
      if (!ShortestPathAndAugment()) {
        throw Error(ErrorCode::kNumericFailure, "no augmenting path with supply remaining");
      }
      ++iterations;
    }
    return iterations;
  }

  std::vector<PlanEntry> Plan() const {
    std::vector<PlanEntry> plan;
    for (const Arc& arc : arcs_) {
      if (arc.flow > 0.0) plan.push_back({sources_[arc.s], sinks_[arc.t], arc.flow});
    }
    std::sort(plan.begin(), plan.end(), [](const PlanEntry& a, const PlanEntry& b) {
      return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    return plan;
  }

  // Sink-side dual values psi_t = -pi(t); phi_s - psi_t <= c_st holds for
  // every pair and tightly on arcs carrying flow.
  double SinkDual(std::size_t t) const { return -pi_[SinkNode(t)]; }

 private:
  struct Arc {
    std::size_t s;
    std::size_t t;
    double flow;
  };

  std::size_t SourceNode(std::size_t s) const { return 1 + s; }
  std::size_t SinkNode(std::size_t t) const { return 1 + num_sources_ + t; }
  std::size_t TerminalNode() const { return 1 + num_sources_ + num_sinks_; }

  bool HasRemaining(const std::vector<double>& v) const {
    return std::any_of(v.begin(), v.end(), [this](double x) { return x > eps_; });
  }

  double Cost(std::size_t s, std::size_t t) const { return cost_(sources_[s], sinks_[t]); }

  std::size_t ArcIndex(std::size_t s, std::size_t t) {
    auto [it, inserted] = arc_lookup_.try_emplace(s * num_sinks_ + t, arcs_.size());
    if (inserted) {
      arcs_.push_back({s, t, 0.0});
      arcs_from_source_[s].push_back(it->second);
      arcs_into_sink_[t].push_back(it->second);
    }
    return it->second;
  }

  bool ShortestPathAndAugment() {
    const std::size_t num_nodes = pi_.size();
    const std::size_t terminal = TerminalNode();
    std::vector<double> dist(num_nodes, kInf);
    // parent_node / parent_arc: predecessor and, for source<->sink moves,
    // the arc index (SIZE_MAX for arcs that do not exist yet).
    std::vector<std::size_t> parent(num_nodes, SIZE_MAX);
    std::vector<std::size_t> parent_arc(num_nodes, SIZE_MAX);
    std::vector<char> done(num_nodes, 0);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

    auto relax = [&](std::size_t from, std::size_t to, double reduced, std::size_t arc) {
      const double nd = dist[from] + std::max(0.0, reduced);
      if (nd < dist[to]) {
        dist[to] = nd;
        parent[to] = from;
        parent_arc[to] = arc;
        heap.emplace(nd, to);
      }
    };

    dist[0] = 0.0;
    heap.emplace(0.0, 0);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (done[u] || d > dist[u]) continue;
      done[u] = 1;
      if (u == terminal) break;
      if (u == 0) {
        for (std::size_t s = 0; s < num_sources_; ++s) {
          if (supply_[s] > eps_) relax(0, SourceNode(s), pi_[0] - pi_[SourceNode(s)], SIZE_MAX);
        }
      } else if (u <= num_sources_) {
        const std::size_t s = u - 1;
        for (std::size_t t = 0; t < num_sinks_; ++t) {
          relax(u, SinkNode(t), Cost(s, t) + pi_[u] - pi_[SinkNode(t)], SIZE_MAX);
        }
      } else {
        const std::size_t t = u - 1 - num_sources_;
        for (std::size_t a : arcs_into_sink_[t]) {
          if (arcs_[a].flow <= 0.0) continue;
          const std::size_t s = arcs_[a].s;
          relax(u, SourceNode(s), -Cost(s, t) + pi_[u] - pi_[SourceNode(s)], a);
        }
        if (demand_[t] > eps_) relax(u, terminal, pi_[u] - pi_[terminal], SIZE_MAX);
      }
    }
    if (!done[terminal]) return false;

    const double reach = dist[terminal];
    for (std::size_t v = 0; v < num_nodes; ++v) pi_[v] += std::min(dist[v], reach);

    // Walk back from T to find the bottleneck.
    const std::size_t last_sink = parent[terminal] - 1 - num_sources_;
    double amount = demand_[last_sink];
    std::size_t v = parent[terminal];
    std::size_t first_source = 0;
    while (v != 0) {
      const std::size_t p = parent[v];
      if (p == 0) {
        first_source = v - 1;
        amount = std::min(amount, supply_[first_source]);
      } else if (v <= num_sources_) {
        // Backward move sink -> source cancels flow on an existing arc.
        amount = std::min(amount, arcs_[parent_arc[v]].flow);
      }
      v = p;
    }

    supply_[first_source] -= amount;
    demand_[last_sink] -= amount;
    v = parent[terminal];
    while (parent[v] != 0) {
      const std::size_t p = parent[v];
      if (v > num_sources_) {
        Arc& arc = arcs_[ArcIndex(p - 1, v - 1 - num_sources_)];
        arc.flow += amount;
      } else {
        Arc& arc = arcs_[parent_arc[v]];
        arc.flow -= amount;
        if (arc.flow <= eps_) arc.flow = 0.0;
      }
      v = p;
    }
    if (supply_[first_source] <= eps_) supply_[first_source] = 0.0;
    if (demand_[last_sink] <= eps_) demand_[last_sink] = 0.0;
    return true;
  }

  std::vector<std::size_t> sources_;
  std::vector<std::size_t> sinks_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  const DenseMatrix& cost_;
  double eps_;
  std::size_t num_sources_;
  std::size_t num_sinks_;
  std::vector<double> pi_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::size_t, std::size_t> arc_lookup_;
  std::vector<std::vector<std::size_t>> arcs_from_source_;
  std::vector<std::vector<std::size_t>> arcs_into_sink_;
};

}  // namespace

TransportSolution SolveTransport(const AtomicMeasure& m1, const AtomicMeasure& m2,
                                 const DenseMatrix& cost) {
  if (!SameSupport(m1, m2)) {
    throw Error(ErrorCode::kSupportMismatch, "solver needs measures on a shared support");
  }
  const std::size_t n = m1.size();
  if (n > kMaxSupport) {
    throw Error(ErrorCode::kTooLarge, "support exceeds 4096 points");
  }
  if (cost.rows() != n || cost.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "cost matrix does not match the support");
  }
  for (double c : cost.data()) {
    if (!std::isfinite(c) || c < 0.0) {
      throw Error(ErrorCode::kNonFiniteCost, "cost entries must be finite and nonnegative");
    }
  }
  const double mass = m1.total_mass();
  if (mass <= 0.0 && m2.total_mass() <= 0.0) {
    throw Error(ErrorCode::kDegenerate, "both measures are zero");
  }
  if (std::abs(mass - m2.total_mass()) > kMassTolerance) {
    throw Error(ErrorCode::kMassMismatch, "total masses differ");
  }

  std::vector<std::size_t> sources, sinks;
  std::vector<double> supply, demand;
  for (std::size_t i = 0; i < n; ++i) {
    if (m1.weight(i) > 0.0) {
      sources.push_back(i);
      supply.push_back(m1.weight(i));
    }
    if (m2.weight(i) > 0.0) {
      sinks.push_back(i);
      demand.push_back(m2.weight(i));
    }
  }
  const double eps = kResidualFraction * std::max(mass, m2.total_mass());
  SspSolver solver(sources, std::move(supply), sinks, std::move(demand), cost, eps);

  TransportSolution sol;
  sol.iterations = solver.Run();
  sol.plan = solver.Plan();
  for (const PlanEntry& e : sol.plan) sol.cost += cost(e.from, e.to) * e.flow;

  // c-transform of the sink duals: 1-Lipschitz on the whole support and
  // tight on every arc of the plan.
  sol.potential.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double best = kInf;
    for (std::size_t t = 0; t < sinks.size(); ++t) {
      best = std::min(best, solver.SinkDual(t) + cost(x, sinks[t]));
    }
    sol.potential[x] = best;
  }
  const double lowest = *std::min_element(sol.potential.begin(), sol.potential.end());
  for (double& f : sol.potential) f -= lowest;
  return sol;
}

TransportSolution SolveTransport(const AtomicMeasure& m1, const AtomicMeasure& m2,
                                 const Metric& d) {
  auto [a, b] = OnUnionSupport(m1, m2);
  const DenseMatrix cost = CostMatrix(d, *a.support(), *a.support());
  return SolveTransport(a, b, cost);
}

OptimalityCertificate VerifyOptimality(const TransportSolution& sol, const DenseMatrix& cost,
                                       const AtomicMeasure& m1, const AtomicMeasure& m2) {
  constexpr double kMarginalTol = 1e-9;
  constexpr double kLipschitzTol = 1e-9;
  constexpr double kSlacknessTol = 1e-7;
  constexpr double kFlowFloor = 1e-12;

  OptimalityCertificate cert;
  const std::size_t n = m1.size();
  if (m2.size() != n || cost.rows() != n || cost.cols() != n || sol.potential.size() != n) {
    cert.marginal_violation = kInf;
    cert.max_violation = kInf;
    return cert;
  }
  std::vector<double> rows(n, 0.0), cols(n, 0.0);
  double primal = 0.0;
  for (const PlanEntry& e : sol.plan) {
    if (e.from >= n || e.to >= n || !(e.flow >= 0.0)) {
      cert.marginal_violation = kInf;
      continue;
    }
    rows[e.from] += e.flow;
    cols[e.to] += e.flow;
    primal += cost(e.from, e.to) * e.flow;
    if (e.flow > kFlowFloor) {
      const double gap =
          std::abs(sol.potential[e.from] - sol.potential[e.to] - cost(e.from, e.to));
      cert.slackness_violation = std::max(cert.slackness_violation, gap);
    }
  }
  double dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cert.marginal_violation = std::max(cert.marginal_violation, std::abs(rows[i] - m1.weight(i)));
    cert.marginal_violation = std::max(cert.marginal_violation, std::abs(cols[i] - m2.weight(i)));
    dual += sol.potential[i] * (m1.weight(i) - m2.weight(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double excess = std::abs(sol.potential[i] - sol.potential[j]) - cost(i, j);
      cert.lipschitz_violation = std::max(cert.lipschitz_violation, excess);
    }
  }
  cert.duality_gap = std::abs(primal - dual);
  cert.max_violation = std::max({cert.marginal_violation, cert.lipschitz_violation,
                                 cert.slackness_violation});
  cert.optimal = cert.marginal_violation <= kMarginalTol &&
                 cert.lipschitz_violation <= kLipschitzTol &&
                 cert.slackness_violation <= kSlacknessTol;
  return cert;
}

}  // namespace krselect
