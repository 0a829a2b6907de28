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

// krselect command-line front end. Every command prints one JSON report on
// stdout. Exit codes: 0 success, 1 numeric failure, 2 bad input.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "krselect/krselect.h"

namespace {

using nlohmann::json;

constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

// Raised when a library call fails; carries the status for the exit code.
struct CallFailure {
  kr_status status;
  std::string message;
};

void Check(kr_status status) {
  if (status != KR_OK) throw CallFailure{status, kr_last_error()};
}

double Round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json Num(double x) {
  if (!std::isfinite(x)) return nullptr;
  // Keeps -0 out of reports.
  const double r = Round12(x);
  return r == 0.0 ? 0.0 : r;
}

std::string Fnv1a(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CallFailure{KR_IO_ERROR, "cannot open " + path};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json InputEntry(const std::string& path) { return {{"path", path}, {"fnv1a", Fnv1a(path)}}; }

int ThreadsFromEnv() {
  const char* v = std::getenv("KRSELECT_THREADS");
  if (v == nullptr) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 0) return 0;
  return static_cast<int>(std::min<long>(n, 256));
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using MeasureHandle = Handle<kr_measure, kr_measure_free>;
using MetricHandle = Handle<kr_metric, kr_metric_free>;
using SampleHandle = Handle<kr_sample, kr_sample_free>;

void PrintHuman(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) PrintHuman(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      PrintHuman(j[i], prefix + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << prefix << ": " << j.dump() << "\n";
  }
}

struct Options {
  bool human = false;
  bool timing = false;
  double tol = 1e-9;
};

struct SampleInput {
  std::string csv;
  std::string gen;
  std::string phenotype;
  std::string metric;
  std::string encoding = "discrete";
  double k = 1.0;
  double threshold = 0.9;
};

void AddSampleOptions(CLI::App* cmd, SampleInput& in) {
  cmd->add_option("--sample", in.csv, "Labeled sample CSV (label,c1,...,cr)");
  cmd->add_option("--gen", in.gen, "Genotype probability file");
  cmd->add_option("--pheno", in.phenotype, "Phenotype file, one +1/-1 per individual");
  cmd->add_option("--metric", in.metric, "Metric JSON");
  cmd->add_option("--encoding", in.encoding, "Genotype encoding without --metric")
      ->check(CLI::IsMember({"discrete", "line"}));
  cmd->add_option("--discrete-k", in.k, "Distance between genotypes for discrete encoding");
  cmd->add_option("--threshold", in.threshold, "Call threshold for genotype triples");
}

// Loads the sample and its metric; records digests in `report`.
void LoadSample(const SampleInput& in, SampleHandle& sample, MetricHandle& metric, json& report) {
  if (in.csv.empty() == in.gen.empty()) {
    throw CallFailure{KR_INVALID_ARGUMENT, "give exactly one of --sample or --gen"};
  }
  if (!in.csv.empty()) {
    report["inputs"]["sample"] = InputEntry(in.csv);
    Check(kr_sample_load_csv(in.csv.c_str(), &sample.p));
  } else {
    if (in.phenotype.empty()) throw CallFailure{KR_INVALID_ARGUMENT, "--gen needs --pheno"};
    report["inputs"]["gen"] = InputEntry(in.gen);
    report["inputs"]["pheno"] = InputEntry(in.phenotype);
    Check(kr_sample_load_gen(in.gen.c_str(), in.phenotype.c_str(), in.threshold, &sample.p));
    report["results"]["call_rate"] = Num(kr_sample_call_rate(sample.p));
  }
  if (!in.metric.empty()) {
    report["inputs"]["metric"] = InputEntry(in.metric);
    Check(kr_metric_load_json(in.metric.c_str(), &metric.p));
  } else if (!in.gen.empty()) {
    Check(kr_metric_genotype(kr_sample_dimension(sample.p), in.encoding == "line", in.k,
                             &metric.p));
  } else {
    throw CallFailure{KR_INVALID_ARGUMENT, "--sample needs --metric"};
  }
  report["results"]["samples"] = kr_sample_size(sample.p);
}

kr_w1_method ParseMethod(const std::string& s) {
  static const std::map<std::string, kr_w1_method> kMethods = {
      {"auto", KR_W1_AUTO}, {"tv", KR_W1_TV},  {"line", KR_W1_LINE},
      {"circle", KR_W1_CIRCLE}, {"lp", KR_W1_LP}, {"product", KR_W1_PRODUCT}};
  return kMethods.at(s);
}

void RunW1(const std::string& m1_path, const std::string& m2_path, const std::string& metric_path,
           const std::string& method, bool certify, const Options& opt, json& report) {
  report["inputs"]["measure1"] = InputEntry(m1_path);
  report["inputs"]["measure2"] = InputEntry(m2_path);
  report["inputs"]["metric"] = InputEntry(metric_path);
  MeasureHandle m1, m2;
  MetricHandle d;
  Check(kr_measure_load_csv(m1_path.c_str(), &m1.p));
  Check(kr_measure_load_csv(m2_path.c_str(), &m2.p));
  Check(kr_metric_load_json(metric_path.c_str(), &d.p));
  double w = 0.0;
  Check(kr_w1(m1.p, m2.p, d.p, ParseMethod(method), &w));
  report["results"]["w1"] = Num(w);
  if (certify) {
    double exact = 0.0;
    kr_certificate cert{};
    Check(kr_w1_certified(m1.p, m2.p, d.p, &exact, &cert));
    const bool agrees = std::abs(exact - w) <= opt.tol * std::max(1.0, exact);
    report["results"]["certificate"] = {{"optimal", cert.optimal != 0},
                                        {"exact_w1", Num(exact)},
                                        {"agrees", agrees},
                                        {"max_violation", Num(cert.max_violation)},
                                        {"marginal_violation", Num(cert.marginal_violation)},
                                        {"lipschitz_violation", Num(cert.lipschitz_violation)},
                                        {"slackness_violation", Num(cert.slackness_violation)},
                                        {"duality_gap", Num(cert.duality_gap)}};
    if (!cert.optimal || !agrees) {
      throw CallFailure{KR_NUMERIC_FAILURE, "optimality certificate failed"};
    }
  }
}

std::vector<double> ParseScores(const std::string& s) {
  if (s == "additive") return {0.0, 0.5, 1.0};
  if (s == "dominant") return {0.0, 1.0, 1.0};
  if (s == "recessive") return {0.0, 0.0, 1.0};
  std::string body = s;
  if (body.rfind("custom", 0) == 0) body = body.substr(6);
  if (!body.empty() && (body[0] == ':' || body[0] == '=')) body = body.substr(1);
  std::vector<double> c;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) {
      throw CallFailure{KR_INVALID_ARGUMENT, "bad score '" + item + "'"};
    }
    c.push_back(v);
  }
  if (c.size() != 3) {
    throw CallFailure{KR_INVALID_ARGUMENT,
                      "scores must be additive, dominant, recessive or c0,c1,c2"};
  }
  return c;
}

void RunTrend(const std::string& path, const std::string& scores_flag, double k, json& report) {
  report["inputs"]["tables"] = InputEntry(path);
  const auto scores = ParseScores(scores_flag);
  report["results"]["scores"] = {Num(scores[0]), Num(scores[1]), Num(scores[2])};
  double* rows = nullptr;
  std::size_t count = 0;
  Check(kr_trend_load_tables(path.c_str(), &rows, &count));
  std::unique_ptr<double[], void (*)(double*)> owned(rows, kr_free_doubles);
  json tables = json::array();
  for (std::size_t t = 0; t < count; ++t) {
    const double* row = rows + 6 * t;
    json entry = {{"index", t + 1},
                  {"cases", {Num(row[0]), Num(row[1]), Num(row[2])}},
                  {"controls", {Num(row[3]), Num(row[4]), Num(row[5])}}};
    kr_trend_result r{};
    const kr_status st = kr_trend(row, row + 3, scores.data(), 3, k, &r);
    if (st != KR_OK) {
      entry["error"] = {{"code", kr_status_name(st)}, {"message", kr_last_error()}};
      report["warnings"].push_back("table " + std::to_string(t + 1) + ": " + kr_last_error());
    } else {
      entry["pearson"] = Num(r.pearson);
      entry["catt"] = Num(r.catt);
      entry["t_fit"] = Num(r.t_fit);
      entry["generalized"] = {{"t_ca", Num(r.generalized_t_ca)},
                              {"t_chi2", Num(r.generalized_t_chi2)}};
      entry["bounds"] = {{"lower", Num(r.bound_lower)},
                         {"stat", Num(r.bound_stat)},
                         {"upper", Num(r.bound_upper)},
                         {"w1_discrete", Num(r.w1_discrete)}};
      entry["dropped_empty_category"] = r.dropped_empty != 0;
    }
    tables.push_back(std::move(entry));
  }
  report["results"]["tables"] = std::move(tables);
}

void RunComplexity(const SampleInput& in, double rho, json& report) {
  SampleHandle sample;
  MetricHandle metric;
  LoadSample(in, sample, metric, report);
  kr_complexity_result r{};
  Check(kr_complexity(sample.p, metric.p, rho, &r));
  auto& res = report["results"];
  res["w"] = Num(r.w);
  res["delta"] = Num(r.delta);
  res["ratio"] = Num(r.ratio);
  res["risk_bound"] = Num(r.risk_bound);
  res["num_positive"] = r.num_positive;
  res["num_negative"] = r.num_negative;
  if (r.risk_clamped) report["warnings"].push_back("risk bound clamped at 0");
}

void RunSelect(const SampleInput& in, std::size_t k, const std::string& strategy,
               const std::string& mode, json& report) {
  static const std::map<std::string, kr_strategy> kStrategies = {
      {"bb", KR_STRATEGY_BB},
      {"forward", KR_STRATEGY_FORWARD},
      {"backward", KR_STRATEGY_BACKWARD},
      {"exhaustive", KR_STRATEGY_EXHAUSTIVE}};
  SampleHandle sample;
  MetricHandle metric;
  LoadSample(in, sample, metric, report);
  kr_selection_result r{};
  Check(kr_select(sample.p, metric.p, k, kStrategies.at(strategy), mode == "additive",
                  ThreadsFromEnv(), &r));
  json features = json::array();
  for (std::size_t i = 0; i < r.subset_size; ++i) features.push_back(r.subset[i] + 1);
  auto& res = report["results"];
  res["features"] = std::move(features);
  res["j_value"] = Num(r.j_value);
  res["nodes_evaluated"] = r.nodes_evaluated;
  res["nodes_pruned"] = r.nodes_pruned;
  res["strategy"] = strategy;
}

void RunVerify(std::size_t instances, unsigned long long seed, const Options& opt, json& report) {
  static const std::pair<const char*, kr_verify_family> kFamilies[] = {
      {"line", KR_VERIFY_LINE},
      {"discrete", KR_VERIFY_DISCRETE},
      {"circle", KR_VERIFY_CIRCLE},
      {"product", KR_VERIFY_PRODUCT}};
  bool ok = true;
  for (const auto& [name, family] : kFamilies) {
    kr_verify_stats s{};
    Check(kr_verify(family, seed, instances, opt.tol, &s));
    report["results"][name] = {{"checked", s.checked},
                               {"failed", s.failed},
                               {"max_error", Num(s.max_error)}};
    ok = ok && s.failed == 0;
  }
  report["results"]["passed"] = ok;
  if (!ok) throw CallFailure{KR_NUMERIC_FAILURE, "closed forms disagree with the exact solver"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krselect: Kantorovich-Rubinstein distances, trend tests and feature selection"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--human", opt.human, "Print flattened key: value lines instead of JSON");
  app.add_flag("--timing", opt.timing, "Include wall time in the report");
  app.add_option("--tol", opt.tol, "Numerical tolerance")->check(CLI::NonNegativeNumber);

  std::string m1, m2, metric, method = "auto";
  bool certify = false;
  auto* w1 = app.add_subcommand("w1", "W1 distance between two measures");
  w1->add_option("measure1", m1, "First measure CSV")->required();
  w1->add_option("measure2", m2, "Second measure CSV")->required();
  w1->add_option("--metric", metric, "Metric JSON")->required();
  w1->add_option("--method", method, "auto|tv|line|circle|lp|product")
      ->check(CLI::IsMember({"auto", "tv", "line", "circle", "lp", "product"}));
  w1->add_flag("--certify", certify, "Also solve exactly and check optimality");

  std::string tables, scores = "additive";
  double trend_k = 1.0;
  auto* trend = app.add_subcommand("trend", "Trend statistics per 2x3 table");
  trend->add_option("tables", tables, "Table file")->required();
  trend->add_option("--scores", scores, "additive|dominant|recessive|c0,c1,c2");
  trend->add_option("--discrete-k", trend_k, "Discrete distance for the W1 reference");

  SampleInput cx_in;
  double rho = 0.0;
  auto* complexity = app.add_subcommand("complexity", "W1 complexity descriptor of a sample");
  AddSampleOptions(complexity, cx_in);
  complexity->add_option("--rho", rho, "Margin fraction in [0, 1)");

  SampleInput sel_in;
  long long k = -1;
  std::string strategy = "bb", mode = "joint";
  auto* select = app.add_subcommand("select", "Feature subset selection");
  AddSampleOptions(select, sel_in);
  select->add_option("--k", k, "Number of features to keep")->required();
  select->add_option("--strategy", strategy, "bb|forward|backward|exhaustive")
      ->check(CLI::IsMember({"bb", "forward", "backward", "exhaustive"}));
  select->add_option("--mode", mode, "joint|additive")
      ->check(CLI::IsMember({"joint", "additive"}));

  std::size_t instances = 100;
  unsigned long long seed = 1;
  auto* verify = app.add_subcommand("verify", "Closed forms against the exact solver");
  verify->add_option("--instances", instances, "Random instances per family");
  verify->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  json report;
  report["command"] = app.get_subcommands().front()->get_name();
  std::vector<std::string> args(argv + 1, argv + argc);
  report["args"] = args;
  report["warnings"] = json::array();
  report["results"] = json::object();
  report["inputs"] = json::object();
  int code = 0;
  try {
    if (*w1) {
      RunW1(m1, m2, metric, method, certify, opt, report);
    } else if (*trend) {
      RunTrend(tables, scores, trend_k, report);
    } else if (*complexity) {
      RunComplexity(cx_in, rho, report);
    } else if (*select) {
      if (k < 1) throw CallFailure{KR_INVALID_ARGUMENT, "--k must be at least 1"};
      RunSelect(sel_in, static_cast<std::size_t>(k), strategy, mode, report);
    } else if (*verify) {
      RunVerify(instances, seed, opt, report);
    }
    report["status"] = "ok";
  } catch (const CallFailure& f) {
    code = kr_status_is_input_error(f.status) ? kExitInput : kExitNumeric;
    report["status"] = "error";
    report["error"] = {{"code", kr_status_name(f.status)}, {"message", f.message}};
    std::cerr << "krselect: " << f.message << "\n";
  }
  if (opt.timing) {
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    report["wall_time_s"] = wall.count();
  }
  if (opt.human) {
    PrintHuman(report, "", std::cout);
  } else {
    std::cout << report.dump(2) << "\n";
  }
  return code;
}
