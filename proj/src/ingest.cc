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

#include "krselect/ingest.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "krselect/error.h"
#include "text_util.h"

namespace krselect {
namespace {

// Decimal triples rarely sum exactly; 0.2 + 0.3 + 0.4 must still reach 0.9.
constexpr double kSumSlack = 1e-12;

std::string LinePrefix(int line_no) { return "line " + std::to_string(line_no) + ": "; }

int CallTriple(double a, double b, double c) {
  if (a > b && a > c) return 0;
  if (b > a && b > c) return 1;
  if (c > a && c > b) return 2;
  return kMissingCall;
}

double ComputeCallRate(std::size_t called, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(called) / static_cast<double>(total);
}

int ParseLabel(std::string_view s, int line_no) {
  if (s == "1" || s == "+1") return 1;
  if (s == "-1") return -1;
  throw Error(ErrorCode::kBadLabel, LinePrefix(line_no) + "label '" + std::string(s) +
                                        "' is not +1 or -1");
}

}  // namespace

GenotypeDataset ParseGen(const std::string& text, double threshold) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "call threshold must be nonnegative");
  }
  GenotypeDataset ds;
  std::size_t individuals = 0;
  bool first = true;
  std::size_t passing = 0, total = 0;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = internal::Trim(raw);
    if (line.empty()) continue;
    const auto fields = internal::SplitWhitespace(line);
    if (fields.size() < 5 || (fields.size() - 5) % 3 != 0) {
      throw Error(ErrorCode::kMalformedLine,
                  LinePrefix(line_no) + "expected 5 metadata fields and probability triples");
    }
    const std::size_t m = (fields.size() - 5) / 3;
    if (first) {
      individuals = m;
      ds.calls.assign(m, {});
      first = false;
    } else if (m != individuals) {
      throw Error(ErrorCode::kInconsistentWidth,
                  LinePrefix(line_no) + std::to_string(m) + " individuals, expected " +
                      std::to_string(individuals));
    }
    ds.snps.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    for (std::size_t i = 0; i < m; ++i) {
      double t[3];
      for (std::size_t g = 0; g < 3; ++g) {
        const auto& token = fields[5 + 3 * i + g];
        const auto v = internal::ParseDouble(token);
        if (!v) {
          throw Error(ErrorCode::kMalformedLine,
                      LinePrefix(line_no) + "bad probability '" + token + "'");
        }
        if (*v < 0.0) {
          throw Error(ErrorCode::kNegativeProbability,
                      LinePrefix(line_no) + "negative probability " + token);
        }
        t[g] = *v;
      }
      ++total;
      int call = kMissingCall;
      if (t[0] + t[1] + t[2] >= threshold - kSumSlack) {
        ++passing;
        call = CallTriple(t[0], t[1], t[2]);
      }
      ds.calls[i].push_back(call);
    }
  }
  if (ds.snps.empty()) throw Error(ErrorCode::kEmptySample, "no SNP lines");
  ds.call_rate = ComputeCallRate(passing, total);
  return ds;
}

GenotypeDataset LoadGen(const std::string& path, double threshold) {
  return ParseGen(internal::ReadFile(path), threshold);
}

std::string WriteCallsCsv(const GenotypeDataset& ds) {
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.17g", ds.call_rate);
  std::string out = "# call_rate=" + std::string(rate) + "\n";
  out += "snp_id,rs_id,position,allele_a,allele_b";
  for (std::size_t i = 0; i < ds.num_individuals(); ++i) out += ",i" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t j = 0; j < ds.num_snps(); ++j) {
    const SnpMeta& s = ds.snps[j];
    out += s.snp_id + ',' + s.rs_id + ',' + s.position + ',' + s.allele_a + ',' + s.allele_b;
    for (std::size_t i = 0; i < ds.num_individuals(); ++i) {
      const int c = ds.calls[i][j];
      out += ',';
      out += c == kMissingCall ? std::string("NA") : std::to_string(c);
    }
    out += '\n';
  }
  return out;
}

GenotypeDataset ParseCallsCsv(const std::string& text) {
  GenotypeDataset ds;
  bool have_header = false;
  bool have_rate = false;
  std::size_t individuals = 0;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = internal::Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kKey = "# call_rate=";
      if (line.substr(0, kKey.size()) == kKey) {
        const auto v = internal::ParseDouble(line.substr(kKey.size()));
        if (!v) throw Error(ErrorCode::kMalformedLine, LinePrefix(line_no) + "bad call rate");
        ds.call_rate = *v;
        have_rate = true;
      }
      continue;
    }
    const auto fields = internal::SplitChar(line, ',');
    if (!have_header) {
      if (fields.size() < 5 || fields[0] != "snp_id") {
        throw Error(ErrorCode::kMalformedHeader, "expected snp_id,rs_id,position,... header");
      }
      individuals = fields.size() - 5;
      ds.calls.assign(individuals, {});
      have_header = true;
      continue;
    }
    if (fields.size() != individuals + 5) {
      throw Error(ErrorCode::kInconsistentWidth, LinePrefix(line_no) + "wrong number of calls");
    }
    ds.snps.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    for (std::size_t i = 0; i < individuals; ++i) {
      const std::string& f = fields[5 + i];
      int call;
      if (f == "NA") {
        call = kMissingCall;
      } else if (f == "0" || f == "1" || f == "2") {
        call = f[0] - '0';
      } else {
        throw Error(ErrorCode::kMalformedLine, LinePrefix(line_no) + "bad call '" + f + "'");
      }
      ds.calls[i].push_back(call);
    }
  }
  if (!have_header) throw Error(ErrorCode::kMalformedHeader, "missing header");
  if (!have_rate) {
    std::size_t called = 0, total = 0;
    for (const auto& row : ds.calls) {
      for (int c : row) {
        ++total;
        called += c != kMissingCall;
      }
    }
    ds.call_rate = ComputeCallRate(called, total);
  }
  return ds;
}

std::vector<int> ParsePhenotype(const std::string& text) {
  std::vector<int> labels;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = internal::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    labels.push_back(ParseLabel(line, line_no));
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptySample, "no phenotype labels");
  return labels;
}

std::vector<int> LoadPhenotype(const std::string& path) {
  return ParsePhenotype(internal::ReadFile(path));
}

SelectionProblem ToSelectionProblem(const GenotypeDataset& ds, const std::vector<int>& phenotype,
                                    const std::vector<std::size_t>& snp_subset,
                                    const GenotypeEncoding& encoding, std::size_t k_target,
                                    CriterionMode mode) {
  if (phenotype.size() != ds.num_individuals()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(phenotype.size()) + " phenotype labels for " +
                    std::to_string(ds.num_individuals()) + " individuals");
  }
  std::vector<std::size_t> snps = snp_subset;
  if (snps.empty()) {
    for (std::size_t j = 0; j < ds.num_snps(); ++j) snps.push_back(j);
  }
  for (std::size_t j : snps) {
    if (j >= ds.num_snps()) throw Error(ErrorCode::kIndexOutOfRange, "SNP index out of range");
  }
  bool pos = false, neg = false;
  for (int y : phenotype) {
    if (y != 1 && y != -1) throw Error(ErrorCode::kBadLabel, "labels must be +1 or -1");
    (y == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw Error(ErrorCode::kSingleClass, "both classes must be present");

  std::vector<Point> points;
  std::vector<int> labels;
  bool kept_pos = false, kept_neg = false;
  for (std::size_t i = 0; i < ds.num_individuals(); ++i) {
    Point p;
    bool missing = false;
    for (std::size_t j : snps) {
      const int c = ds.calls[i][j];
      if (c == kMissingCall) {
        missing = true;
        break;
      }
      p.push_back(static_cast<double>(c));
    }
    if (missing) continue;
    (phenotype[i] == 1 ? kept_pos : kept_neg) = true;
    points.push_back(std::move(p));
    labels.push_back(phenotype[i]);
  }
  if (!kept_pos || !kept_neg) {
    throw Error(ErrorCode::kAllMissing, "a class has no individual called on every SNP");
  }
  const Metric coord = encoding.kind == GenotypeEncoding::kDiscrete ? Metric::Discrete(encoding.k)
                                                                    : Metric::Line();
  return SelectionProblem(std::move(points), std::move(labels),
                          std::vector<Metric>(snps.size(), coord), k_target, mode);
}

LabeledSample ParseLabeledCsv(const std::string& text) {
  LabeledSample sample;
  bool have_header = false;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = internal::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = internal::SplitChar(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "label") {
        throw Error(ErrorCode::kMalformedHeader, "expected header label,c1,...,cr");
      }
      sample.dimension = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != sample.dimension + 1) {
      throw Error(ErrorCode::kMalformedLine, LinePrefix(line_no) + "expected " +
                                                 std::to_string(sample.dimension + 1) +
                                                 " fields");
    }
    const int label = ParseLabel(fields[0], line_no);
    Point p(sample.dimension);
    for (std::size_t c = 0; c < sample.dimension; ++c) {
      const std::string& f = fields[c + 1];
      if (f == "NA") {
        p[c] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const auto v = internal::ParseDouble(f);
      if (!v) throw Error(ErrorCode::kMalformedLine, LinePrefix(line_no) + "bad number '" + f + "'");
      p[c] = *v;
    }
    sample.points.push_back(std::move(p));
    sample.labels.push_back(label);
  }
  if (!have_header) throw Error(ErrorCode::kMalformedHeader, "missing header");
  if (sample.points.empty()) throw Error(ErrorCode::kEmptySample, "no samples");
  return sample;
}

LabeledSample LoadLabeledCsv(const std::string& path) {
  return ParseLabeledCsv(internal::ReadFile(path));
}

}  // namespace krselect
