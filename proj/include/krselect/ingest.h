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

#ifndef KRSELECT_INGEST_H_
#define KRSELECT_INGEST_H_

#include <cstddef>
#include <string>
#include <vector>

#include "krselect/measures.h"
#include "krselect/select.h"

namespace krselect {

// Genotype code for an uncalled or ambiguous triple.
inline constexpr int kMissingCall = -1;

struct SnpMeta {
  std::string snp_id;
  std::string rs_id;
  std::string position;
  std::string allele_a;
  std::string allele_b;

  bool operator==(const SnpMeta&) const = default;
};

// calls[i][j] is the genotype of individual i at SNP j: 0 (AA), 1 (AB),
// 2 (BB) or kMissingCall.
struct GenotypeDataset {
  std::vector<SnpMeta> snps;
  std::vector<std::vector<int>> calls;
  double call_rate = 0.0;

  std::size_t num_individuals() const { return calls.size(); }
  std::size_t num_snps() const { return snps.size(); }
  bool operator==(const GenotypeDataset&) const = default;
};

inline constexpr double kDefaultCallThreshold = 0.9;

// One line per SNP: five metadata fields followed by a probability triple per
// individual. A triple is called when its sum reaches `threshold`; the call is
// its largest entry, and a tie for the largest leaves it missing.
GenotypeDataset ParseGen(const std::string& text, double threshold = kDefaultCallThreshold);
GenotypeDataset LoadGen(const std::string& path, double threshold = kDefaultCallThreshold);

// SNP-major CSV: snp_id,rs_id,position,allele_a,allele_b,i1,...,in with the
// calls 0/1/2 and NA for missing.
std::string WriteCallsCsv(const GenotypeDataset& ds);
GenotypeDataset ParseCallsCsv(const std::string& text);

// One label (+1 or -1) per non-blank line.
std::vector<int> ParsePhenotype(const std::string& text);
std::vector<int> LoadPhenotype(const std::string& path);

struct GenotypeEncoding {
  enum Kind { kDiscrete, kLineScores };
  Kind kind = kDiscrete;
  double k = 1.0;  // discrete distance
};

// Builds a selection problem over `snp_subset` (all SNPs when empty).
// Individuals missing any selected SNP are dropped; each class carries mass
// 1/2 over the remaining individuals.
SelectionProblem ToSelectionProblem(const GenotypeDataset& ds, const std::vector<int>& phenotype,
                                    const std::vector<std::size_t>& snp_subset,
                                    const GenotypeEncoding& encoding, std::size_t k_target,
                                    CriterionMode mode = CriterionMode::kEmpiricalJoint);

struct LabeledSample {
  std::vector<Point> points;
  std::vector<int> labels;
  std::size_t dimension = 0;
};

// Header label,c1,...,cr; labels +1 or -1; "NA" marks a missing value.
LabeledSample ParseLabeledCsv(const std::string& text);
LabeledSample LoadLabeledCsv(const std::string& path);

}  // namespace krselect

#endif  // KRSELECT_INGEST_H_
