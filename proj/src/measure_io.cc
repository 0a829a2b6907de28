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

#include <string>
#include <vector>

#include "krselect/error.h"
#include "krselect/measures.h"
#include "text_util.h"

namespace krselect {

AtomicMeasure ParseMeasureCsv(const std::string& text) {
  using internal::ParseDouble;
  using internal::SplitChar;
  using internal::Trim;

  bool have_header = false;
  std::size_t dim = 0;
  std::vector<Point> points;
  std::vector<double> weights;
  int line_no = 0;
  for (const std::string& raw : internal::SplitLines(text)) {
    ++line_no;
    const auto line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = SplitChar(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "weight") {
        throw Error(ErrorCode::kMalformedHeader,
                    "expected header weight,c1,...,cr at line " + std::to_string(line_no));
      }
      dim = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim + 1) + " fields");
    }
    Point p(dim);
    std::vector<double> values(dim + 1);
    for (std::size_t f = 0; f <= dim; ++f) {
      const auto v = ParseDouble(fields[f]);
      if (!v) {
        throw Error(ErrorCode::kMalformedLine,
                    "line " + std::to_string(line_no) + ": bad number '" + fields[f] + "'");
      }
      values[f] = *v;
    }
    if (values[0] < 0.0) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": negative weight");
    }
    weights.push_back(values[0]);
    points.emplace_back(values.begin() + 1, values.end());
  }
  if (!have_header) throw Error(ErrorCode::kMalformedHeader, "missing header");
  if (points.empty()) throw Error(ErrorCode::kEmptySample, "measure has no support points");
  return AtomicMeasure(MakePointSet(std::move(points), dim), std::move(weights));
}

AtomicMeasure LoadMeasureCsv(const std::string& path) {
  return ParseMeasureCsv(internal::ReadFile(path));
}

}  // namespace krselect
