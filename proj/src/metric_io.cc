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

#include "json.hpp"
#include "krselect/error.h"
#include "krselect/metrics.h"
#include "text_util.h"

namespace krselect {
namespace {

using nlohmann::json;

double RequireNumber(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(ErrorCode::kInvalidMetric, std::string("missing numeric field '") + key + "'");
  }
  return obj.at(key).get<double>();
}

Metric ParseCoordinate(const json& entry) {
  if (!entry.is_object() || !entry.contains("type") || !entry.at("type").is_string()) {
    throw Error(ErrorCode::kInvalidMetric, "each coordinate needs a string 'type'");
  }
  const std::string type = entry.at("type").get<std::string>();
  if (type == "discrete") return Metric::Discrete(RequireNumber(entry, "k"));
  if (type == "line") return Metric::Line();
  if (type == "circle") return Metric::Circle(RequireNumber(entry, "circumference"));
  if (type == "explicit") {
    if (!entry.contains("matrix") || !entry.at("matrix").is_array()) {
      throw Error(ErrorCode::kInvalidMetric, "explicit coordinate needs 'matrix'");
    }
    const auto& rows = entry.at("matrix");
    DenseMatrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != rows.size()) {
        throw Error(ErrorCode::kInvalidMetric, "explicit matrix must be square");
      }
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (!rows[i][j].is_number()) {
          throw Error(ErrorCode::kInvalidMetric, "explicit matrix entries must be numbers");
        }
        m(i, j) = rows[i][j].get<double>();
      }
    }
    return Metric::Explicit(std::move(m));
  }
  throw Error(ErrorCode::kInvalidMetric, "unknown coordinate type '" + type + "'");
}

}  // namespace

Metric ParseMetricJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidMetric, std::string("bad metric JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coords") || !doc.at("coords").is_array() ||
      doc.at("coords").empty()) {
    throw Error(ErrorCode::kInvalidMetric, "metric config needs a non-empty 'coords' list");
  }
  Combine combine = Combine::kL1;
  if (doc.contains("combine")) {
    const auto& c = doc.at("combine");
    if (c == "l1") {
      combine = Combine::kL1;
    } else if (c == "linf") {
      combine = Combine::kLInf;
    } else {
      throw Error(ErrorCode::kInvalidMetric, "combine must be \"l1\" or \"linf\"");
    }
  }
  std::vector<Metric> coords;
  for (const auto& entry : doc.at("coords")) coords.push_back(ParseCoordinate(entry));
  if (coords.size() == 1) return coords.front();
  for (const Metric& m : coords) {
    if (m.kind() == MetricKind::kExplicit) {
      throw Error(ErrorCode::kInvalidMetric, "explicit matrix allowed only as the sole coordinate");
    }
  }
  return Metric::Product(std::move(coords), combine);
}

Metric LoadMetricJson(const std::string& path) {
  return ParseMetricJson(internal::ReadFile(path));
}

}  // namespace krselect
