// Copyright 2026 The reflm Authors.
//
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

#ifndef REFLM_HARNESS_HEATMAP_H_
#define REFLM_HARNESS_HEATMAP_H_

#include <string>
#include <vector>

namespace reflm {

// Matrix with labelled rows and columns; columns are decoding steps.
struct HeatMap {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> values;  // [row][column]
};

// Header row "", column labels...; then one line per row: label, values.
// Fields containing commas or quotes are quoted.
std::string heatmap_csv(const HeatMap& map);

}  // namespace reflm

#endif  // REFLM_HARNESS_HEATMAP_H_
