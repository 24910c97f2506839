/*
Copyright 2026 The crowdteam Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowdteam {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(std::istream& in);

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Standalone SVG for a bench, sweep or ranks CSV. Bench tables become one bar
// panel per metric (mean per solver); sweep and ranks tables become line
// charts over k. `sweep_metric` picks the sweep metric to draw.
// Throws PlotError on an unknown schema or an empty body.
std::string render_svg(const CsvTable& table, const std::string& sweep_metric = "p_best");

}  // namespace crowdteam
