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

#include "crowdteam/plot.hpp"

#include "crowdteam/bench.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

namespace crowdteam {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PlotError("non-numeric value '" + s + "'");
  }
}

const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"};

std::string fmt(double x) { return format_number(x); }

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke = "#333") {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2)
          << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size << "\" text-anchor=\""
          << anchor << "\">" << escape(s) << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    body_ << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << stroke << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      body_ << (i ? " " : "") << fmt(pts[i].first) << ',' << fmt(pts[i].second);
    body_ << "\"/>\n";
    for (const auto& [x, y] : pts)
      body_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_) << "\" height=\"" << fmt(h_)
        << "\" viewBox=\"0 0 " << fmt(w_) << ' ' << fmt(h_) << "\" font-family=\"sans-serif\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w_) << "\" height=\"" << fmt(h_) << "\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double w_, h_;
  std::ostringstream body_;
};

void line_chart(Svg& svg, double x0, double y0, double w, double h, const std::vector<Series>& series,
                const std::string& x_label, const std::string& y_label, const std::string& title) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = std::min(0.0, y);
        ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double left = x0 + 60, right = x0 + w - 20, top = y0 + 30, bottom = y0 + h - 45;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  svg.text(x0 + w / 2, y0 + 18, title, "middle", 14);
  svg.line(left, bottom, right, bottom);
  svg.line(left, top, left, bottom);
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0, yv = ymin + (ymax - ymin) * t / 4.0;
    svg.text(px(xv), bottom + 15, fmt(xv), "middle", 10);
    svg.text(left - 5, py(yv) + 4, fmt(yv), "end", 10);
  }
  svg.text((left + right) / 2, bottom + 35, x_label);
  svg.text(x0 + 12, (top + bottom) / 2, y_label, "middle");
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [x, y] : series[i].points) pts.emplace_back(px(x), py(y));
    const std::string color = kPalette[i % std::size(kPalette)];
    svg.polyline(pts, color);
    svg.rect(right - 130, top + 5 + 16.0 * double(i), 10, 10, color);
    svg.text(right - 115, top + 14 + 16.0 * double(i), series[i].name, "start", 11);
  }
}

void require_columns(const CsvTable& t, const std::string& expected) {
  if (join(t.header) != expected) throw PlotError("unrecognized CSV schema; expected columns: " + expected);
}

std::string render_bench(const CsvTable& t) {
  const std::vector<std::pair<std::string, std::string>> panels = {
      {"te_total", "overall efficiency"}, {"skill_perceived", "team skills"},  {"uncertainty", "leader uncertainty"},
      {"cost", "team cost"},              {"social", "social relationship"}, {"wall_time_us", "running time (us)"}};
  const int solver_col = t.column("solver");
  std::vector<std::string> solvers;
  for (const auto& row : t.rows)
    if (std::find(solvers.begin(), solvers.end(), row[std::size_t(solver_col)]) == solvers.end())
      solvers.push_back(row[std::size_t(solver_col)]);

  const double pw = 300, ph = 240;
  Svg svg(2 * pw, 3 * ph);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const int col = t.column(panels[p].first);
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& row : t.rows) {
      auto& a = acc[row[std::size_t(solver_col)]];
      a.first += to_double(row[std::size_t(col)]);
      a.second += 1;
    }
    double top_value = 0;
    for (const auto& [_, a] : acc) top_value = std::max(top_value, a.first / a.second);
    if (top_value <= 0) top_value = 1;

    const double x0 = pw * double(p % 2), y0 = ph * double(p / 2);
    const double left = x0 + 50, bottom = y0 + ph - 40, top = y0 + 35;
    svg.text(x0 + pw / 2, y0 + 20, panels[p].second, "middle", 14);
    svg.line(left, bottom, x0 + pw - 20, bottom);
    svg.line(left, top, left, bottom);
    svg.text(left - 5, top + 4, fmt(top_value), "end", 10);
    svg.text(left - 5, bottom + 4, "0", "end", 10);
    const double slot = (pw - 90) / double(std::max<std::size_t>(1, solvers.size()));
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      const auto& a = acc[solvers[s]];
      const double mean = a.first / a.second;
      const double height = std::max(0.0, mean) / top_value * (bottom - top);
      const double x = left + 10 + slot * double(s);
      svg.rect(x, bottom - height, slot - 20, height, kPalette[s % std::size(kPalette)]);
      svg.text(x + (slot - 20) / 2, bottom + 15, solvers[s], "middle", 11);
      svg.text(x + (slot - 20) / 2, bottom - height - 4, fmt(mean), "middle", 10);
    }
    svg.text(x0 + pw / 2, bottom + 32, panels[p].first, "middle", 10);
  }
  return svg.str();
}

std::string render_sweep(const CsvTable& t, const std::string& metric) {
  const int k_col = t.column("k"), solver_col = t.column("solver"), metric_col = t.column("metric"),
            mean_col = t.column("mean");
  std::vector<Series> series;
  for (const auto& row : t.rows) {
    if (row[std::size_t(metric_col)] != metric) continue;
    const auto& name = row[std::size_t(solver_col)];
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.name == name; });
    if (it == series.end()) it = series.insert(series.end(), Series{name, {}});
    it->points.emplace_back(to_double(row[std::size_t(k_col)]), to_double(row[std::size_t(mean_col)]));
  }
  if (series.empty()) throw PlotError("sweep CSV has no rows for metric '" + metric + "'");
  Svg svg(640, 420);
  line_chart(svg, 0, 0, 640, 420, series, "k", metric, metric + " vs k");
  return svg.str();
}

std::string render_ranks(const CsvTable& t) {
  const int k_col = t.column("k");
  std::vector<Series> series;
  for (const char* name : {"p_rank1", "p_rank2_or_better", "p_full_scan"}) {
    Series s{name, {}};
    const int col = t.column(name);
    for (const auto& row : t.rows) s.points.emplace_back(to_double(row[std::size_t(k_col)]), to_double(row[std::size_t(col)]));
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  Svg svg(640, 420);
  line_chart(svg, 0, 0, 640, 420, series, "k", "probability", "secretary rank statistics");
  return svg.str();
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      t.header = split(line);
      have_header = true;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

std::string render_svg(const CsvTable& table, const std::string& sweep_metric) {
  const std::string header = join(table.header);
  auto check = [&](const char* expected) {
    require_columns(table, expected);
    if (table.rows.empty()) throw PlotError("no data rows");
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      if (table.rows[i].size() != table.header.size())
        throw PlotError("row " + std::to_string(i + 1) + " has " + std::to_string(table.rows[i].size()) +
                        " fields, expected " + std::to_string(table.header.size()));
  };
  if (header == kBenchHeader) {
    check(kBenchHeader);
    return render_bench(table);
  }
  if (header == kSweepHeader) {
    check(kSweepHeader);
    return render_sweep(table, sweep_metric);
  }
  if (header == kRanksHeader) {
    check(kRanksHeader);
    return render_ranks(table);
  }
  throw PlotError(std::string("unrecognized CSV schema; expected one of the column sets:\n  ") + kBenchHeader +
                  "\n  " + kSweepHeader + "\n  " + kRanksHeader);
}

}  // namespace crowdteam
