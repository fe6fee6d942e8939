#include "vrsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vrsim {

namespace {

constexpr const char* kHeader =
    "axis,axis_value,scheme,seed,mean_cm_ms,p90_cm_ms,mean_cp_ms,mean_e2e_ms,hd_ratio";

[[noreturn]] void bad_row(std::size_t row, const char* why) {
  throw std::invalid_argument("csv row " + std::to_string(row) + ": " + why);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_num(const std::string& s, std::size_t row) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) bad_row(row, "malformed number");
    return v;
  } catch (const std::invalid_argument&) {
    bad_row(row, "malformed number");
  } catch (const std::out_of_range&) {
    bad_row(row, "number out of range");
  }
}

struct Series {
  // axis_value -> (sum, count) for the plotted metric
  std::map<int, std::pair<double, int>> mean;
  std::map<int, std::pair<double, int>> second;  // p90 on the comm figure
};

const char* scheme_color(const std::string& scheme) {
  if (scheme == "proposed") return "#c0392b";
  if (scheme == "baseline1") return "#2471a3";
  if (scheme == "baseline2") return "#1e8449";
  return "#7d3c98";
}

struct Canvas {
  static constexpr double kW = 640, kH = 420;
  static constexpr double kL = 70, kR = 20, kT = 24, kB = 56;
  double x_min = 0, x_max = 1, y_max = 1;

  double px(double x) const {
    return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR);
  }
  double py(double y) const { return kH - kB - y / y_max * (kH - kT - kB); }
};

void emit_frame(std::ostream& svg, const Canvas& c, const std::string& title,
                const std::string& x_label, const std::string& y_label) {
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << Canvas::kW
      << "' height='" << Canvas::kH << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << Canvas::kW / 2 << "' y='16' text-anchor='middle' "
         "font-family='sans-serif' font-size='14'>"
      << title << "</text>\n";
  // axes
  svg << "<line x1='" << Canvas::kL << "' y1='" << Canvas::kH - Canvas::kB
      << "' x2='" << Canvas::kW - Canvas::kR << "' y2='" << Canvas::kH - Canvas::kB
      << "' stroke='black'/>\n"
      << "<line x1='" << Canvas::kL << "' y1='" << Canvas::kT << "' x2='"
      << Canvas::kL << "' y2='" << Canvas::kH - Canvas::kB << "' stroke='black'/>\n";
  char buf[64];
  for (int i = 0; i <= 5; ++i) {
    const double y = c.y_max * i / 5.0;
    std::snprintf(buf, sizeof buf, "%.2f", y);
    svg << "<text x='" << Canvas::kL - 6 << "' y='" << c.py(y) + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>" << buf
        << "</text>\n"
        << "<line x1='" << Canvas::kL << "' y1='" << c.py(y) << "' x2='"
        << Canvas::kW - Canvas::kR << "' y2='" << c.py(y)
        << "' stroke='#dddddd'/>\n";
  }
  svg << "<text x='" << (Canvas::kL + Canvas::kW - Canvas::kR) / 2 << "' y='"
      << Canvas::kH - 14
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
      << x_label << "</text>\n"
      << "<text x='16' y='" << Canvas::kH / 2
      << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
         "transform='rotate(-90 16 "
      << Canvas::kH / 2 << ")'>" << y_label << "</text>\n";
}

void emit_series(std::ostream& svg, const Canvas& c,
                 const std::map<int, std::pair<double, int>>& pts,
                 const char* color, bool dashed) {
  svg << "<polyline fill='none' stroke='" << color << "' stroke-width='2'";
  if (dashed) svg << " stroke-dasharray='6,4'";
  svg << " points='";
  for (const auto& [x, acc] : pts)
    svg << c.px(x) << ',' << c.py(acc.first / acc.second) << ' ';
  svg << "'/>\n";
  for (const auto& [x, acc] : pts) {
    svg << "<circle cx='" << c.px(x) << "' cy='" << c.py(acc.first / acc.second)
        << "' r='3' fill='" << color << "'/>\n";
  }
}

void emit_legend(std::ostream& svg, const std::map<std::string, Series>& by_scheme,
                 bool with_p90) {
  double y = Canvas::kT + 14;
  for (const auto& [scheme, series] : by_scheme) {
    (void)series;
    const char* color = scheme_color(scheme);
    svg << "<line x1='" << Canvas::kW - 170 << "' y1='" << y - 4 << "' x2='"
        << Canvas::kW - 140 << "' y2='" << y - 4 << "' stroke='" << color
        << "' stroke-width='2'/>\n"
        << "<text x='" << Canvas::kW - 134 << "' y='" << y
        << "' font-family='sans-serif' font-size='11'>" << scheme
        << (with_p90 ? " p90" : "") << "</text>\n";
    y += 16;
    if (with_p90) {
      svg << "<line x1='" << Canvas::kW - 170 << "' y1='" << y - 4 << "' x2='"
          << Canvas::kW - 140 << "' y2='" << y - 4 << "' stroke='" << color
          << "' stroke-width='2' stroke-dasharray='6,4'/>\n"
          << "<text x='" << Canvas::kW - 134 << "' y='" << y
          << "' font-family='sans-serif' font-size='11'>" << scheme
          << " mean</text>\n";
      y += 16;
    }
  }
}

void plot_metric(const std::vector<CsvRow>& rows, std::ostream& svg,
                 double CsvRow::* primary, double CsvRow::* secondary,
                 const std::string& title, const std::string& y_label) {
  if (rows.empty()) throw std::invalid_argument("plot: no data rows");
  const std::string axis = rows.front().axis;

  std::map<std::string, Series> by_scheme;
  double x_min = 1e300, x_max = -1e300, y_max = 0.0;
  for (const CsvRow& r : rows) {
    if (r.axis != axis) throw std::invalid_argument("plot: mixed sweep axes");
    Series& s = by_scheme[r.scheme];
    auto& m = s.mean[r.axis_value];
    m.first += r.*primary;
    ++m.second;
    if (secondary) {
      auto& q = s.second[r.axis_value];
      q.first += r.*secondary;
      ++q.second;
    }
    x_min = std::min(x_min, static_cast<double>(r.axis_value));
    x_max = std::max(x_max, static_cast<double>(r.axis_value));
  }
  for (const auto& [scheme, s] : by_scheme) {
    (void)scheme;
    for (const auto& [x, acc] : s.mean) {
      (void)x;
      y_max = std::max(y_max, acc.first / acc.second);
    }
    for (const auto& [x, acc] : s.second) {
      (void)x;
      y_max = std::max(y_max, acc.first / acc.second);
    }
  }
  if (y_max <= 0.0) y_max = 1.0;

  Canvas c;
  c.x_min = x_min;
  c.x_max = x_max > x_min ? x_max : x_min + 1.0;
  c.y_max = y_max * 1.1;
  emit_frame(svg, c, title, axis, y_label);
  for (int x = static_cast<int>(x_min); x <= static_cast<int>(x_max); ++x) {
    bool present = false;
    for (const auto& [scheme, s] : by_scheme) {
      (void)scheme;
      if (s.mean.count(x)) present = true;
    }
    if (!present) continue;
    svg << "<text x='" << c.px(x) << "' y='" << Canvas::kH - Canvas::kB + 16
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>" << x
        << "</text>\n";
  }
  for (const auto& [scheme, s] : by_scheme) {
    const char* color = scheme_color(scheme);
    if (secondary) {
      emit_series(svg, c, s.second, color, /*dashed=*/false);  // p90 solid
      emit_series(svg, c, s.mean, color, /*dashed=*/true);
    } else {
      emit_series(svg, c, s.mean, color, /*dashed=*/false);
    }
  }
  emit_legend(svg, by_scheme, secondary != nullptr);
  svg << "</svg>\n";
}

}  // namespace

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw std::invalid_argument("csv: unexpected header");

  std::vector<CsvRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != 9) bad_row(n, "expected 9 fields");
    CsvRow r;
    r.axis = f[0];
    if (r.axis != "players" && r.axis != "mmaps") bad_row(n, "unknown axis");
    r.axis_value = static_cast<int>(parse_num(f[1], n));
    r.scheme = f[2];
    r.seed = static_cast<std::uint64_t>(parse_num(f[3], n));
    r.mean_cm_ms = parse_num(f[4], n);
    r.p90_cm_ms = parse_num(f[5], n);
    r.mean_cp_ms = parse_num(f[6], n);
    r.mean_e2e_ms = parse_num(f[7], n);
    r.hd_ratio = parse_num(f[8], n);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::invalid_argument("csv: header but no data rows");
  return rows;
}

void plot_comm_delay(const std::vector<CsvRow>& rows, std::ostream& svg) {
  plot_metric(rows, svg, &CsvRow::mean_cm_ms, &CsvRow::p90_cm_ms,
              "HD frame communication delay", "delay (ms)");
}

void plot_compute_delay(const std::vector<CsvRow>& rows, std::ostream& svg) {
  plot_metric(rows, svg, &CsvRow::mean_cp_ms, nullptr,
              "Frame computing delay", "delay (ms)");
}

}  // namespace vrsim
