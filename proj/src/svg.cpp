#include "cvqec/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cvqec/sweep.hpp"

namespace cvqec {

namespace {

struct CsvRow {
  double pe = 0.0;
  double squeeze_db = 0.0;
  std::string engine;
  double fidelity = 0.0;
  double success = 0.0;
  double direct = 0.0;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_double(const std::string& tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc()) throw std::invalid_argument("bad numeric field: " + tok);
  return v;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line, ',');
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) throw std::invalid_argument("ragged CSV row");
    CsvRow row;
    bool have_pe = false, have_fid = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto& key = header[i];
      if (key == "pe") {
        row.pe = to_double(fields[i]);
        have_pe = true;
      } else if (key == "squeeze_db") {
        row.squeeze_db = to_double(fields[i]);
      } else if (key == "engine") {
        row.engine = fields[i];
      } else if (key == "fidelity_out1") {
        row.fidelity = to_double(fields[i]);
        have_fid = true;
      } else if (key == "success_prob") {
        row.success = to_double(fields[i]);
      } else if (key == "direct_fidelity") {
        row.direct = to_double(fields[i]);
      }
    }
    if (!have_pe || !have_fid) throw std::invalid_argument("CSV lacks filter sweep columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("CSV has no data rows");
  return rows;
}

// Fixed-precision coordinate formatting keeps the output byte-stable.
std::string coord(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

struct Panel {
  double x0, y0, width, height;  // plot area in page coordinates
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * width; }
  double py(double y) const { return y0 + height - (y - ymin) / (ymax - ymin) * height; }
};

const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  return palette[i % 6];
}

void draw_axes(std::ostringstream& out, const Panel& p, const std::string& x_label,
               const std::string& y_label) {
  out << "<rect x=\"" << coord(p.x0) << "\" y=\"" << coord(p.y0) << "\" width=\""
      << coord(p.width) << "\" height=\"" << coord(p.height)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = p.xmin + (p.xmax - p.xmin) * i / 5.0;
    const double fy = p.ymin + (p.ymax - p.ymin) * i / 5.0;
    const double gx = p.px(fx);
    const double gy = p.py(fy);
    out << "<line x1=\"" << coord(gx) << "\" y1=\"" << coord(p.y0 + p.height) << "\" x2=\""
        << coord(gx) << "\" y2=\"" << coord(p.y0 + p.height + 5) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << coord(gx) << "\" y=\"" << coord(p.y0 + p.height + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << format_number(fx) << "</text>\n";
    out << "<line x1=\"" << coord(p.x0 - 5) << "\" y1=\"" << coord(gy) << "\" x2=\""
        << coord(p.x0) << "\" y2=\"" << coord(gy) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << coord(p.x0 - 8) << "\" y=\"" << coord(gy + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_number(fy) << "</text>\n";
  }
  out << "<text x=\"" << coord(p.x0 + p.width / 2) << "\" y=\""
      << coord(p.y0 + p.height + 34) << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"" << coord(p.x0 - 42) << "\" y=\"" << coord(p.y0 + p.height / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << coord(p.x0 - 42) << ' ' << coord(p.y0 + p.height / 2) << ")\">" << y_label
      << "</text>\n";
}

void draw_polyline(std::ostringstream& out, const Panel& p,
                   const std::vector<std::pair<double, double>>& points, const char* color,
                   bool dashed) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
  if (dashed) out << " stroke-dasharray=\"6 4\"";
  out << " points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ' ';
    out << coord(p.px(points[i].first)) << ',' << coord(p.py(points[i].second));
  }
  out << "\"/>\n";
}

}  // namespace

std::string render_filter_svg(const std::string& csv_text) {
  const auto rows = parse_csv(csv_text);

  // Prefer analytic rows when both engines are present.
  bool has_analytic = false;
  for (const auto& r : rows) has_analytic |= (r.engine == "analytic");
  std::vector<CsvRow> used;
  for (const auto& r : rows) {
    if (!has_analytic || r.engine == "analytic") used.push_back(r);
  }

  std::map<double, std::vector<std::pair<double, double>>> fidelity_series, success_series;
  std::vector<std::pair<double, double>> direct;
  for (const auto& r : used) {
    fidelity_series[r.squeeze_db].push_back({r.pe, r.fidelity});
    success_series[r.squeeze_db].push_back({r.pe, r.success});
  }
  for (const auto& r : used) {
    if (r.squeeze_db == fidelity_series.begin()->first) direct.push_back({r.pe, r.direct});
  }
  for (auto* series : {&fidelity_series, &success_series}) {
    for (auto& [db, pts] : *series) std::sort(pts.begin(), pts.end());
  }
  std::sort(direct.begin(), direct.end());

  double pe_min = used.front().pe, pe_max = used.front().pe;
  for (const auto& r : used) {
    pe_min = std::min(pe_min, r.pe);
    pe_max = std::max(pe_max, r.pe);
  }
  if (pe_max <= pe_min) pe_max = pe_min + 1e-3;

  Panel left{70, 40, 370, 300, pe_min, pe_max, 0.0, 1.0};
  Panel right{570, 40, 370, 300, pe_min, pe_max, 0.0, 1.0};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"430\" "
         "viewBox=\"0 0 1000 430\">\n";
  out << "<rect width=\"1000\" height=\"430\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"255\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">Postselected "
         "fidelity</text>\n";
  out << "<text x=\"755\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">Success "
         "probability</text>\n";
  draw_axes(out, left, "erasure probability", "fidelity");
  draw_axes(out, right, "erasure probability", "success probability");

  std::size_t idx = 0;
  double legend_y = 60;
  for (const auto& [db, pts] : fidelity_series) {
    const char* color = series_color(idx);
    draw_polyline(out, left, pts, color, false);
    draw_polyline(out, right, success_series[db], color, false);
    out << "<line x1=\"452\" y1=\"" << coord(legend_y - 4) << "\" x2=\"482\" y2=\""
        << coord(legend_y - 4) << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
    out << "<text x=\"488\" y=\"" << coord(legend_y) << "\" font-size=\"11\">"
        << format_number(db) << " dB</text>\n";
    legend_y += 18;
    ++idx;
  }
  if (!direct.empty()) {
    draw_polyline(out, left, direct, "#555555", true);
    out << "<line x1=\"452\" y1=\"" << coord(legend_y - 4) << "\" x2=\"482\" y2=\""
        << coord(legend_y - 4)
        << "\" stroke=\"#555555\" stroke-width=\"1.6\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"488\" y=\"" << coord(legend_y) << "\" font-size=\"11\">direct</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cvqec
