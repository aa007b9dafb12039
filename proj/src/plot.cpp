#include "alstop/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace alstop {

namespace {

constexpr double kWidth = 860, kHeight = 540;
constexpr double kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;
const char* kStopColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d68910", "#16a085"};

struct Frame {
  double x_min, x_max;  // annotations
  double x(double v) const {
    if (x_max == x_min) return kLeft;
    return kLeft + (v - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  }
  double y(double f_percent) const {
    return kTop + (100.0 - f_percent) / 100.0 * (kHeight - kTop - kBottom);
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void write_svg(const std::string& path, const std::vector<std::pair<double, double>>& points,
               const std::vector<std::pair<std::string, double>>& stops, const std::string& title) {
  if (points.empty()) throw std::invalid_argument("no curve points to plot");
  Frame frame;
  frame.x_min = points.front().first;
  frame.x_max = points.back().first;
  for (const auto& [name, x] : stops) {
    frame.x_min = std::min(frame.x_min, x);
    frame.x_max = std::max(frame.x_max, x);
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"16\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int f = 0; f <= 100; f += 20) {
    const double y = frame.y(f);
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << f
        << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = frame.x_min + (frame.x_max - frame.x_min) * i / 5.0;
    const double x = frame.x(v);
    out << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << x << "\" y2=\""
        << kHeight - kBottom + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << static_cast<long>(std::lround(v)) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">annotations"
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
      << " transform=\"rotate(-90 18 " << (kTop + kHeight - kBottom) / 2 << ")\">F</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\" points=\"";
  for (const auto& [ann, f] : points) out << num(frame.x(ann)) << ',' << num(frame.y(f)) << ' ';
  out << "\"/>\n";

  // stop lines; stack labels that land within 40px of an earlier one
  std::vector<double> label_xs;
  int color = 0;
  for (const auto& [name, ann] : stops) {
    const double x = frame.x(ann);
    int level = 0;
    for (double prev : label_xs)
      if (std::fabs(prev - x) < 40.0) ++level;
    label_xs.push_back(x);
    const char* c = kStopColors[color % 6];
    ++color;
    out << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"" << c
        << "\" stroke-dasharray=\"5 3\" stroke-width=\"1.2\"/>\n";
    out << "<text x=\"" << x + 3 << "\" y=\"" << kTop + 14 + 14 * level
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << c << "\">" << name << '('
        << static_cast<long>(std::lround(ann)) << ")</text>\n";
  }
  out << "</svg>\n";
}

void write_curve_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "annotations,f\n";
  for (const auto& [ann, f] : points)
    out << static_cast<long>(std::lround(ann)) << ',' << format_double(f / 100.0) << '\n';
}

}  // namespace

void render_learning_curve(const RunTrace& trace,
                           const std::vector<std::pair<std::string, long>>& stops,
                           const std::string& svg_path, const std::string& csv_path) {
  std::vector<std::pair<double, double>> points;
  points.reserve(trace.rows.size());
  for (const auto& r : trace.rows)
    points.emplace_back(static_cast<double>(r.labeled), r.test_f * 100.0);
  std::vector<std::pair<std::string, double>> stop_pts;
  for (const auto& [name, ann] : stops) stop_pts.emplace_back(name, static_cast<double>(ann));
  write_svg(svg_path, points, stop_pts, "learning curve");
  write_curve_csv(csv_path, points);
}

void render_average_curve(const std::vector<RunTrace>& traces,
                          const std::vector<std::pair<std::string, double>>& mean_stops,
                          const std::string& svg_path, const std::string& csv_path) {
  if (traces.empty()) throw std::invalid_argument("no traces to average");
  // Average F at each annotation count shared by every fold (pools can
  // differ in size by one, so clip to the shortest).
  std::size_t common = traces.front().rows.size();
  for (const auto& t : traces) common = std::min(common, t.rows.size());
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < common; ++i) {
    double ann = 0.0, f = 0.0;
    for (const auto& t : traces) {
      ann += t.rows[i].labeled;
      f += t.rows[i].test_f;
    }
    points.emplace_back(ann / traces.size(), f / traces.size() * 100.0);
  }
  write_svg(svg_path, points, mean_stops, "learning curve (fold average)");
  write_curve_csv(csv_path, points);
}

}  // namespace alstop
