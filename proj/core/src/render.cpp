#include "ktchart/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "ktchart/error.hpp"

namespace ktchart {

namespace {

constexpr int kLeft = 70;
constexpr int kRight = 110;
constexpr int kTop = 30;
constexpr int kBottom = 40;

std::string num(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string label(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.4g", v);
  return buffer;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

struct LimitLine {
  const char* name;
  double value;
  bool dashed;
};

struct Panel {
  const char* id;
  const char* title;
  int top;
  std::vector<double> values;
  std::vector<bool> out;
  std::vector<LimitLine> limits;
};

class Frame {
 public:
  Frame(double x_min, double x_max, double y_min, double y_max, int width, int top, int height)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width), top_(top), height_(height) {}

  double x(double v) const { return kLeft + (v - x_min_) / (x_max_ - x_min_) * (width_ - kLeft - kRight); }
  double y(double v) const { return top_ + height_ - kBottom - (v - y_min_) / (y_max_ - y_min_) * (height_ - kTop - kBottom); }
  double left() const { return kLeft; }
  double right() const { return width_ - kRight; }
  double plot_top() const { return top_ + kTop; }
  double plot_bottom() const { return top_ + height_ - kBottom; }

 private:
  double x_min_, x_max_, y_min_, y_max_;
  int width_, top_, height_;
};

void draw_panel(std::ostream& out, const Panel& panel, const std::vector<double>& xs, double lo, double hi,
                double x_min, double x_max, const RenderOptions& options) {
  double y_min = 0.0;
  double y_max = 0.0;
  for (double v : panel.values) y_max = std::max(y_max, v);
  for (const auto& l : panel.limits) y_max = std::max(y_max, l.value);
  for (double v : panel.values) y_min = std::min(y_min, v);
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  y_max += 0.08 * (y_max - y_min);

  const Frame f(x_min, x_max, y_min, y_max, options.width, panel.top, options.panel_height);

  out << "<g id=\"" << panel.id << "\" class=\"panel\" data-x-min=\"" << label(lo) << "\" data-x-max=\""
      << label(hi) << "\">\n";
  out << "<text class=\"title\" x=\"" << num(f.left()) << "\" y=\"" << num(panel.top + 18.0) << "\">"
      << panel.title << "</text>\n";
  out << "<rect class=\"frame\" x=\"" << num(f.left()) << "\" y=\"" << num(f.plot_top()) << "\" width=\""
      << num(f.right() - f.left()) << "\" height=\"" << num(f.plot_bottom() - f.plot_top())
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (const auto& l : panel.limits) {
    const double y = f.y(l.value);
    out << "<line class=\"limit " << l.name << "\" x1=\"" << num(f.left()) << "\" x2=\"" << num(f.right())
        << "\" y1=\"" << num(y) << "\" y2=\"" << num(y) << "\" stroke=\"" << (l.dashed ? "#d08000" : "#b00000")
        << "\"" << (l.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    out << "<text class=\"limit-label\" x=\"" << num(f.right() + 6.0) << "\" y=\"" << num(y + 4.0) << "\">"
        << l.name << " " << label(l.value) << "</text>\n";
  }

  out << "<polyline class=\"series\" fill=\"none\" stroke=\"#2060a0\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out << ' ';
    out << num(f.x(xs[i])) << ',' << num(f.y(panel.values[i]));
  }
  out << "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool out_point = panel.out[i];
    out << "<circle class=\"point " << (out_point ? "out" : "in") << "\" data-window=\"" << label(xs[i])
        << "\" cx=\"" << num(f.x(xs[i])) << "\" cy=\"" << num(f.y(panel.values[i])) << "\" r=\""
        << (out_point ? "4" : "2.5") << "\" fill=\"" << (out_point ? "#e00000" : "#2060a0") << "\"/>\n";
  }

  // x ticks at the ends plus up to eight interior positions.
  const int ticks = std::min<int>(10, static_cast<int>(hi - lo) + 1);
  for (int t = 0; t < std::max(ticks, 1); ++t) {
    const double v = ticks <= 1 ? lo : std::round(lo + (hi - lo) * t / (ticks - 1));
    out << "<text class=\"x-tick\" x=\"" << num(f.x(v)) << "\" y=\"" << num(f.plot_bottom() + 16.0)
        << "\" text-anchor=\"middle\">" << label(v) << "</text>\n";
  }
  out << "<text class=\"y-tick\" x=\"" << num(f.left() - 6.0) << "\" y=\"" << num(f.plot_bottom())
      << "\" text-anchor=\"end\">" << label(y_min) << "</text>\n";
  out << "<text class=\"y-tick\" x=\"" << num(f.left() - 6.0) << "\" y=\"" << num(f.plot_top() + 8.0)
      << "\" text-anchor=\"end\">" << label(y_max) << "</text>\n";
  out << "</g>\n";
}

}  // namespace

void render_charts(std::ostream& out, const std::vector<ChartPoint>& points, const ChartLimits& a_chart,
                   const ChartLimits& r2_chart, const RenderOptions& options) {
  if (points.empty()) throw InvalidArgument("cannot render a chart without points");

  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(static_cast<double>(p.window));
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double x_min = lo == hi ? lo - 0.5 : lo;
  const double x_max = lo == hi ? hi + 0.5 : hi;

  Panel a{"a-chart", "a chart: dist^2(a)", 0, {}, {}, {}};
  Panel r{"r2-chart", "R^2 chart", options.panel_height, {}, {}, {}};
  for (const auto& p : points) {
    a.values.push_back(p.center_dist);
    a.out.push_back(p.a_status == AStatus::out_of_control);
    r.values.push_back(p.r_squared);
    r.out.push_back(p.r2_status == R2Status::out_high || p.r2_status == R2Status::out_low);
  }
  a.limits = {{"ucl", a_chart.ucl, false}, {"cl", a_chart.center_line, false}, {"lcl", a_chart.lcl, false}};
  r.limits = {{"ucl", r2_chart.ucl, false}, {"cl", r2_chart.center_line, false}, {"lcl", r2_chart.lcl, false}};
  if (r2_chart.uwl) r.limits.push_back({"uwl", *r2_chart.uwl, true});
  if (r2_chart.lwl) r.limits.push_back({"lwl", *r2_chart.lwl, true});

  const int height = 2 * options.panel_height;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << options.width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  if (!options.title.empty()) out << "<title>" << escape(options.title) << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  draw_panel(out, a, xs, lo, hi, x_min, x_max, options);
  draw_panel(out, r, xs, lo, hi, x_min, x_max, options);
  out << "</svg>\n";
}

}  // namespace ktchart
