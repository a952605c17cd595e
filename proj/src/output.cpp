#include "vlcloc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace vlcloc {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out << "t_s,x1,y1,x2,y2,x1_hat,y1_hat,x2_hat,y2_hat,e1_m,e2_m,e_norm_m,valid\n";
  for (const auto& r : result.records) {
    const CycleRecord& c = r.cycle;
    const auto& est = c.estimate;
    const double e1 = est.valid1 ? (c.truth.p1 - est.p1).norm() : nan;
    const double e2 = est.valid2 ? (c.truth.p2 - est.p2).norm() : nan;
    const double cells[] = {c.t,
                            c.truth.p1.x,
                            c.truth.p1.y,
                            c.truth.p2.x,
                            c.truth.p2.y,
                            est.valid1 ? est.p1.x : nan,
                            est.valid1 ? est.p1.y : nan,
                            est.valid2 ? est.p2.x : nan,
                            est.valid2 ? est.p2.y : nan,
                            e1,
                            e2,
                            est.valid() ? c.error.norm : nan};
    for (double v : cells) out << format_number(v) << ',';
    out << (est.valid() ? 1 : 0) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "x_m,y_m,mean_err_m,availability\n";
  for (const auto& c : cells) {
    out << format_number(c.x_m) << ',' << format_number(c.y_m) << ','
        << format_number(c.mean_err_m) << ',' << format_number(c.availability) << '\n';
  }
}

void write_crlb_csv(std::ostream& out, const std::vector<CrlbMapRow>& rows) {
  out << "x,y,sigma_used,bound_p1_m,bound_p2_m\n";
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.sigma_used)
        << ',' << format_number(r.bound_p1_m) << ',' << format_number(r.bound_p2_m) << '\n';
  }
}

void write_qrx_design_csv(std::ostream& out, const std::vector<QrxCurvePoint>& curve) {
  out << "theta_deg,phi\n";
  for (const auto& p : curve) out << format_number(p.theta_deg) << ',' << format_number(p.phi) << '\n';
}

void write_buffer_csv(std::ostream& out, const QuadrantBuffer& buffer,
                      const std::vector<double>& s_hat) {
  out << "w,Q_A,Q_B,Q_C,Q_D,s_hat\n";
  for (std::size_t k = 0; k < buffer.size(); ++k) {
    out << buffer.start_index + static_cast<std::int64_t>(k);
    for (int q = 0; q < 4; ++q) out << ',' << format_number(buffer.readings[q][k]);
    out << ',' << format_number(k < s_hat.size() ? s_hat[k] : std::numeric_limits<double>::quiet_NaN())
        << '\n';
  }
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& o, const PlotLabels& l) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  o << "<!-- config-hash: " << escape(l.config_hash) << " -->\n";
  o << "<metadata>config-hash " << escape(l.config_hash) << "</metadata>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
    << escape(l.title) << "</text>\n";
  o << "<text x=\"" << num(kWidth - 8) << "\" y=\"" << num(kHeight - 8)
    << "\" text-anchor=\"end\" font-size=\"9\" fill=\"#777\">config " << escape(l.config_hash)
    << "</text>\n";
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

void axes(std::ostringstream& o, const Axis& ax, const Axis& ay, const PlotLabels& l) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
    << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double vx = ax.lo + (ax.hi - ax.lo) * i / 5.0;
    const double px = ax.map(vx, x0, x1);
    o << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 16)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << num(vx) << "</text>\n";
    const double vy = ay.log ? std::pow(10.0, std::log10(ay.lo) +
                                                  (std::log10(ay.hi) - std::log10(ay.lo)) * i / 5.0)
                             : ay.lo + (ay.hi - ay.lo) * i / 5.0;
    const double py = ay.map(vy, y0, y1);
    o << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << num(vy) << "</text>\n";
    o << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x1) << "\" y1=\"" << num(py) << "\" y2=\""
      << num(py) << "\" stroke=\"#ddd\"/>\n";
  }
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 20)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(l.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << num((y0 + y1) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(l.y_label)
    << "</text>\n";
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                          bool log_y) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  if (!std::isfinite(xlo)) xlo = 0.0, xhi = 1.0, ylo = log_y ? 1e-3 : 0.0, yhi = 1.0;
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (log_y) {
    ylo = std::pow(10.0, std::floor(std::log10(ylo)));
    yhi = std::pow(10.0, std::ceil(std::log10(yhi)));
    if (yhi <= ylo) yhi = ylo * 10.0;
  } else {
    if (yhi <= ylo) yhi = ylo + 1.0;
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }
  const Axis ax{xlo, xhi, false}, ay{ylo, yhi, log_y};
  std::ostringstream o;
  header(o, labels);
  axes(o, ax, ay, labels);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    std::string path;
    bool pen = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) {
        pen = false;
        continue;
      }
      path += (pen ? " L" : " M") + num(ax.map(s.x[i], x0, x1)) + ' ' + num(ay.map(s.y[i], y0, y1));
      pen = true;
    }
    o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(k);
    o << "<line x1=\"" << num(x1 + 10) << "\" x2=\"" << num(x1 + 30) << "\" y1=\"" << num(ly)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(x1 + 34) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::vector<GridValue>& cells, const PlotLabels& labels) {
  std::set<double> xs, ys;
  double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
  for (const auto& c : cells) {
    xs.insert(c.x);
    ys.insert(c.y);
    if (std::isfinite(c.value) && c.value > 0.0) {
      vlo = std::min(vlo, c.value);
      vhi = std::max(vhi, c.value);
    }
  }
  if (!std::isfinite(vlo)) vlo = 1e-3, vhi = 1.0;
  if (vhi <= vlo) vhi = vlo * 10.0;
  const double dx = xs.size() > 1 ? (*xs.rbegin() - *xs.begin()) / static_cast<double>(xs.size() - 1) : 1.0;
  const double dy = ys.size() > 1 ? (*ys.rbegin() - *ys.begin()) / static_cast<double>(ys.size() - 1) : 1.0;
  const Axis ax{xs.empty() ? 0.0 : *xs.begin() - dx / 2, xs.empty() ? 1.0 : *xs.rbegin() + dx / 2, false};
  const Axis ay{ys.empty() ? 0.0 : *ys.begin() - dy / 2, ys.empty() ? 1.0 : *ys.rbegin() + dy / 2, false};
  std::ostringstream o;
  header(o, labels);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto colour = [&](double v) {
    const double t = std::clamp((std::log10(v) - std::log10(vlo)) / (std::log10(vhi) - std::log10(vlo)), 0.0, 1.0);
    // blue -> yellow -> red
    const int r = static_cast<int>(std::lround(255 * std::min(1.0, 2 * t)));
    const int g = static_cast<int>(std::lround(255 * (t < 0.5 ? 2 * t : 2 - 2 * t) * 0.9 + 20));
    const int b = static_cast<int>(std::lround(255 * std::max(0.0, 1 - 2 * t)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, std::min(g, 255), b);
    return std::string(buf);
  };
  for (const auto& c : cells) {
    if (!std::isfinite(c.value) || c.value <= 0.0) continue;
    const double px = ax.map(c.x - dx / 2, x0, x1), px2 = ax.map(c.x + dx / 2, x0, x1);
    const double py = ay.map(c.y + dy / 2, y0, y1), py2 = ay.map(c.y - dy / 2, y0, y1);
    o << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\"" << num(px2 - px)
      << "\" height=\"" << num(py2 - py) << "\" fill=\"" << colour(c.value) << "\"/>\n";
  }
  axes(o, ax, ay, labels);
  for (int i = 0; i <= 4; ++i) {
    const double v = std::pow(10.0, std::log10(vlo) + (std::log10(vhi) - std::log10(vlo)) * i / 4.0);
    const double ly = y0 - (y0 - y1) * i / 4.0;
    o << "<rect x=\"" << num(x1 + 14) << "\" y=\"" << num(ly - 8) << "\" width=\"16\" height=\"16\" fill=\""
      << colour(v) << "\"/>\n";
    o << "<text x=\"" << num(x1 + 36) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
      << num(v) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace vlcloc
