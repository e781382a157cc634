#include "leo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace leo::plot {

namespace {

constexpr double kW = 720, kH = 460, kLeft = 80, kRight = 190, kTop = 50, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const {
    return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b);
  }
};

Axis padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double d = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
    return {lo - d, hi + d};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string frame_open(const std::string& title, const std::string& xl, const std::string& yl) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << esc(title)
    << "</text>\n"
    << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
    << "\" height=\"" << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"#444\"/>\n"
    << "<text x=\"" << kLeft + (kW - kLeft - kRight) / 2 << "\" y=\"" << kH - 15
    << "\" text-anchor=\"middle\">" << esc(xl) << "</text>\n"
    << "<text transform=\"translate(18," << kTop + (kH - kTop - kBottom) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << esc(yl) << "</text>\n";
  return o.str();
}

void y_ticks(std::ostringstream& o, const Axis& ay) {
  for (int i = 0; i <= 5; ++i) {
    const double v = ay.lo + (ay.hi - ay.lo) * i / 5.0;
    const double y = ay.map(v, kH - kBottom, kTop);
    o << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << y << "\" y2=\"" << y
      << "\" stroke=\"#444\"/>\n<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
}

}  // namespace

BoxStats box_stats(const std::string& label, std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }),
               values.end());
  BoxStats b;
  b.label = label;
  b.count = values.size();
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double f = pos - static_cast<double>(i);
    return i + 1 < values.size() ? values[i] * (1 - f) + values[i + 1] * f : values[i];
  };
  b.min = values.front();
  b.q1 = q(0.25);
  b.median = q(0.5);
  b.q3 = q(0.75);
  b.max = values.back();
  return b;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log2_x) {
  auto tx = [&](double v) { return log2_x ? std::log2(v) : v; };
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, tx(s.x[i]));
      xhi = std::max(xhi, tx(s.x[i]));
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const Axis ax = padded(xlo, xhi), ay = padded(ylo, yhi);
  std::ostringstream o;
  o << frame_open(title, x_label, y_label);
  y_ticks(o, ay);
  std::vector<double> xt;
  for (const auto& s : series)
    for (double v : s.x) xt.push_back(tx(v));
  std::sort(xt.begin(), xt.end());
  xt.erase(std::unique(xt.begin(), xt.end()), xt.end());
  for (double v : xt) {
    const double x = ax.map(v, kLeft, kW - kRight);
    o << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << kH - kBottom << "\" y2=\""
      << kH - kBottom + 4 << "\" stroke=\"#444\"/>\n<text x=\"" << x << "\" y=\"" << kH - kBottom + 18
      << "\" text-anchor=\"middle\">" << (log2_x ? "2^" + num(v) : num(v)) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = kPalette[k % 8];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.y[i])) pts.emplace_back(tx(s.x[i]), s.y[i]);
    std::sort(pts.begin(), pts.end());
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts)
      o << ax.map(x, kLeft, kW - kRight) << ',' << ay.map(y, kH - kBottom, kTop) << ' ';
    o << "\"/>\n";
    for (const auto& [x, y] : pts)
      o << "<circle cx=\"" << ax.map(x, kLeft, kW - kRight) << "\" cy=\""
        << ay.map(y, kH - kBottom, kTop) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << kW - kRight + 12 << "\" x2=\"" << kW - kRight + 32 << "\" y1=\"" << ly - 4
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n<text x=\""
      << kW - kRight + 38 << "\" y=\"" << ly << "\">" << esc(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string box_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BoxStats>& boxes) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& b : boxes)
    if (b.count) {
      lo = std::min(lo, b.min);
      hi = std::max(hi, b.max);
    }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  const Axis ay = padded(lo, hi);
  std::ostringstream o;
  o << frame_open(title, "", y_label);
  y_ticks(o, ay);
  const double slot = (kW - kLeft - kRight) / std::max<std::size_t>(1, boxes.size());
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const auto& b = boxes[k];
    const double cx = kLeft + slot * (static_cast<double>(k) + 0.5), half = slot * 0.25;
    const char* col = kPalette[k % 8];
    o << "<text x=\"" << cx << "\" y=\"" << kH - kBottom + 18 << "\" text-anchor=\"middle\">"
      << esc(b.label) << "</text>\n";
    if (!b.count) continue;
    auto Y = [&](double v) { return ay.map(v, kH - kBottom, kTop); };
    o << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << Y(b.min) << "\" y2=\"" << Y(b.max)
      << "\" stroke=\"#444\"/>\n"
      << "<rect x=\"" << cx - half << "\" y=\"" << Y(b.q3) << "\" width=\"" << 2 * half
      << "\" height=\"" << std::max(0.5, Y(b.q1) - Y(b.q3)) << "\" fill=\"" << col
      << "\" fill-opacity=\"0.35\" stroke=\"" << col << "\"/>\n"
      << "<line x1=\"" << cx - half << "\" x2=\"" << cx + half << "\" y1=\"" << Y(b.median)
      << "\" y2=\"" << Y(b.median) << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

RunData load_run(const std::string& dir) {
  const std::filesystem::path d(dir);
  std::ifstream k(d / "kpis.csv");
  if (!k) throw std::runtime_error("missing kpis.csv in " + dir);
  RunData r;
  r.records = harness::read_kpis_csv(k);
  std::ifstream m(d / "manifest.json");
  if (!m) throw std::runtime_error("missing manifest.json in " + dir);
  const auto j = nlohmann::json::parse(m);
  r.frame_s = j.value("frame_s", 0.0);
  r.pilot_len = j.value("pilot_len", 0);
  return r;
}

std::vector<std::string> emit_standard_plots(const std::vector<RunData>& runs,
                                             const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  // Per (framework/csi) label: mean values keyed by pilot length and T_F.
  struct Acc {
    double sum{0.0};
    int n{0};
    void add(double v) {
      if (std::isfinite(v)) sum += v, ++n;
    }
    double mean() const { return n ? sum / n : std::numeric_limits<double>::quiet_NaN(); }
  };
  std::map<std::string, std::map<double, Acc>> thr_lp, nmse_lp, thr_tf;
  std::map<std::string, std::vector<double>> jain;
  for (const auto& run : runs)
    for (const auto& r : run.records) {
      const std::string label = r.framework + "/" + r.csi;
      thr_lp[label][r.pilot_len].add(r.throughput_bps * 1e-3);
      nmse_lp[label][r.pilot_len].add(r.nmse_gamma);
      thr_tf[label][run.frame_s].add(r.throughput_bps * 1e-3);
      jain[label].push_back(r.jain);
    }
  auto to_series = [](const std::map<std::string, std::map<double, Acc>>& m) {
    std::vector<Series> out;
    for (const auto& [label, pts] : m) {
      Series s;
      s.label = label;
      for (const auto& [x, acc] : pts) {
        s.x.push_back(x);
        s.y.push_back(acc.mean());
      }
      out.push_back(s);
    }
    return out;
  };
  std::vector<BoxStats> boxes;
  for (const auto& [label, v] : jain) boxes.push_back(box_stats(label, v));

  const std::filesystem::path d(out_dir);
  std::vector<std::pair<std::string, std::string>> files = {
      {"throughput_vs_pilot_len.svg",
       line_chart_svg("Mean throughput vs pilot length", "pilot length [symbols]",
                      "throughput [kbit/s]", to_series(thr_lp), true)},
      {"jain_box.svg", box_chart_svg("Per-frame Jain index", "Jain index", boxes)},
      {"nmse_vs_pilot_len.svg", line_chart_svg("SNR estimation NMSE vs pilot length",
                                               "pilot length [symbols]", "NMSE",
                                               to_series(nmse_lp), true)},
      {"throughput_vs_frame_len.svg",
       line_chart_svg("Mean throughput vs frame length", "T_F [s]", "throughput [kbit/s]",
                      to_series(thr_tf), false)}};
  std::vector<std::string> written;
  for (const auto& [name, body] : files) {
    std::ofstream f(d / name, std::ios::binary);
    f << body;
    written.push_back((d / name).string());
  }
  return written;
}

}  // namespace leo::plot
