#pragma once

#include <string>
#include <vector>

#include "leo/harness.hpp"

namespace leo::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct BoxStats {
  std::string label;
  double min{0.0}, q1{0.0}, median{0.0}, q3{0.0}, max{0.0};
  std::size_t count{0};
};

/// Five-number summary with linear interpolation between order statistics.
BoxStats box_stats(const std::string& label, std::vector<double> values);

/// Standalone SVG line chart; `log2_x` places ticks at powers of two.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log2_x);

std::string box_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BoxStats>& boxes);

/// One finished run: its KPI rows plus the run parameters read back from
/// its manifest.
struct RunData {
  std::vector<harness::KpiRecord> records;
  double frame_s{0.0};
  int pilot_len{0};
};

RunData load_run(const std::string& dir);

/// Writes throughput_vs_pilot_len.svg, jain_box.svg, nmse_vs_pilot_len.svg
/// and throughput_vs_frame_len.svg into `out_dir`. Returns the paths written.
std::vector<std::string> emit_standard_plots(const std::vector<RunData>& runs,
                                             const std::string& out_dir);

}  // namespace leo::plot
