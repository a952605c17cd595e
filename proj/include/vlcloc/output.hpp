#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vlcloc/quadrant_buffer.hpp"
#include "vlcloc/sim.hpp"
#include "vlcloc/sweep.hpp"

namespace vlcloc {

/// Shortest round-trip-safe text for CSV cells ("%.9g"; nan/inf spelled out).
std::string format_number(double v);

void write_trace_csv(std::ostream& out, const RunResult& result);
void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);

struct CrlbMapRow {
  double x = 0.0;
  double y = 0.0;
  double sigma_used = 0.0;  ///< rms AoA sigma over the four channels, radians
  double bound_p1_m = 0.0;
  double bound_p2_m = 0.0;
};
void write_crlb_csv(std::ostream& out, const std::vector<CrlbMapRow>& rows);

struct QrxCurvePoint {
  double theta_deg = 0.0;
  double phi = 0.0;
};
void write_qrx_design_csv(std::ostream& out, const std::vector<QrxCurvePoint>& curve);

/// One row per sample: absolute index w, the four quadrant readings and the remodulated
/// waveform (empty s_hat is written as nan).
void write_buffer_csv(std::ostream& out, const QuadrantBuffer& buffer,
                      const std::vector<double>& s_hat);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  ///< NaN breaks the line
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string config_hash;
};

std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                          bool log_y = false);

struct GridValue {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;  ///< NaN cells are left uncoloured
};

/// Cells on a regular grid, coloured on a log10 scale between the finite extremes.
std::string svg_heatmap(const std::vector<GridValue>& cells, const PlotLabels& labels);

}  // namespace vlcloc
