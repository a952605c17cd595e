#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vlcloc {

/// One estimation cycle of sampled TIA voltages, per quadrant (A, B, C, D).
struct QuadrantBuffer {
  std::array<std::vector<double>, 4> readings;
  std::int64_t start_index = 0;  ///< w_0
  double sample_period = 0.0;    ///< T_s

  QuadrantBuffer() = default;
  QuadrantBuffer(std::size_t length, std::int64_t w0, double ts) : start_index(w0), sample_period(ts) {
    for (auto& r : readings) r.assign(length, 0.0);
  }

  std::size_t size() const { return readings[0].size(); }
  /// Buffer mid-point time T_s * (w_0 + h_buf / 2).
  double midpoint_time() const {
    return sample_period * (static_cast<double>(start_index) + 0.5 * static_cast<double>(size()));
  }
  /// Sum over the four quadrants, i.e. the plain photodiode signal.
  std::vector<double> total() const {
    std::vector<double> out(size(), 0.0);
    for (const auto& r : readings)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
    return out;
  }
};

}  // namespace vlcloc
