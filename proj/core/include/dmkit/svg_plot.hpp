#ifndef DMKIT_SVG_PLOT_HPP
#define DMKIT_SVG_PLOT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmkit/dataset.hpp"

namespace dmkit::viz {

/// Points are colored either by a nominal attribute or by a cluster index
/// per instance; exactly one of the two must be set.
struct PlotSpec {
  std::size_t x_attr = 0;
  std::size_t y_attr = 0;
  std::optional<std::size_t> color_attr;
  std::optional<std::vector<std::size_t>> assignment;
  std::uint64_t jitter_seed = 7;
  int width = 640;
  int height = 480;
  double radius = 3.0;
  double opacity = 0.6;
  std::vector<std::string> palette = default_palette();
  std::string title;

  static std::vector<std::string> default_palette();
};

/// Half-width of the jitter box, as a fraction of one category band.
inline constexpr double kJitterFraction = 0.35;

/// Plot-area placement of the category bands for a given spec.
struct PlotGeometry {
  double left = 0, right = 0, top = 0, bottom = 0;  // plot area in pixels
  std::size_t x_bands = 0, y_bands = 0;

  /// Pixel interval [lo, hi] covered by x category `i` (y category `j`,
  /// counted upward from the bottom).
  std::pair<double, double> x_band(std::size_t i) const;
  std::pair<double, double> y_band(std::size_t j) const;
};

PlotGeometry plot_geometry(const Dataset& d, const PlotSpec& spec);

/// Jittered scatter of two nominal attributes as a standalone SVG 1.1 document.
/// One <circle> per instance; the same inputs always give the same bytes.
std::string jitter_scatter(const Dataset& d, const PlotSpec& spec);

}  // namespace dmkit::viz

#endif
