#include "dmkit/svg_plot.hpp"

#include <algorithm>
#include <cstdio>

#include "dmkit/errors.hpp"
#include "dmkit/random.hpp"

namespace dmkit::viz {

std::vector<std::string> PlotSpec::default_palette() {
  return {"#1f4fd8", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
}

namespace {

constexpr double kMarginLeft = 110;
constexpr double kMarginRight = 150;
constexpr double kMarginTop = 50;
constexpr double kMarginBottom = 60;

bool has_missing(const Dataset& d, std::size_t attr) {
  return std::any_of(d.rows().begin(), d.rows().end(),
                     [attr](const Row& r) { return r[attr].is_missing(); });
}

/// Category labels of a nominal attribute; a trailing "?" band collects
/// missing cells when there are any.
std::vector<std::string> categories(const Dataset& d, std::size_t attr) {
  std::vector<std::string> out = d.attribute(attr).values();
  if (has_missing(d, attr)) out.push_back("?");
  return out;
}

std::size_t category_of(const Dataset& d, std::size_t row, std::size_t attr) {
  const CellValue& v = d.row(row)[attr];
  return v.is_missing() ? d.attribute(attr).num_values() : v.index();
}

void check_axis(const Dataset& d, std::size_t attr, const char* axis) {
  if (attr >= d.num_attributes()) {
    throw usage_error(std::string(axis) + " attribute index out of range");
  }
  if (!d.attribute(attr).is_nominal()) {
    throw usage_error(std::string(axis) + " attribute '" + d.attribute(attr).name() +
                      "' is not nominal");
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c); break;
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> PlotGeometry::x_band(std::size_t i) const {
  const double w = (right - left) / static_cast<double>(x_bands);
  return {left + w * static_cast<double>(i), left + w * static_cast<double>(i + 1)};
}

std::pair<double, double> PlotGeometry::y_band(std::size_t j) const {
  const double h = (bottom - top) / static_cast<double>(y_bands);
  return {bottom - h * static_cast<double>(j + 1), bottom - h * static_cast<double>(j)};
}

PlotGeometry plot_geometry(const Dataset& d, const PlotSpec& spec) {
  check_axis(d, spec.x_attr, "x");
  check_axis(d, spec.y_attr, "y");
  if (spec.width <= kMarginLeft + kMarginRight + 10 || spec.height <= kMarginTop + kMarginBottom + 10) {
    throw usage_error("plot is too small");
  }
  PlotGeometry g;
  g.left = kMarginLeft;
  g.right = spec.width - kMarginRight;
  g.top = kMarginTop;
  g.bottom = spec.height - kMarginBottom;
  g.x_bands = categories(d, spec.x_attr).size();
  g.y_bands = categories(d, spec.y_attr).size();
  return g;
}

std::string jitter_scatter(const Dataset& d, const PlotSpec& spec) {
  const PlotGeometry g = plot_geometry(d, spec);
  if (spec.color_attr.has_value() == spec.assignment.has_value()) {
    throw usage_error("color by exactly one of an attribute or a cluster assignment");
  }

  std::vector<std::string> color_names;
  std::vector<std::size_t> color_index(d.num_instances());
  std::string legend_title;
  if (spec.color_attr) {
    check_axis(d, *spec.color_attr, "color");
    color_names = categories(d, *spec.color_attr);
    legend_title = d.attribute(*spec.color_attr).name();
    for (std::size_t i = 0; i < d.num_instances(); ++i) {
      color_index[i] = category_of(d, i, *spec.color_attr);
    }
  } else {
    const auto& a = *spec.assignment;
    if (a.size() != d.num_instances()) {
      throw usage_error("assignment has " + std::to_string(a.size()) + " entries for " +
                        std::to_string(d.num_instances()) + " instances");
    }
    std::size_t k = 0;
    for (auto c : a) k = std::max(k, c + 1);
    for (std::size_t c = 0; c < k; ++c) color_names.push_back("cluster" + std::to_string(c));
    legend_title = "Cluster";
    color_index = a;
  }
  if (spec.palette.size() < color_names.size()) {
    throw usage_error("palette has " + std::to_string(spec.palette.size()) + " colors for " +
                      std::to_string(color_names.size()) + " categories");
  }

  const auto& xa = d.attribute(spec.x_attr);
  const auto& ya = d.attribute(spec.y_attr);
  const auto x_labels = categories(d, spec.x_attr);
  const auto y_labels = categories(d, spec.y_attr);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\" font-family=\"sans-serif\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";

  const std::string title =
      spec.title.empty() ? ya.name() + " vs. " + xa.name() : spec.title;
  out += "<text x=\"" + num((g.left + g.right) / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-size=\"16\">" + xml_escape(title) + "</text>\n";

  // band separators and frame
  out += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (std::size_t i = 1; i < g.x_bands; ++i) {
    const double x = g.x_band(i).first;
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(g.top) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(g.bottom) + "\"/>\n";
  }
  for (std::size_t j = 1; j < g.y_bands; ++j) {
    const double y = g.y_band(j).second;
    out += "<line x1=\"" + num(g.left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(g.right) +
           "\" y2=\"" + num(y) + "\"/>\n";
  }
  out += "</g>\n";
  out += "<rect x=\"" + num(g.left) + "\" y=\"" + num(g.top) + "\" width=\"" +
         num(g.right - g.left) + "\" height=\"" + num(g.bottom - g.top) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // ticks
  out += "<g font-size=\"12\" fill=\"#222222\">\n";
  for (std::size_t i = 0; i < x_labels.size(); ++i) {
    auto [lo, hi] = g.x_band(i);
    out += "<text x=\"" + num((lo + hi) / 2) + "\" y=\"" + num(g.bottom + 18) +
           "\" text-anchor=\"middle\">" + xml_escape(x_labels[i]) + "</text>\n";
  }
  for (std::size_t j = 0; j < y_labels.size(); ++j) {
    auto [lo, hi] = g.y_band(j);
    out += "<text x=\"" + num(g.left - 8) + "\" y=\"" + num((lo + hi) / 2 + 4) +
           "\" text-anchor=\"end\">" + xml_escape(y_labels[j]) + "</text>\n";
  }
  out += "</g>\n";
  out += "<text x=\"" + num((g.left + g.right) / 2) + "\" y=\"" + num(g.bottom + 44) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xml_escape(xa.name()) + "</text>\n";
  out += "<text x=\"20\" y=\"" + num((g.top + g.bottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 " +
         num((g.top + g.bottom) / 2) + ")\">" + xml_escape(ya.name()) + "</text>\n";

  // points
  Rng rng(spec.jitter_seed);
  out += "<g stroke=\"none\">\n";
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    auto [x_lo, x_hi] = g.x_band(category_of(d, i, spec.x_attr));
    auto [y_lo, y_hi] = g.y_band(category_of(d, i, spec.y_attr));
    const double dx = rng.uniform(-kJitterFraction, kJitterFraction) * (x_hi - x_lo);
    const double dy = rng.uniform(-kJitterFraction, kJitterFraction) * (y_hi - y_lo);
    out += "<circle cx=\"" + num((x_lo + x_hi) / 2 + dx) + "\" cy=\"" + num((y_lo + y_hi) / 2 + dy) +
           "\" r=\"" + num(spec.radius) + "\" fill=\"" + xml_escape(spec.palette[color_index[i]]) +
           "\" fill-opacity=\"" + num(spec.opacity) + "\"/>\n";
  }
  out += "</g>\n";

  // legend
  const double lx = g.right + 20;
  out += "<g font-size=\"12\">\n";
  out += "<text x=\"" + num(lx) + "\" y=\"" + num(g.top + 4) + "\" font-weight=\"bold\">" +
         xml_escape(legend_title) + "</text>\n";
  for (std::size_t c = 0; c < color_names.size(); ++c) {
    const double y = g.top + 22 + 20 * static_cast<double>(c);
    out += "<rect x=\"" + num(lx) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
           xml_escape(spec.palette[c]) + "\"/>\n";
    out += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(y) + "\">" + xml_escape(color_names[c]) +
           "</text>\n";
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace dmkit::viz
