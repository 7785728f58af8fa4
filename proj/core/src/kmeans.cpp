#include "dmkit/kmeans.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "dmkit/csv.hpp"
#include "dmkit/errors.hpp"
#include "dmkit/random.hpp"

namespace dmkit::cluster {

void ClusterParams::validate() const {
  if (k < 1) throw usage_error("cluster count must be at least 1");
  if (max_iterations < 1) throw usage_error("max iterations must be at least 1");
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(centroids.size(), 0);
  for (auto c : assignment) ++sizes.at(c);
  return sizes;
}

Dataset impute_modes(const Dataset& d) {
  std::vector<CellValue> fill(d.num_attributes());
  std::vector<bool> needed(d.num_attributes(), false);
  for (const Row& row : d.rows()) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a].is_missing()) needed[a] = true;
    }
  }
  bool any = false;
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    if (!needed[a]) continue;
    fill[a] = column_mode(d, a);
    any = true;
  }
  if (!any) return d;

  std::vector<Row> rows = d.rows();
  for (Row& row : rows) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a].is_missing()) row[a] = fill[a];
    }
  }
  return d.with_rows(std::move(rows));
}

std::size_t mismatches(const Row& a, const Row& b) {
  if (a.size() != b.size()) throw usage_error("rows have different attribute counts");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_missing() || b[i].is_missing()) {
      throw usage_error("distance undefined for missing values");
    }
    if (!(a[i] == b[i])) ++n;
  }
  return n;
}

double nominal_distance(const Row& a, const Row& b) {
  return std::sqrt(static_cast<double>(mismatches(a, b)));
}

namespace {

using Codes = std::vector<std::size_t>;

class KModes {
 public:
  KModes(const Dataset& d, const ClusterParams& p) : d_(d), p_(p) {
    for (std::size_t a = 0; a < d.num_attributes(); ++a) {
      if (!d.attribute(a).is_nominal()) {
        throw usage_error("attribute '" + d.attribute(a).name() +
                          "' is numeric; clustering supports nominal attributes only");
      }
    }
    codes_.reserve(d.num_instances());
    for (const Row& row : d.rows()) {
      Codes c;
      c.reserve(row.size());
      for (const auto& v : row) c.push_back(v.index());
      codes_.push_back(std::move(c));
    }
  }

  ClusterModel run() {
    initialize();
    const std::size_t n = codes_.size();
    std::vector<std::size_t> assignment(n, 0);
    ClusterModel m;

    bool first = true;
    while (true) {
      ++m.iterations;
      bool changed = first;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = nearest(codes_[i]);
        if (best != assignment[i]) changed = true;
        assignment[i] = best;
      }
      first = false;
      if (reseed_empty(assignment)) changed = true;
      update_modes(assignment);

      double sse = 0;
      for (std::size_t i = 0; i < n; ++i) sse += distance(codes_[i], centroids_[assignment[i]]);
      m.sse_history.push_back(sse);
      m.sse = sse;

      if (!changed || m.iterations >= p_.max_iterations) break;
    }

    m.assignment = std::move(assignment);
    for (const auto& c : centroids_) {
      Row row;
      for (auto v : c) row.push_back(CellValue::nominal(v));
      m.centroids.push_back(std::move(row));
    }
    return m;
  }

 private:
  static double distance(const Codes& a, const Codes& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return static_cast<double>(n);
  }

  std::size_t nearest(const Codes& x) const {
    std::size_t best = 0;
    double best_d = distance(x, centroids_[0]);
    for (std::size_t c = 1; c < centroids_.size(); ++c) {
      double dc = distance(x, centroids_[c]);
      if (dc < best_d) {
        best_d = dc;
        best = c;
      }
    }
    return best;
  }

  void initialize() {
    const std::size_t n = codes_.size();
    if (p_.k > n) {
      throw usage_error("cluster count " + std::to_string(p_.k) + " exceeds instance count " +
                        std::to_string(n));
    }
    std::set<Codes> distinct(codes_.begin(), codes_.end());
    if (p_.k > distinct.size()) {
      throw data_error("cannot pick " + std::to_string(p_.k) + " distinct initial centroids from " +
                       std::to_string(distinct.size()) + " distinct instances");
    }

    Rng rng(p_.seed);
    std::set<Codes> chosen;
    const std::size_t max_draws = 1000 * (n + p_.k);
    std::size_t draws = 0;
    while (centroids_.size() < p_.k) {
      if (++draws > max_draws) throw data_error("centroid initialization did not converge");
      const Codes& pick = codes_[rng.below(n)];
      if (!chosen.insert(pick).second) continue;
      centroids_.push_back(pick);
    }
  }

  /// Gives every empty cluster the instance farthest from its current
  /// centroid, taken from clusters that still have two or more members.
  bool reseed_empty(std::vector<std::size_t>& assignment) {
    const std::size_t k = centroids_.size();
    std::vector<std::size_t> sizes(k, 0);
    for (auto c : assignment) ++sizes[c];

    bool reseeded = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = assignment.size();
      double far_d = -1;
      for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (sizes[assignment[i]] < 2) continue;
        double di = distance(codes_[i], centroids_[assignment[i]]);
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      if (far == assignment.size()) break;
      --sizes[assignment[far]];
      assignment[far] = c;
      sizes[c] = 1;
      reseeded = true;
    }
    return reseeded;
  }

  void update_modes(const std::vector<std::size_t>& assignment) {
    const std::size_t k = centroids_.size();
    const std::size_t attrs = d_.num_attributes();
    for (std::size_t a = 0; a < attrs; ++a) {
      const std::size_t values = d_.attribute(a).num_values();
      std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(values, 0));
      for (std::size_t i = 0; i < codes_.size(); ++i) ++counts[assignment[i]][codes_[i][a]];
      for (std::size_t c = 0; c < k; ++c) {
        const auto& cc = counts[c];
        auto best = std::max_element(cc.begin(), cc.end());
        if (*best == 0) continue;  // empty cluster keeps its centroid
        centroids_[c][a] = static_cast<std::size_t>(best - cc.begin());
      }
    }
  }

  const Dataset& d_;
  const ClusterParams& p_;
  std::vector<Codes> codes_;
  std::vector<Codes> centroids_;
};

}  // namespace

ClusterModel kmeans(const Dataset& d, const ClusterParams& p) {
  p.validate();
  if (d.empty()) throw usage_error("cannot cluster an empty dataset");
  const Dataset filled = impute_modes(d);
  return KModes(filled, p).run();
}

double compute_sse(const Dataset& d, const ClusterModel& m) {
  const Dataset filled = impute_modes(d);
  double sse = 0;
  for (std::size_t i = 0; i < filled.num_instances(); ++i) {
    sse += static_cast<double>(mismatches(filled.row(i), m.centroids.at(m.assignment.at(i))));
  }
  return sse;
}

namespace {

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_cluster_report(const ClusterModel& m, const Dataset& d, const ClusterParams& p) {
  const Dataset filled = impute_modes(d);
  const std::size_t n = filled.num_instances();
  const auto sizes = m.cluster_sizes();

  std::ostringstream os;
  os << "=== Run information ===\n\n";
  os << "Scheme:       dmkit.kmeans -N " << p.k << " -I " << p.max_iterations << " -S " << p.seed
     << '\n';
  os << "Relation:     " << d.relation_name() << '\n';
  os << "Instances:    " << n << '\n';
  os << "Attributes:   " << d.num_attributes() << '\n';
  for (const auto& a : d.attributes()) os << "              " << a.name() << '\n';
  os << "Test mode:    evaluate on training data\n\n";

  os << "=== Model and evaluation on training set ===\n\n";
  os << "kMeans\n======\n\n";
  os << "Number of iterations: " << m.iterations << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", m.sse);
  os << "Within cluster sum of squared errors: " << buf << '\n';
  os << "Missing values globally replaced with mean/mode\n\n";

  // centroid table: attribute | Full Data | cluster 0 | cluster 1 ...
  std::vector<std::vector<std::string>> cols;
  std::vector<std::string> full{"Full Data", "(" + std::to_string(n) + ")"};
  for (std::size_t a = 0; a < filled.num_attributes(); ++a) {
    full.push_back(filled.attribute(a).values()[column_mode(filled, a).index()]);
  }
  cols.push_back(std::move(full));
  for (std::size_t c = 0; c < m.centroids.size(); ++c) {
    std::vector<std::string> col{std::to_string(c), "(" + std::to_string(sizes[c]) + ")"};
    for (std::size_t a = 0; a < filled.num_attributes(); ++a) {
      col.push_back(filled.attribute(a).values()[m.centroids[c][a].index()]);
    }
    cols.push_back(std::move(col));
  }

  std::size_t name_w = std::string("Attribute").size();
  for (const auto& a : filled.attributes()) name_w = std::max(name_w, a.name().size());
  name_w += 2;
  std::vector<std::size_t> widths;
  for (const auto& col : cols) {
    std::size_t w = 0;
    for (const auto& s : col) w = std::max(w, s.size());
    widths.push_back(w + 3);
  }
  std::size_t line_w = name_w;
  for (auto w : widths) line_w += w;

  os << "Cluster centroids:\n";
  os << pad_right("", name_w) << pad_left("", widths[0]);
  std::string clusters_label = "Cluster#";
  std::size_t rest_w = 0;
  for (std::size_t c = 1; c < widths.size(); ++c) rest_w += widths[c];
  os << pad_left(clusters_label, std::max(rest_w, clusters_label.size())) << '\n';
  for (std::size_t r = 0; r < 2; ++r) {
    os << pad_right(r == 0 ? "Attribute" : "", name_w);
    for (std::size_t c = 0; c < cols.size(); ++c) os << pad_left(cols[c][r], widths[c]);
    os << '\n';
  }
  os << std::string(line_w, '=') << '\n';
  for (std::size_t a = 0; a < filled.num_attributes(); ++a) {
    os << pad_right(filled.attribute(a).name(), name_w);
    for (std::size_t c = 0; c < cols.size(); ++c) os << pad_left(cols[c][a + 2], widths[c]);
    os << '\n';
  }
  os << "\n\n=== Model and evaluation on training set ===\n\n";
  os << "Clustered Instances\n\n";
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const long pct = std::lround(100.0 * static_cast<double>(sizes[c]) / static_cast<double>(n));
    std::snprintf(buf, sizeof buf, "%-6zu %6zu (%3ld%%)", c, sizes[c], pct);
    os << buf << '\n';
  }
  return os.str();
}

std::string write_assignments_csv(const ClusterModel& m) {
  std::string out = "instance,cluster\n";
  for (std::size_t i = 0; i < m.assignment.size(); ++i) {
    out += std::to_string(i) + ',' + std::to_string(m.assignment[i]) + '\n';
  }
  return out;
}

std::vector<std::size_t> read_assignments_csv(std::string_view text, std::size_t num_instances) {
  const RawTable t = parse_csv(text);
  const std::size_t ci = t.column("instance");
  const std::size_t cc = t.column("cluster");
  if (ci == std::string_view::npos || cc == std::string_view::npos) {
    throw format_error("assignment file needs 'instance' and 'cluster' columns");
  }
  auto number = [](const std::string& s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw data_error("assignment line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
  };

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> out(num_instances, unset);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t line = r + 2;
    const std::size_t inst = number(t.rows[r][ci], line);
    if (inst >= num_instances) {
      throw data_error("assignment line " + std::to_string(line) + ": instance " +
                       std::to_string(inst) + " out of range");
    }
    if (out[inst] != unset) {
      throw data_error("assignment line " + std::to_string(line) + ": instance " +
                       std::to_string(inst) + " listed twice");
    }
    out[inst] = number(t.rows[r][cc], line);
  }
  for (std::size_t i = 0; i < num_instances; ++i) {
    if (out[i] == unset) throw data_error("no cluster assigned to instance " + std::to_string(i));
  }
  return out;
}

}  // namespace dmkit::cluster
