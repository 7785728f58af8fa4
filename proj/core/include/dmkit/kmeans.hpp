#ifndef DMKIT_KMEANS_HPP
#define DMKIT_KMEANS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dmkit/dataset.hpp"

namespace dmkit::cluster {

struct ClusterParams {
  std::size_t k = 2;
  std::uint64_t seed = 10;
  std::size_t max_iterations = 500;

  void validate() const;
};

struct ClusterModel {
  std::vector<Row> centroids;           // per-attribute modes, one row per cluster
  std::vector<std::size_t> assignment;  // cluster per instance
  double sse = 0;
  std::size_t iterations = 0;           // assignment passes executed
  std::vector<double> sse_history;      // objective after each pass

  std::vector<std::size_t> cluster_sizes() const;
};

/// Replaces missing cells with the column mode (nominal) or mean (numeric).
Dataset impute_modes(const Dataset& d);

/// Euclidean distance under the 0/1 per-attribute metric; its square is the
/// number of attributes on which the rows disagree. Rows must have equal
/// length and no missing cells.
double nominal_distance(const Row& a, const Row& b);

/// Squared nominal_distance.
std::size_t mismatches(const Row& a, const Row& b);

/// k-modes style clustering over all attributes of `d` (missing cells are
/// imputed first). Initial centroids are k instances with distinct value
/// tuples drawn with Rng(seed). Passes alternate nearest-centroid assignment
/// (ties to the lowest cluster) and per-attribute mode updates (ties to the
/// lowest value index) until an assignment pass changes nothing or
/// max_iterations passes ran. A cluster that empties takes over the instance
/// farthest from its own centroid.
ClusterModel kmeans(const Dataset& d, const ClusterParams& p);

/// Sum over instances of squared distance to the assigned centroid.
double compute_sse(const Dataset& d, const ClusterModel& m);

std::string format_cluster_report(const ClusterModel& m, const Dataset& d, const ClusterParams& p);

/// "instance,cluster" CSV with 0-based indices.
std::string write_assignments_csv(const ClusterModel& m);

/// Reads write_assignments_csv output; every instance 0..n-1 must appear once.
std::vector<std::size_t> read_assignments_csv(std::string_view text, std::size_t num_instances);

}  // namespace dmkit::cluster

#endif
