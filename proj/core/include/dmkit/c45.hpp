#ifndef DMKIT_C45_HPP
#define DMKIT_C45_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmkit/dataset.hpp"

namespace dmkit::c45 {

struct TreeParams {
  double confidence_factor = 0.25;  // pruning confidence, (0, 0.5]
  double min_instances = 2;         // minimum weight per admissible branch
  bool pruning_enabled = true;
  bool subtree_raising = false;

  /// Throws usage_error on out-of-range values.
  void validate() const;
};

/// A leaf when `attribute` is empty; otherwise a multiway split with one
/// child per declared value of the split attribute, in declaration order.
struct TreeNode {
  std::vector<double> distribution;  // class weights of the training rows reaching this node
  std::optional<std::size_t> attribute;
  std::vector<TreeNode> children;
  std::size_t predicted_class = 0;

  bool is_leaf() const { return !attribute.has_value(); }
  double total_weight() const;
  double error_weight() const;

  bool operator==(const TreeNode&) const = default;
};

/// Shannon entropy in bits; 0 for an all-zero vector.
double entropy(std::span<const double> class_weights);

struct SplitScore {
  double info_gain = 0;
  double gain_ratio = 0;  // 0 when split_info is 0
  double split_info = 0;
};

/// Score of a split given per-branch class weights (branch x class).
SplitScore gain_and_ratio(const std::vector<std::vector<double>>& branch_class_weights);

/// Score of splitting `rows` of `d` on nominal attribute `attr` by the target.
SplitScore gain_and_ratio(const Dataset& d, std::span<const std::size_t> rows, std::size_t attr);

/// Extra errors U so that (e + U) / n is the upper `cf` confidence bound of
/// the binomial error rate (continuity-corrected normal approximation for
/// e >= 1, exact for e = 0, linear in between).
double upper_error_estimate(double n, double e, double cf);

/// e + upper_error_estimate(n, e, cf) for a leaf holding `class_weights`
/// and predicting its majority class; 0 for an empty leaf.
double estimated_leaf_errors(std::span<const double> class_weights, double cf);

/// Sum of estimated_leaf_errors over the leaves of `node`.
double estimated_tree_errors(const TreeNode& node, double cf);

/// Index of the largest weight; ties go to the lowest index.
std::size_t majority(std::span<const double> weights);

/// Grows (and, if enabled, prunes) a tree predicting d's target from every
/// other attribute. All predictors must be nominal.
TreeNode build_tree(const Dataset& d, const TreeParams& params);

struct Prediction {
  std::size_t class_index = 0;
  std::vector<double> distribution;  // sums to 1
};

/// Walks `row` down the tree. Missing split values follow the heaviest branch;
/// an empty leaf answers with its parent's distribution.
Prediction predict(const TreeNode& tree, const Row& row);

std::size_t count_leaves(const TreeNode& tree);
std::size_t tree_size(const TreeNode& tree);

/// Weka-style tree listing, followed by the leaf count and size footer.
std::string print_tree(const TreeNode& tree, const Dataset& schema);

}  // namespace dmkit::c45

#endif
