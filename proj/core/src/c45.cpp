#include "dmkit/c45.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "dmkit/errors.hpp"

namespace dmkit::c45 {

void TreeParams::validate() const {
  if (!(confidence_factor > 0 && confidence_factor <= 0.5)) {
    throw usage_error("confidence factor must be in (0, 0.5]");
  }
  if (!(min_instances >= 1)) throw usage_error("minimum instances per leaf must be >= 1");
}

double TreeNode::total_weight() const {
  return std::accumulate(distribution.begin(), distribution.end(), 0.0);
}

double TreeNode::error_weight() const {
  if (distribution.empty()) return 0;
  return total_weight() - distribution[predicted_class];
}

std::size_t majority(std::span<const double> weights) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > weights[best]) best = i;
  }
  return best;
}

double entropy(std::span<const double> class_weights) {
  double total = 0;
  for (double w : class_weights) total += w;
  if (total <= 0) return 0;
  double h = 0;
  for (double w : class_weights) {
    if (w <= 0) continue;
    double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

SplitScore gain_and_ratio(const std::vector<std::vector<double>>& branches) {
  std::size_t num_classes = 0;
  for (const auto& b : branches) num_classes = std::max(num_classes, b.size());

  std::vector<double> parent(num_classes, 0.0);
  std::vector<double> sizes;
  double total = 0;
  for (const auto& b : branches) {
    double size = 0;
    for (std::size_t c = 0; c < b.size(); ++c) {
      parent[c] += b[c];
      size += b[c];
    }
    sizes.push_back(size);
    total += size;
  }

  SplitScore s;
  if (total <= 0) return s;
  double children = 0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (sizes[i] > 0) children += sizes[i] / total * entropy(branches[i]);
  }
  s.info_gain = std::max(0.0, entropy(parent) - children);
  s.split_info = entropy(sizes);
  s.gain_ratio = s.split_info > 0 ? s.info_gain / s.split_info : 0.0;
  return s;
}

namespace {

std::vector<std::vector<double>> branch_counts(const Dataset& d, std::span<const std::size_t> rows,
                                               std::size_t attr) {
  const std::size_t target = d.target();
  std::vector<std::vector<double>> counts(d.attribute(attr).num_values(),
                                          std::vector<double>(d.num_classes(), 0.0));
  for (auto r : rows) {
    const CellValue& v = d.row(r)[attr];
    if (v.is_missing()) continue;
    counts[v.index()][d.row(r)[target].index()] += 1.0;
  }
  return counts;
}

}  // namespace

SplitScore gain_and_ratio(const Dataset& d, std::span<const std::size_t> rows, std::size_t attr) {
  if (!d.attribute(attr).is_nominal()) throw usage_error("split attribute must be nominal");
  return gain_and_ratio(branch_counts(d, rows, attr));
}

double upper_error_estimate(double n, double e, double cf) {
  if (!(cf > 0 && cf <= 0.5)) throw usage_error("confidence factor must be in (0, 0.5]");
  if (!(n > 0)) throw usage_error("upper_error_estimate needs a positive weight");

  if (e < 1) {
    double base = n * (1 - std::pow(cf, 1 / n));
    if (e == 0) return base;
    return base + e * (upper_error_estimate(n, 1, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);

  static thread_local double cached_cf = -1;
  static thread_local double cached_z = 0;
  if (cf != cached_cf) {
    cached_z = boost::math::quantile(boost::math::normal(), 1 - cf);
    cached_cf = cf;
  }
  const double z = cached_z;
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) /
                   (1 + z * z / n);
  return r * n - e;
}

double estimated_leaf_errors(std::span<const double> class_weights, double cf) {
  double total = 0;
  for (double w : class_weights) total += w;
  if (total <= 0) return 0;
  double errors = total - class_weights[majority(class_weights)];
  return errors + upper_error_estimate(total, errors, cf);
}

double estimated_tree_errors(const TreeNode& node, double cf) {
  if (node.is_leaf()) return estimated_leaf_errors(node.distribution, cf);
  double sum = 0;
  for (const auto& child : node.children) sum += estimated_tree_errors(child, cf);
  return sum;
}

namespace {

constexpr double kGainTolerance = 1e-12;

class Builder {
 public:
  Builder(const Dataset& d, const TreeParams& p) : d_(d), p_(p), used_(d.num_attributes(), false) {
    used_[d.target()] = true;
  }

  TreeNode grow(const std::vector<std::size_t>& rows, std::size_t fallback_class) {
    TreeNode node;
    node.distribution = class_weights(rows);
    const double total = node.total_weight();
    node.predicted_class = total > 0 ? majority(node.distribution) : fallback_class;

    if (total <= 0) return node;
    const bool pure = node.distribution[node.predicted_class] >= total;
    if (pure || total < 2 * p_.min_instances) return node;

    auto best = choose_split(rows);
    if (!best) return node;

    node.attribute = *best;
    const auto& spec = d_.attribute(*best);
    std::vector<std::vector<std::size_t>> parts(spec.num_values());
    for (auto r : rows) {
      const CellValue& v = d_.row(r)[*best];
      // no training-time fractional instances: rows missing the split value stop here
      if (!v.is_missing()) parts[v.index()].push_back(r);
    }
    used_[*best] = true;
    for (auto& part : parts) node.children.push_back(grow(part, node.predicted_class));
    used_[*best] = false;
    return node;
  }

  std::vector<double> class_weights(std::span<const std::size_t> rows) const {
    std::vector<double> w(d_.num_classes(), 0.0);
    for (auto r : rows) w[d_.class_of(r)] += 1.0;
    return w;
  }

 private:
  bool admissible(const std::vector<std::vector<double>>& counts) const {
    int heavy = 0;
    for (const auto& b : counts) {
      double size = std::accumulate(b.begin(), b.end(), 0.0);
      if (size >= p_.min_instances) ++heavy;
    }
    return heavy >= 2;
  }

  std::optional<std::size_t> choose_split(const std::vector<std::size_t>& rows) const {
    struct Candidate {
      std::size_t attr;
      SplitScore score;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < d_.num_attributes(); ++a) {
      if (used_[a]) continue;
      auto counts = branch_counts(d_, rows, a);
      if (!admissible(counts)) continue;
      SplitScore s = gain_and_ratio(counts);
      if (s.info_gain > kGainTolerance) candidates.push_back({a, s});
    }
    if (candidates.empty()) return std::nullopt;

    double mean_gain = 0;
    for (const auto& c : candidates) mean_gain += c.score.info_gain;
    mean_gain /= static_cast<double>(candidates.size());

    std::optional<std::size_t> best;
    double best_ratio = -1;
    for (const auto& c : candidates) {
      if (c.score.info_gain + kGainTolerance < mean_gain) continue;
      if (c.score.gain_ratio > best_ratio) {
        best_ratio = c.score.gain_ratio;
        best = c.attr;
      }
    }
    return best;
  }

  const Dataset& d_;
  const TreeParams& p_;
  std::vector<bool> used_;
};

class Pruner {
 public:
  Pruner(const Dataset& d, const TreeParams& p, const Builder& b) : d_(d), p_(p), builder_(b) {}

  void prune(TreeNode& node, const std::vector<std::size_t>& rows) {
    if (node.is_leaf()) return;

    auto parts = split_rows(node, rows);
    for (std::size_t i = 0; i < node.children.size(); ++i) prune(node.children[i], parts[i]);

    const double cf = p_.confidence_factor;
    const double leaf_errors = estimated_leaf_errors(node.distribution, cf);
    const double tree_errors = estimated_tree_errors(node, cf);

    double largest_branch_errors = std::numeric_limits<double>::max();
    std::size_t largest = 0;
    if (p_.subtree_raising) {
      std::vector<double> sizes;
      for (const auto& c : node.children) sizes.push_back(c.total_weight());
      largest = majority(sizes);
      largest_branch_errors = branch_errors(node.children[largest], rows);
    }

    if (leaf_errors <= tree_errors + 0.1 && leaf_errors <= largest_branch_errors + 0.1) {
      make_leaf(node);
      return;
    }
    if (p_.subtree_raising && largest_branch_errors <= tree_errors + 0.1) {
      TreeNode raised = std::move(node.children[largest]);
      node = std::move(raised);
      redistribute(node, rows, node.predicted_class);
      prune(node, rows);
    }
  }

 private:
  static void make_leaf(TreeNode& node) {
    node.attribute.reset();
    node.children.clear();
    if (node.total_weight() > 0) node.predicted_class = majority(node.distribution);
  }

  std::vector<std::vector<std::size_t>> split_rows(const TreeNode& node,
                                                   const std::vector<std::size_t>& rows) const {
    std::vector<std::vector<std::size_t>> parts(node.children.size());
    for (auto r : rows) {
      const CellValue& v = d_.row(r)[*node.attribute];
      if (!v.is_missing()) parts[v.index()].push_back(r);
    }
    return parts;
  }

  /// Estimated errors if `rows` were classified by `node`'s subtree.
  double branch_errors(const TreeNode& node, const std::vector<std::size_t>& rows) const {
    if (node.is_leaf()) return estimated_leaf_errors(builder_.class_weights(rows), p_.confidence_factor);
    auto parts = split_rows(node, rows);
    double sum = 0;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      sum += branch_errors(node.children[i], parts[i]);
    }
    return sum;
  }

  void redistribute(TreeNode& node, const std::vector<std::size_t>& rows, std::size_t fallback) {
    node.distribution = builder_.class_weights(rows);
    node.predicted_class = node.total_weight() > 0 ? majority(node.distribution) : fallback;
    if (node.is_leaf()) return;
    auto parts = split_rows(node, rows);
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      redistribute(node.children[i], parts[i], node.predicted_class);
    }
  }

  const Dataset& d_;
  const TreeParams& p_;
  const Builder& builder_;
};

}  // namespace

TreeNode build_tree(const Dataset& d, const TreeParams& params) {
  params.validate();
  const std::size_t target = d.target();
  if (d.empty()) throw usage_error("cannot build a tree from an empty dataset");
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    if (a != target && !d.attribute(a).is_nominal()) {
      throw usage_error("attribute '" + d.attribute(a).name() +
                        "' is numeric; only nominal predictors are supported");
    }
  }

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < d.num_instances(); ++r) {
    if (d.row(r)[target].is_missing()) continue;
    rows.push_back(r);
  }
  if (rows.empty()) throw usage_error("every instance is missing its class value");

  Builder builder(d, params);
  TreeNode root = builder.grow(rows, 0);
  if (params.pruning_enabled) {
    Pruner pruner(d, params, builder);
    pruner.prune(root, rows);
  }
  return root;
}

Prediction predict(const TreeNode& tree, const Row& row) {
  const TreeNode* node = &tree;
  const TreeNode* parent = nullptr;
  while (!node->is_leaf()) {
    const CellValue& v = row.at(*node->attribute);
    std::size_t branch;
    if (v.is_missing()) {
      std::vector<double> sizes;
      for (const auto& c : node->children) sizes.push_back(c.total_weight());
      branch = majority(sizes);
    } else {
      branch = v.index();
    }
    parent = node;
    node = &node->children.at(branch);
  }

  const TreeNode* source = node;
  if (node->total_weight() <= 0 && parent) source = parent;

  Prediction p;
  p.class_index = node->predicted_class;
  p.distribution = source->distribution;
  double total = source->total_weight();
  if (total > 0) {
    for (auto& w : p.distribution) w /= total;
  } else {
    std::fill(p.distribution.begin(), p.distribution.end(), 0.0);
    p.distribution[p.class_index] = 1.0;
  }
  return p;
}

std::size_t count_leaves(const TreeNode& tree) {
  if (tree.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : tree.children) n += count_leaves(c);
  return n;
}

std::size_t tree_size(const TreeNode& tree) {
  std::size_t n = 1;
  for (const auto& c : tree.children) n += tree_size(c);
  return n;
}

namespace {

std::string leaf_label(const TreeNode& leaf, const Dataset& schema) {
  char buf[96];
  const std::string& cls = schema.attribute(schema.target()).values()[leaf.predicted_class];
  const double errors = leaf.error_weight();
  if (errors > 0) {
    std::snprintf(buf, sizeof buf, " (%.1f/%.1f)", leaf.total_weight(), errors);
  } else {
    std::snprintf(buf, sizeof buf, " (%.1f)", leaf.total_weight());
  }
  return ": " + cls + buf;
}

void print_node(const TreeNode& node, const Dataset& schema, int depth, std::string& out) {
  const auto& spec = schema.attribute(*node.attribute);
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const TreeNode& child = node.children[i];
    for (int k = 0; k < depth; ++k) out += "|   ";
    out += spec.name() + " = " + spec.values()[i];
    if (child.is_leaf()) {
      out += leaf_label(child, schema) + "\n";
    } else {
      out += "\n";
      print_node(child, schema, depth + 1, out);
    }
  }
}

}  // namespace

std::string print_tree(const TreeNode& tree, const Dataset& schema) {
  std::string out;
  if (tree.is_leaf()) {
    out += leaf_label(tree, schema) + "\n";
  } else {
    print_node(tree, schema, 0, out);
  }
  out += "\nNumber of Leaves  :\t" + std::to_string(count_leaves(tree)) + "\n";
  out += "\nSize of the tree :\t" + std::to_string(tree_size(tree)) + "\n";
  return out;
}

}  // namespace dmkit::c45
