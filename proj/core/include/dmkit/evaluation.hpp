#ifndef DMKIT_EVALUATION_HPP
#define DMKIT_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmkit/c45.hpp"
#include "dmkit/dataset.hpp"

namespace dmkit::eval {

/// Assignment of instances to k folds.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // fold index per instance

  std::vector<std::size_t> fold_rows(std::size_t fold) const;
  std::vector<std::size_t> training_rows(std::size_t fold) const;
};

/// Stratified fold plan. Instance order is shuffled with Rng(seed); then the
/// shuffled instances of class 0, class 1, ... (missing class last) are dealt
/// to folds 0, 1, ..., k-1, 0, ... with one counter running across classes.
FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

/// Pooled predictions and the confusion matrix built from them.
class Evaluation {
 public:
  explicit Evaluation(std::vector<std::string> class_labels);

  /// Matrix-only evaluation (no per-instance probabilities).
  static Evaluation from_confusion(std::vector<std::vector<double>> confusion,
                                   std::vector<std::string> class_labels);

  /// Records one prediction. `baseline` is the class prior of the data the
  /// predicting model was trained on.
  void add(std::size_t actual, std::vector<double> predicted, std::vector<double> baseline);

  std::size_t num_classes() const { return labels_.size(); }
  const std::vector<std::string>& class_labels() const { return labels_; }
  const std::vector<std::vector<double>>& confusion() const { return confusion_; }
  double total() const;
  double correct() const;
  bool has_probabilities() const { return !actual_.empty(); }

  const std::vector<std::size_t>& actual() const { return actual_; }
  const std::vector<std::vector<double>>& predicted() const { return predicted_; }
  const std::vector<std::vector<double>>& baseline() const { return baseline_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> confusion_;  // [actual][predicted]
  std::vector<std::size_t> actual_;
  std::vector<std::vector<double>> predicted_;
  std::vector<std::vector<double>> baseline_;
};

/// Class frequencies of `rows` normalized to sum to 1.
std::vector<double> class_prior(const Dataset& d, std::span<const std::size_t> rows);

/// k-fold stratified cross-validation of the C4.5 learner. Folds run on
/// `threads` workers; the result does not depend on the thread count.
Evaluation cross_validate(const Dataset& d, const c45::TreeParams& params, std::size_t k,
                          std::uint64_t seed, unsigned threads = 1);

/// Scores `tree` on every instance of `d`, with d's own prior as baseline.
Evaluation evaluate_model(const c45::TreeNode& tree, const Dataset& d);

struct SummaryMetrics {
  double accuracy = 0;
  double kappa = 0;
  double mae = 0;
  double rmse = 0;
  double rae = 0;   // fraction; NaN when the baseline error is 0
  double rrse = 0;  // fraction; NaN when the baseline error is 0
};

/// Throws usage_error for an empty evaluation. Error statistics are 0 for a
/// matrix-only evaluation.
SummaryMetrics summary_metrics(const Evaluation& ev);

struct ClassMetrics {
  double tp_rate = 0;
  double fp_rate = 0;
  double precision = 0;
  double recall = 0;
  double f_measure = 0;
  double roc_area = 0;
  bool undefined = false;  // some ratio had a zero denominator and was reported as 0
  bool roc_available = true;
};

struct PerClassTable {
  std::vector<ClassMetrics> classes;
  ClassMetrics weighted;  // averaged with actual class counts as weights
};

PerClassTable per_class_metrics(const Evaluation& ev);

/// Probability that a random positive outscores a random negative (ties count
/// half). Throws usage_error unless both groups are present.
double roc_auc(std::span<const double> scores, const std::vector<bool>& positives);

struct RunInfo {
  std::string relation;
  std::size_t instances = 0;
  std::vector<std::string> attributes;
  /// Number of folds, or 0 for evaluation on the training data.
  std::size_t folds = 0;
};

struct Timings {
  std::optional<double> build_seconds;
};

/// Text report: run information, model listing, summary, per-class block
/// and confusion matrix.
std::string format_report(const Evaluation& ev, const std::string& tree_text,
                          const c45::TreeParams& params, const RunInfo& run,
                          const Timings& timings = {});

/// key=value lines with the summary and weighted per-class figures.
std::string format_summary_kv(const Evaluation& ev);

}  // namespace dmkit::eval

#endif
