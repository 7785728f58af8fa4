#include <cmath>
#include <cstdio>
#include <sstream>

#include "dmkit/errors.hpp"
#include "dmkit/evaluation.hpp"

namespace dmkit::eval {

namespace {

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Integral counts print without decimals, fractional ones with four.
std::string count(double v) {
  return v == std::floor(v) ? fixed(v, 0) : fixed(v, 4);
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

/// a, b, ..., z, aa, ab, ...
std::string class_tag(std::size_t i) {
  std::string tag;
  ++i;
  while (i > 0) {
    --i;
    tag.insert(tag.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  }
  return tag;
}

std::string scheme_line(const c45::TreeParams& p) {
  std::ostringstream os;
  os << "dmkit.c45 -C " << p.confidence_factor << " -M " << p.min_instances;
  if (!p.pruning_enabled) os << " -U";
  if (p.pruning_enabled && p.subtree_raising) os << " -R";
  return os.str();
}

void metric_row(std::ostringstream& os, const std::string& label, const ClassMetrics& m,
                const std::string& cls) {
  os << pad_right(label, 15);
  for (double v : {m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure}) {
    os << pad_left(fixed(v, 3), 8) << "  ";
  }
  os << pad_left(m.roc_available ? fixed(m.roc_area, 3) : "?", 8) << "  " << cls << '\n';
}

}  // namespace

std::string format_report(const Evaluation& ev, const std::string& tree_text,
                          const c45::TreeParams& params, const RunInfo& run,
                          const Timings& timings) {
  const double total = ev.total();
  if (total <= 0) throw usage_error("cannot report on an evaluation with no instances");
  const SummaryMetrics s = summary_metrics(ev);
  const PerClassTable pc = per_class_metrics(ev);

  std::ostringstream os;
  os << "=== Run information ===\n\n";
  os << "Scheme:       " << scheme_line(params) << '\n';
  os << "Relation:     " << run.relation << '\n';
  os << "Instances:    " << run.instances << '\n';
  os << "Attributes:   " << run.attributes.size() << '\n';
  for (const auto& a : run.attributes) os << "              " << a << '\n';
  os << "Test mode:    "
     << (run.folds ? std::to_string(run.folds) + "-fold cross-validation"
                   : std::string("evaluate on training data"))
     << "\n\n";

  os << "=== Classifier model (full training set) ===\n\n";
  os << (params.pruning_enabled ? "C4.5 pruned tree\n" : "C4.5 unpruned tree\n");
  os << "------------------\n\n";
  os << tree_text << '\n';
  if (timings.build_seconds) {
    os << "Time taken to build model: " << fixed(*timings.build_seconds, 2) << " seconds\n\n";
  }

  os << (run.folds ? "=== Stratified cross-validation ===\n" : "=== Evaluation on training set ===\n");
  os << "=== Summary ===\n\n";
  const double correct = ev.correct();
  os << pad_right("Correctly Classified Instances", 33) << pad_left(count(correct), 9)
     << pad_left(fixed(100 * correct / total, 4), 18) << " %\n";
  os << pad_right("Incorrectly Classified Instances", 33) << pad_left(count(total - correct), 9)
     << pad_left(fixed(100 * (total - correct) / total, 4), 18) << " %\n";
  os << pad_right("Kappa statistic", 33) << pad_left(fixed(s.kappa, 4), 14) << '\n';
  if (ev.has_probabilities()) {
    os << pad_right("Mean absolute error", 33) << pad_left(fixed(s.mae, 4), 14) << '\n';
    os << pad_right("Root mean squared error", 33) << pad_left(fixed(s.rmse, 4), 14) << '\n';
    os << pad_right("Relative absolute error", 33) << pad_left(fixed(100 * s.rae, 4), 14)
       << " %\n";
    os << pad_right("Root relative squared error", 33) << pad_left(fixed(100 * s.rrse, 4), 14)
       << " %\n";
  }
  os << pad_right("Total Number of Instances", 33) << pad_left(count(total), 9) << "\n\n";

  os << "=== Detailed Accuracy By Class ===\n\n";
  os << pad_right("", 15);
  for (const char* h : {"TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "ROC Area"}) {
    os << pad_left(h, 8) << "  ";
  }
  os << "Class\n";
  for (std::size_t c = 0; c < pc.classes.size(); ++c) {
    metric_row(os, "", pc.classes[c], ev.class_labels()[c]);
  }
  metric_row(os, "Weighted Avg.", pc.weighted, "");
  os << '\n';

  os << "=== Confusion Matrix ===\n\n";
  const std::size_t n = ev.num_classes();
  std::size_t width = 4;
  for (const auto& row : ev.confusion()) {
    for (double v : row) width = std::max(width, count(v).size() + 1);
  }
  for (std::size_t c = 0; c < n; ++c) os << pad_left(class_tag(c), width);
  os << "   <-- classified as\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) os << pad_left(count(ev.confusion()[r][c]), width);
    os << " |   " << class_tag(r) << " = " << ev.class_labels()[r] << '\n';
  }
  return os.str();
}

std::string format_summary_kv(const Evaluation& ev) {
  const SummaryMetrics s = summary_metrics(ev);
  const PerClassTable pc = per_class_metrics(ev);
  std::ostringstream os;
  os << "instances=" << count(ev.total()) << '\n';
  os << "correct=" << count(ev.correct()) << '\n';
  os << "accuracy=" << fixed(s.accuracy, 6) << '\n';
  os << "kappa=" << fixed(s.kappa, 6) << '\n';
  if (ev.has_probabilities()) {
    os << "mae=" << fixed(s.mae, 6) << '\n';
    os << "rmse=" << fixed(s.rmse, 6) << '\n';
    os << "rae=" << fixed(s.rae, 6) << '\n';
    os << "rrse=" << fixed(s.rrse, 6) << '\n';
  }
  os << "weighted_tp_rate=" << fixed(pc.weighted.tp_rate, 6) << '\n';
  os << "weighted_fp_rate=" << fixed(pc.weighted.fp_rate, 6) << '\n';
  os << "weighted_precision=" << fixed(pc.weighted.precision, 6) << '\n';
  os << "weighted_f_measure=" << fixed(pc.weighted.f_measure, 6) << '\n';
  if (pc.weighted.roc_available) os << "weighted_roc_area=" << fixed(pc.weighted.roc_area, 6) << '\n';
  return os.str();
}

}  // namespace dmkit::eval
