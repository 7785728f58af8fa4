#include "dmkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "dmkit/errors.hpp"
#include "dmkit/random.hpp"

namespace dmkit::eval {

std::vector<std::size_t> FoldPlan::fold_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::training_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw usage_error("fold count must be at least 2");
  if (k > d.num_instances()) {
    throw usage_error("fold count " + std::to_string(k) + " exceeds instance count " +
                      std::to_string(d.num_instances()));
  }
  const std::size_t target = d.target();
  const std::size_t num_classes = d.num_classes();

  std::vector<std::size_t> order(d.num_instances());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(d.num_instances(), 0);
  std::size_t counter = 0;
  // missing class values form a trailing pseudo-class
  for (std::size_t c = 0; c <= num_classes; ++c) {
    for (auto i : order) {
      const CellValue& v = d.row(i)[target];
      std::size_t cls = v.is_missing() ? num_classes : v.index();
      if (cls != c) continue;
      plan.assignment[i] = counter % k;
      ++counter;
    }
  }
  return plan;
}

Evaluation::Evaluation(std::vector<std::string> class_labels)
    : labels_(std::move(class_labels)),
      confusion_(labels_.size(), std::vector<double>(labels_.size(), 0.0)) {}

Evaluation Evaluation::from_confusion(std::vector<std::vector<double>> confusion,
                                      std::vector<std::string> class_labels) {
  Evaluation ev(std::move(class_labels));
  if (confusion.size() != ev.num_classes()) throw usage_error("confusion matrix size mismatch");
  for (const auto& row : confusion) {
    if (row.size() != ev.num_classes()) throw usage_error("confusion matrix must be square");
  }
  ev.confusion_ = std::move(confusion);
  return ev;
}

void Evaluation::add(std::size_t actual, std::vector<double> predicted,
                     std::vector<double> baseline) {
  const std::size_t guess = c45::majority(predicted);
  confusion_.at(actual).at(guess) += 1.0;
  actual_.push_back(actual);
  predicted_.push_back(std::move(predicted));
  baseline_.push_back(std::move(baseline));
}

double Evaluation::total() const {
  double t = 0;
  for (const auto& row : confusion_) t += std::accumulate(row.begin(), row.end(), 0.0);
  return t;
}

double Evaluation::correct() const {
  double t = 0;
  for (std::size_t i = 0; i < confusion_.size(); ++i) t += confusion_[i][i];
  return t;
}

std::vector<double> class_prior(const Dataset& d, std::span<const std::size_t> rows) {
  std::vector<double> prior(d.num_classes(), 0.0);
  double total = 0;
  const std::size_t target = d.target();
  for (auto r : rows) {
    const CellValue& v = d.row(r)[target];
    if (v.is_missing()) continue;
    prior[v.index()] += 1.0;
    total += 1.0;
  }
  if (total > 0) {
    for (auto& p : prior) p /= total;
  }
  return prior;
}

namespace {

struct Scored {
  std::vector<double> predicted;
  std::vector<double> baseline;
  bool present = false;
};

void run_fold(const Dataset& d, const c45::TreeParams& params, const FoldPlan& plan,
              std::size_t fold, std::vector<Scored>& out) {
  const auto train_rows = plan.training_rows(fold);
  const Dataset train = d.subset(train_rows);
  const c45::TreeNode tree = c45::build_tree(train, params);

  std::vector<std::size_t> all(train.num_instances());
  std::iota(all.begin(), all.end(), 0);
  const std::vector<double> prior = class_prior(train, all);

  const std::size_t target = d.target();
  for (auto r : plan.fold_rows(fold)) {
    if (d.row(r)[target].is_missing()) continue;
    auto p = c45::predict(tree, d.row(r));
    out[r] = {std::move(p.distribution), prior, true};
  }
}

}  // namespace

Evaluation cross_validate(const Dataset& d, const c45::TreeParams& params, std::size_t k,
                          std::uint64_t seed, unsigned threads) {
  params.validate();
  const FoldPlan plan = stratified_folds(d, k, seed);

  std::vector<Scored> scored(d.num_instances());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(k)));
  if (threads == 1) {
    for (std::size_t f = 0; f < k; ++f) run_fold(d, params, plan, f, scored);
  } else {
    // each fold writes only its own rows of `scored`
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t f = t; f < k; f += threads) run_fold(d, params, plan, f, scored);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Evaluation ev(d.attribute(d.target()).values());
  for (std::size_t r = 0; r < scored.size(); ++r) {
    if (!scored[r].present) continue;
    ev.add(d.class_of(r), std::move(scored[r].predicted), std::move(scored[r].baseline));
  }
  return ev;
}

Evaluation evaluate_model(const c45::TreeNode& tree, const Dataset& d) {
  std::vector<std::size_t> all(d.num_instances());
  std::iota(all.begin(), all.end(), 0);
  const std::vector<double> prior = class_prior(d, all);
  const std::size_t target = d.target();

  Evaluation ev(d.attribute(target).values());
  for (std::size_t r = 0; r < d.num_instances(); ++r) {
    if (d.row(r)[target].is_missing()) continue;
    ev.add(d.class_of(r), c45::predict(tree, d.row(r)).distribution, prior);
  }
  return ev;
}

namespace {

struct ErrorSums {
  double abs = 0;
  double sq = 0;
};

ErrorSums error_sums(const std::vector<std::vector<double>>& probs,
                     const std::vector<std::size_t>& actual, std::size_t num_classes) {
  ErrorSums s;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    double a = 0, q = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      double diff = probs[i][c] - (c == actual[i] ? 1.0 : 0.0);
      a += std::fabs(diff);
      q += diff * diff;
    }
    s.abs += a / static_cast<double>(num_classes);
    s.sq += q / static_cast<double>(num_classes);
  }
  return s;
}

double safe_div(double num, double den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0;
  }
  return num / den;
}

}  // namespace

SummaryMetrics summary_metrics(const Evaluation& ev) {
  const double total = ev.total();
  if (total <= 0) throw usage_error("evaluation has no instances");
  const std::size_t n = ev.num_classes();
  const auto& m = ev.confusion();

  SummaryMetrics s;
  s.accuracy = ev.correct() / total;

  double expected = 0;
  for (std::size_t c = 0; c < n; ++c) {
    double row = std::accumulate(m[c].begin(), m[c].end(), 0.0);
    double col = 0;
    for (std::size_t r = 0; r < n; ++r) col += m[r][c];
    expected += row * col;
  }
  expected /= total * total;
  s.kappa = expected < 1 ? (s.accuracy - expected) / (1 - expected) : (s.accuracy == 1 ? 1 : 0);

  if (ev.has_probabilities()) {
    const double count = static_cast<double>(ev.actual().size());
    ErrorSums model = error_sums(ev.predicted(), ev.actual(), n);
    ErrorSums prior = error_sums(ev.baseline(), ev.actual(), n);
    s.mae = model.abs / count;
    s.rmse = std::sqrt(model.sq / count);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.rae = prior.abs > 0 ? model.abs / prior.abs : nan;
    s.rrse = prior.sq > 0 ? std::sqrt(model.sq / prior.sq) : nan;
  }
  return s;
}

double roc_auc(std::span<const double> scores, const std::vector<bool>& positives) {
  if (scores.size() != positives.size()) throw usage_error("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U from midranks: pairs (pos, neg) with pos above neg, ties halved
  double pos = 0, neg = 0, rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i) + static_cast<double>(j) + 1) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positives[order[t]]) {
        pos += 1;
        rank_sum += midrank;
      } else {
        neg += 1;
      }
    }
    i = j;
  }
  if (pos == 0 || neg == 0) {
    throw usage_error("ROC area needs at least one positive and one negative instance");
  }
  return (rank_sum - pos * (pos + 1) / 2) / (pos * neg);
}

PerClassTable per_class_metrics(const Evaluation& ev) {
  const double total = ev.total();
  if (total <= 0) throw usage_error("evaluation has no instances");
  const std::size_t n = ev.num_classes();
  const auto& m = ev.confusion();

  PerClassTable table;
  std::vector<double> actual_counts(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    ClassMetrics cm;
    double tp = m[c][c];
    double actual = std::accumulate(m[c].begin(), m[c].end(), 0.0);
    double predicted = 0;
    for (std::size_t r = 0; r < n; ++r) predicted += m[r][c];
    double fp = predicted - tp;
    double negatives = total - actual;
    actual_counts[c] = actual;

    cm.tp_rate = safe_div(tp, actual, cm.undefined);
    cm.recall = cm.tp_rate;
    cm.fp_rate = safe_div(fp, negatives, cm.undefined);
    cm.precision = safe_div(tp, predicted, cm.undefined);
    cm.f_measure = safe_div(2 * cm.precision * cm.recall, cm.precision + cm.recall, cm.undefined);

    cm.roc_available = false;
    if (ev.has_probabilities() && actual > 0 && negatives > 0) {
      std::vector<double> scores;
      std::vector<bool> labels;
      for (std::size_t i = 0; i < ev.actual().size(); ++i) {
        scores.push_back(ev.predicted()[i][c]);
        labels.push_back(ev.actual()[i] == c);
      }
      cm.roc_area = roc_auc(scores, labels);
      cm.roc_available = true;
    }
    table.classes.push_back(cm);
  }

  ClassMetrics& w = table.weighted;
  w.roc_available = true;
  for (std::size_t c = 0; c < n; ++c) {
    const double weight = actual_counts[c] / total;
    const ClassMetrics& cm = table.classes[c];
    w.tp_rate += weight * cm.tp_rate;
    w.fp_rate += weight * cm.fp_rate;
    w.precision += weight * cm.precision;
    w.recall += weight * cm.recall;
    w.f_measure += weight * cm.f_measure;
    w.undefined = w.undefined || cm.undefined;
    if (actual_counts[c] > 0) {
      w.roc_area += weight * cm.roc_area;
      w.roc_available = w.roc_available && cm.roc_available;
    }
  }
  return table;
}

}  // namespace dmkit::eval
