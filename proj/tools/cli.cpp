#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dmkit/arff.hpp"
#include "dmkit/c45.hpp"
#include "dmkit/csv.hpp"
#include "dmkit/errors.hpp"
#include "dmkit/evaluation.hpp"
#include "dmkit/kmeans.hpp"
#include "dmkit/svg_plot.hpp"
#include "dmkit/titanic.hpp"

namespace dmkit::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDataDirEnv = "DMKIT_DATA_DIR";

/// Relative inputs that do not exist are looked up under $DMKIT_DATA_DIR.
fs::path resolve_input(const std::string& path) {
  fs::path p(path);
  if (fs::exists(p) || p.is_absolute()) return p;
  if (const char* dir = std::getenv(kDataDirEnv); dir && *dir) {
    fs::path alt = fs::path(dir) / p;
    if (fs::exists(alt)) return alt;
  }
  return p;
}

std::string read_file(const std::string& path) {
  const fs::path p = resolve_input(path);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw data_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs `parse` on the file's text; parse errors get the file name prefixed.
template <typename Parse>
auto load(const std::string& path, Parse parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const format_error& e) {
    throw format_error(path + ": " + e.what());
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

Dataset load_arff(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_arff(t); });
}

RawTable load_csv(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_csv(t); });
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error(path + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw data_error(path + ": write failed");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

/// Attribute by name, or by 1-based position ("3"), or "first"/"last".
std::size_t attribute_ref(const Dataset& d, const std::string& ref) {
  if (auto i = d.find_attribute(ref)) return *i;
  if (ref == "first" && d.num_attributes() > 0) return 0;
  if (ref == "last" && d.num_attributes() > 0) return d.num_attributes() - 1;
  std::size_t pos = 0;
  auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), pos);
  if (ec == std::errc() && ptr == ref.data() + ref.size() && pos >= 1 &&
      pos <= d.num_attributes()) {
    return pos - 1;
  }
  throw usage_error("no attribute '" + ref + "'");
}

std::vector<std::string> attribute_names(const Dataset& d) {
  std::vector<std::string> names;
  for (const auto& a : d.attributes()) names.push_back(a.name());
  return names;
}

struct NormalizeArgs {
  std::string input, output, relation = "train4";
};

struct ConvertArgs {
  std::string input, output, relation;
};

struct RemoveArgs {
  std::string input, output, indices;
};

struct TreeArgs {
  std::string train, out, summary, class_attr = "first";
  double cf = 0.25;
  double min_leaf = 2;
  bool no_prune = false;
  bool raising = false;
  std::size_t cv = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool timing = false;
};

struct ClusterArgs {
  std::string input, out, assignments;
  std::size_t k = 2;
  std::uint64_t seed = 10;
  std::size_t max_iter = 500;
};

struct PlotArgs {
  std::string input, out, x, y, color, assignments, title;
  std::uint64_t jitter_seed = 7;
  int width = 640, height = 480;
  double radius = 3.0, opacity = 0.6;
};

int cmd_normalize(const NormalizeArgs& a) {
  const RawTable raw = load_csv(a.input);
  Dataset d = [&] {
    try {
      return titanic::normalize_titanic(raw, a.relation);
    } catch (const data_error& e) {
      throw data_error(a.input + ": " + e.what());
    }
  }();
  write_file(a.output, write_arff(d));
  return kOk;
}

int cmd_convert(const ConvertArgs& a) {
  const RawTable raw = load_csv(a.input);
  std::string relation = a.relation.empty() ? fs::path(a.input).stem().string() : a.relation;
  Dataset d = [&] {
    try {
      return table_to_nominal_dataset(raw, relation);
    } catch (const data_error& e) {
      throw data_error(a.input + ": " + e.what());
    }
  }();
  write_file(a.output, write_arff(d));
  return kOk;
}

int cmd_remove(const RemoveArgs& a) {
  const Dataset d = load_arff(a.input);
  const auto ranges = parse_ranges(a.indices, d.num_attributes());
  Dataset filtered = remove_attributes(d, ranges);
  filtered = filtered.with_relation(titanic::removal_relation_name(d.relation_name(), a.indices));
  write_file(a.output, write_arff(filtered));
  return kOk;
}

int cmd_tree(const TreeArgs& a, std::ostream& out) {
  c45::TreeParams params;
  params.confidence_factor = a.cf;
  params.min_instances = a.min_leaf;
  params.pruning_enabled = !a.no_prune;
  params.subtree_raising = a.raising;
  params.validate();
  if (a.cv == 1) throw usage_error("--cv must be 0 (training set) or at least 2");

  Dataset d = load_arff(a.train);
  d = d.with_target(attribute_ref(d, a.class_attr));
  if (a.cv > d.num_instances()) {
    throw usage_error("--cv " + std::to_string(a.cv) + " exceeds the instance count");
  }

  const auto start = std::chrono::steady_clock::now();
  const c45::TreeNode tree = c45::build_tree(d, params);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;

  const eval::Evaluation ev = a.cv ? eval::cross_validate(d, params, a.cv, a.seed, a.threads)
                                   : eval::evaluate_model(tree, d);

  eval::RunInfo run{d.relation_name(), d.num_instances(), attribute_names(d), a.cv};
  eval::Timings timings;
  if (a.timing) timings.build_seconds = took.count();
  const std::string report = eval::format_report(ev, c45::print_tree(tree, d), params, run, timings);

  emit(a.out, report, out);
  if (!a.summary.empty()) write_file(a.summary, eval::format_summary_kv(ev));
  return kOk;
}

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
  cluster::ClusterParams p;
  p.k = a.k;
  p.seed = a.seed;
  p.max_iterations = a.max_iter;
  p.validate();

  const Dataset d = load_arff(a.input);
  const cluster::ClusterModel m = cluster::kmeans(d, p);
  const std::string report = cluster::format_cluster_report(m, d, p);
  emit(a.out, report, out);
  if (!a.assignments.empty()) write_file(a.assignments, cluster::write_assignments_csv(m));
  return kOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  if (a.color.empty() == a.assignments.empty()) {
    throw usage_error("give exactly one of --color or --assignments");
  }
  const Dataset d = load_arff(a.input);
  viz::PlotSpec spec;
  spec.x_attr = attribute_ref(d, a.x);
  spec.y_attr = attribute_ref(d, a.y);
  if (!a.color.empty()) {
    spec.color_attr = attribute_ref(d, a.color);
  } else {
    const std::size_t n = d.num_instances();
    spec.assignment = load(a.assignments, [n](const std::string& t) {
      return cluster::read_assignments_csv(t, n);
    });
  }
  spec.jitter_seed = a.jitter_seed;
  spec.width = a.width;
  spec.height = a.height;
  spec.radius = a.radius;
  spec.opacity = a.opacity;
  spec.title = a.title;
  emit(a.out, viz::jitter_scatter(d, spec), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision-tree classification, nominal clustering and plotting for ARFF data",
               "dmkit"};
  app.require_subcommand(1);

  NormalizeArgs norm;
  auto* normalize = app.add_subcommand("normalize", "Kaggle Titanic CSV to the 5-attribute ARFF");
  normalize->add_option("--input", norm.input, "Kaggle train CSV")->required();
  normalize->add_option("--output", norm.output, "ARFF file to write")->required();
  normalize->add_option("--relation", norm.relation, "Base relation name")->capture_default_str();

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Generic CSV to all-nominal ARFF");
  convert->add_option("--input", conv.input, "CSV file")->required();
  convert->add_option("--output", conv.output, "ARFF file to write")->required();
  convert->add_option("--relation", conv.relation, "Relation name (default: input file stem)");

  RemoveArgs rem;
  auto* filter = app.add_subcommand("filter", "Attribute filters");
  filter->require_subcommand(1);
  auto* remove = filter->add_subcommand("remove", "Drop attributes by 1-based index ranges");
  remove->add_option("--indices", rem.indices, "Ranges such as 1,3,6-8")->required();
  remove->add_option("--input", rem.input, "ARFF file")->required();
  remove->add_option("--output", rem.output, "ARFF file to write")->required();

  TreeArgs tr;
  auto* tree = app.add_subcommand("tree", "Build a C4.5 tree and evaluate it");
  tree->add_option("--train", tr.train, "Training ARFF")->required();
  tree->add_option("--class", tr.class_attr, "Class attribute: name, 1-based index, first or last")
      ->capture_default_str();
  tree->add_option("--cf", tr.cf, "Pruning confidence factor")->capture_default_str();
  tree->add_option("--min-leaf", tr.min_leaf, "Minimum instances per branch")->capture_default_str();
  tree->add_flag("--no-prune", tr.no_prune, "Keep the unpruned tree");
  tree->add_flag("--subtree-raising", tr.raising, "Enable subtree raising during pruning");
  tree->add_option("--cv", tr.cv, "Folds for cross-validation; 0 evaluates on the training set")
      ->capture_default_str();
  tree->add_option("--seed", tr.seed, "Fold shuffling seed")->capture_default_str();
  tree->add_option("--threads", tr.threads, "Worker threads for the folds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  tree->add_option("--out", tr.out, "Report file (default: stdout)");
  tree->add_option("--summary", tr.summary, "Write key=value summary lines to this file");
  tree->add_flag("--timing", tr.timing, "Include model build time in the report");

  ClusterArgs cl;
  auto* clus = app.add_subcommand("cluster", "k-means with mode centroids over nominal data");
  clus->add_option("--input", cl.input, "ARFF file")->required();
  clus->add_option("--k", cl.k, "Number of clusters")->capture_default_str();
  clus->add_option("--seed", cl.seed, "Initialization seed")->capture_default_str();
  clus->add_option("--max-iter", cl.max_iter, "Maximum assignment passes")->capture_default_str();
  clus->add_option("--assignments", cl.assignments, "Write instance,cluster CSV here");
  clus->add_option("--out", cl.out, "Report file (default: stdout)");

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "Jittered SVG scatter of two nominal attributes");
  plot->add_option("--input", pl.input, "ARFF file")->required();
  plot->add_option("--x", pl.x, "x-axis attribute")->required();
  plot->add_option("--y", pl.y, "y-axis attribute")->required();
  auto* color_opt = plot->add_option("--color", pl.color, "Color by this attribute");
  auto* assign_opt =
      plot->add_option("--assignments", pl.assignments, "Color by clusters from this CSV");
  color_opt->excludes(assign_opt);
  plot->add_option("--jitter-seed", pl.jitter_seed, "Jitter seed")->capture_default_str();
  plot->add_option("--width", pl.width, "Width in pixels")->capture_default_str();
  plot->add_option("--height", pl.height, "Height in pixels")->capture_default_str();
  plot->add_option("--radius", pl.radius, "Marker radius")->capture_default_str();
  plot->add_option("--opacity", pl.opacity, "Marker opacity")->capture_default_str();
  plot->add_option("--title", pl.title, "Plot title");
  plot->add_option("--out", pl.out, "SVG file (default: stdout)");

  std::vector<std::string> argv_store{"dmkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    }
    err << "dmkit: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*normalize) return cmd_normalize(norm);
    if (*convert) return cmd_convert(conv);
    if (*remove) return cmd_remove(rem);
    if (*tree) return cmd_tree(tr, out);
    if (*clus) return cmd_cluster(cl, out);
    if (*plot) return cmd_plot(pl, out);
  } catch (const usage_error& e) {
    err << "dmkit: " << e.what() << '\n';
    return kUsage;
  } catch (const data_error& e) {
    err << "dmkit: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "dmkit: " << e.what() << '\n';
    return kData;
  }
  err << app.help();
  return kUsage;
}

}  // namespace dmkit::cli
