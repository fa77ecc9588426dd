#include "flowgnn_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "flowgnn/analysis.hpp"
#include "flowgnn/baselines.hpp"
#include "flowgnn/buckets.hpp"
#include "flowgnn/checkpoint.hpp"
#include "flowgnn/dataset_io.hpp"
#include "flowgnn/errors.hpp"
#include "flowgnn/grid_search.hpp"
#include "flowgnn/pipeline.hpp"
#include "flowgnn/plot.hpp"
#include "flowgnn/report_io.hpp"
#include "flowgnn/train.hpp"

namespace flowgnn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for bad flag combinations detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct ModelFlags {
  std::string model = "gcnii";
  std::size_t layers = 10;
  std::size_t hidden = 64;
  double alpha = 0.1;
  double theta = 1.5;
  std::size_t heads = 1;
  std::string buckets = "coarse3";
  std::string task = "cls";
  double dropout = 0.25;
  std::size_t ff_layers = 3;
  bool graph_norm = true;
};

struct TrainFlags {
  std::size_t epochs = 300;
  double lr = 1e-3;
  std::size_t patience = 50;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--model", f.model, "Graph layer type")
      ->check(CLI::IsMember({"gcn", "gcnii", "gatv2", "gatv3"}))
      ->capture_default_str();
  app->add_option("--layers", f.layers, "Number of graph layers (0 = MLP)")->capture_default_str();
  app->add_option("--hidden", f.hidden, "Hidden units")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--alpha", f.alpha, "Initial-residual strength")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--theta", f.theta, "GCNII identity-mapping strength")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--heads", f.heads, "Attention heads")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--buckets", f.buckets, "Bucket spec for classification")
      ->check(CLI::IsMember(bucket_spec_names()))
      ->capture_default_str();
  app->add_option("--task", f.task, "cls or reg")->check(CLI::IsMember({"cls", "reg"}))->capture_default_str();
  app->add_option("--dropout", f.dropout, "Dropout probability")->check(CLI::Range(0.0, 0.99))->capture_default_str();
  app->add_option("--ff-layers", f.ff_layers, "Feed-forward blocks after the graph stack")->capture_default_str();
  app->add_option("--graph-norm", f.graph_norm, "Apply GraphNorm after each graph layer")->capture_default_str();
}

void add_train_flags(CLI::App* app, TrainFlags& f) {
  app->add_option("--epochs", f.epochs, "Maximum epochs")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--lr", f.lr, "Adam learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--patience", f.patience, "Early-stopping patience in epochs (0 = off)")->capture_default_str();
}

gnn::ModelConfig model_config(const ModelFlags& f) {
  gnn::ModelConfig c;
  c.kind = gnn::parse_layer_kind(f.model);
  c.depth = f.layers;
  c.hidden = f.hidden;
  c.alpha = f.alpha;
  c.theta = f.theta;
  c.heads = f.heads;
  c.task = gnn::parse_task(f.task);
  c.buckets = f.buckets;
  c.num_features = line_graph_feature_schema().size();
  c.num_outputs = c.task == gnn::Task::kClassification ? make_spec(f.buckets).size() : 1;
  c.dropout = f.dropout;
  c.ff_layers = f.ff_layers;
  c.graph_norm = f.graph_norm;
  c.validate();
  return c;
}

eval::TrainConfig train_config(const gnn::ModelConfig& model, const TrainFlags& f, std::uint64_t seed) {
  eval::TrainConfig c;
  c.task = model.task;
  c.buckets = make_spec(model.buckets);
  c.epochs = f.epochs;
  c.learning_rate = f.lr;
  c.patience = f.patience;
  c.seed = seed;
  return c;
}

// Snapshot of every option of a subcommand, as given or defaulted.
json options_snapshot(const CLI::App* app) {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      j[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

class Manifest {
 public:
  Manifest(const CLI::App* app, std::uint64_t seed)
      : app_(app), seed_(seed), start_(std::chrono::steady_clock::now()) {}

  void input(const fs::path& p) { inputs_.push_back(p.string()); }
  void output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& dir) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json j;
    j["command"] = app_->get_name();
    j["config"] = options_snapshot(app_);
    j["seed"] = seed_;
    j["code_version"] = FLOWGNN_VERSION;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["duration_seconds"] = seconds;
    write_json_atomic(j, dir / "manifest.json");
  }

 private:
  const CLI::App* app_;
  std::uint64_t seed_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

Dataset load_split(const fs::path& data_dir, Split split, bool required) {
  const fs::path p = data_dir / (std::string(to_string(split)) + ".jsonl");
  if (!fs::exists(p)) {
    if (required) throw UsageError("missing dataset file " + p.string());
    Dataset empty;
    empty.split = split;
    empty.feature_schema = line_graph_feature_schema();
    return empty;
  }
  return read_dataset(p);
}

std::string schema_diff(const std::vector<std::string>& expected, const std::vector<std::string>& actual) {
  std::ostringstream s;
  s << "feature schema mismatch: checkpoint has " << expected.size() << " columns, dataset has "
    << actual.size();
  for (std::size_t i = 0; i < std::max(expected.size(), actual.size()); ++i) {
    const std::string a = i < expected.size() ? expected[i] : "<none>";
    const std::string b = i < actual.size() ? actual[i] : "<none>";
    if (a != b) s << "\n  column " << i << ": checkpoint '" << a << "' vs dataset '" << b << "'";
  }
  return s.str();
}

void print_metrics(std::ostream& out, const std::string& label, const eval::MetricsReport& r) {
  out << std::fixed << std::setprecision(4);
  out << label << ":";
  if (r.classification) {
    out << " accuracy=" << r.classification->accuracy << " macro_f1=" << r.classification->macro_f1;
  }
  if (r.regression.count > 0) {
    out << " mae_ge10=" << r.regression.mae << " r2_ge10=" << r.regression.r2;
  }
  out << '\n';
  out.unsetf(std::ios::floatfield);
}

// ---------------------------------------------------------------- gen-data

struct GenDataFlags {
  std::size_t samples = 0;
  std::size_t min_nodes = 15;
  std::size_t max_nodes = 80;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;
  double zones_per_node = 0.15;
  std::size_t lookahead = 7;
};

void gen_data(const CLI::App* app, const GenDataFlags& f, std::ostream& out) {
  Manifest manifest(app, f.seed);
  BatchConfig bc;
  bc.samples = f.samples;
  bc.min_nodes = f.min_nodes;
  bc.max_nodes = f.max_nodes;
  bc.seed = f.seed;
  bc.workers = f.workers;
  bc.synth.zones_per_node = f.zones_per_node;
  bc.synth.route_lookahead_k = f.lookahead;
  SplitFractions fractions{f.train_fraction, f.val_fraction, f.test_fraction};
  try {
    bc.validate();
    fractions.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  std::vector<LineGraphSample> samples = generate_batch(bc);
  const BucketSpec coarse = make_spec("coarse3");
  std::vector<std::size_t> counts(coarse.size(), 0);
  std::size_t links = 0;
  for (const LineGraphSample& s : samples) {
    for (double t : s.target_flow) {
      ++counts[encode(t, coarse)];
      ++links;
    }
  }

  const fs::path dir = ensure_dir(f.out);
  SplitDatasets splits = split_samples(std::move(samples), fractions);
  for (const Dataset* d : {&splits.train, &splits.validation, &splits.test}) {
    const fs::path p = dir / (std::string(to_string(d->split)) + ".jsonl");
    write_dataset(*d, p);
    manifest.output(p);
  }
  out << "samples: " << f.samples << " (train " << splits.train.samples.size() << ", validation "
      << splits.validation.samples.size() << ", test " << splits.test.samples.size() << ")\n";
  out << "coarse3 bucket distribution over " << links << " links:";
  out << std::fixed << std::setprecision(1);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    out << " [" << coarse.lower(k) << ", " << coarse.upper(k) << ") "
        << 100.0 * static_cast<double>(counts[k]) / static_cast<double>(std::max<std::size_t>(links, 1)) << "%";
  }
  out << '\n';
  out.unsetf(std::ios::floatfield);
  manifest.write(dir);
}

// ---------------------------------------------------------------- train

struct DataFlags {
  std::string data;
  std::vector<std::string> extra_train;
};

void add_data_flags(CLI::App* app, DataFlags& f) {
  app->add_option("--data", f.data, "Directory with train/validation/test .jsonl files")->required();
  app->add_option("--extra-train", f.extra_train, "Extra training dataset(s) merged into the training split");
}

Dataset training_set(const DataFlags& f, Manifest& manifest) {
  Dataset train = load_split(f.data, Split::kTrain, true);
  manifest.input(fs::path(f.data) / "train.jsonl");
  for (const std::string& extra : f.extra_train) {
    train = merge_datasets(train, read_dataset(extra));
    manifest.input(extra);
  }
  return train;
}

void train_cmd(const CLI::App* app, const ModelFlags& mf, const TrainFlags& tf, const DataFlags& df,
               std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  Manifest manifest(app, seed);
  const gnn::ModelConfig mc = model_config(mf);
  const eval::TrainConfig tc = train_config(mc, tf, seed);
  const Dataset train = training_set(df, manifest);
  const Dataset val = load_split(df.data, Split::kValidation, true);
  const Dataset test = load_split(df.data, Split::kTest, false);
  manifest.input(fs::path(df.data) / "validation.jsonl");

  gnn::SurrogateModel model(mc, seed);
  out << "training " << gnn::to_string(mc.kind) << " (" << model.parameter_count() << " parameters) on "
      << train.samples.size() << " graphs\n";
  const eval::TrainResult result = eval::train(model, train, val, tc);
  out << "best epoch " << result.best_epoch << " of " << result.curves.size()
      << (result.stopped_early ? " (early stop)" : "") << ", validation loss " << result.best_val_loss << '\n';

  const fs::path dir = ensure_dir(out_dir);
  gnn::write_checkpoint(model, train.feature_schema, dir / "model.ckpt");
  eval::write_curves_csv(result.curves, dir / "curves.csv");
  manifest.output(dir / "model.ckpt");
  manifest.output(dir / "curves.csv");

  if (val.samples.empty()) {
    out << "validation split is empty; model selection used the training loss\n";
  } else {
    const eval::MetricsReport val_report = eval::evaluate_model(model, val, tc.buckets);
    eval::write_report(val_report, dir / "validation_report.json");
    manifest.output(dir / "validation_report.json");
    print_metrics(out, "validation", val_report);
  }
  if (!test.samples.empty()) {
    manifest.input(fs::path(df.data) / "test.jsonl");
    const eval::MetricsReport test_report = eval::evaluate_model(model, test, tc.buckets);
    eval::write_report(test_report, dir / "test_report.json");
    eval::write_predictions_csv(test_report, dir / "test_predictions.csv");
    manifest.output(dir / "test_report.json");
    manifest.output(dir / "test_predictions.csv");
    print_metrics(out, "test", test_report);
  }
  manifest.write(dir);
}

// ---------------------------------------------------------------- eval

void eval_cmd(const CLI::App* app, const std::string& checkpoint, const std::string& data_file,
              const std::string& out_dir, std::ostream& out) {
  Manifest manifest(app, 0);
  gnn::Checkpoint ckpt = gnn::read_checkpoint(checkpoint);
  const Dataset data = read_dataset(data_file);
  manifest.input(checkpoint);
  manifest.input(data_file);
  if (data.feature_schema != ckpt.feature_schema) {
    throw SchemaError(schema_diff(ckpt.feature_schema, data.feature_schema));
  }
  const BucketSpec spec = make_spec(ckpt.model.config().buckets);
  const eval::MetricsReport report = eval::evaluate_model(ckpt.model, data, spec);
  const fs::path dir = ensure_dir(out_dir);
  eval::write_report(report, dir / "report.json");
  eval::write_predictions_csv(report, dir / "predictions.csv");
  manifest.output(dir / "report.json");
  manifest.output(dir / "predictions.csv");
  print_metrics(out, "eval", report);
  manifest.write(dir);
}

// ---------------------------------------------------------------- gridsearch

struct GridFlags {
  std::vector<std::size_t> layers{5, 10};
  std::vector<std::size_t> hidden{64};
  std::vector<double> alpha{0.1};
  std::vector<double> theta{1.5};
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

void gridsearch_cmd(const CLI::App* app, const ModelFlags& mf, const TrainFlags& tf, const DataFlags& df,
                    const GridFlags& gf, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  Manifest manifest(app, seed);
  const gnn::ModelConfig base = model_config(mf);
  const eval::TrainConfig tc = train_config(base, tf, seed);
  const Dataset train = training_set(df, manifest);
  const Dataset val = load_split(df.data, Split::kValidation, true);
  if (val.samples.empty()) throw UsageError("grid search needs a non-empty validation split");
  manifest.input(fs::path(df.data) / "validation.jsonl");
  const eval::GridSpec grid{gf.layers, gf.hidden, gf.alpha, gf.theta};
  try {
    grid.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const std::vector<eval::GridResult> results = eval::grid_search(base, grid, train, val, tc, seed, gf.workers);
  const fs::path dir = ensure_dir(out_dir);
  {
    std::ofstream csv(dir / "gridsearch.csv");
    if (!csv) throw Error("cannot write " + (dir / "gridsearch.csv").string());
    csv << std::setprecision(17);
    csv << "rank,model,layers,hidden,alpha,theta,score,best_epoch,best,error\n";
    std::size_t rank = 1;
    for (const eval::GridResult& r : results) {
      csv << rank++ << ',' << gnn::to_string(r.config.kind) << ',' << r.config.depth << ','
          << r.config.hidden << ',' << r.config.alpha << ',' << r.config.theta << ',' << r.score << ','
          << r.training.best_epoch << ',' << (r.best ? 1 : 0) << ",\"" << r.error << "\"\n";
    }
  }
  manifest.output(dir / "gridsearch.csv");
  const char* metric = base.task == gnn::Task::kClassification ? "macro_f1" : "mae_ge10";
  for (const eval::GridResult& r : results) {
    out << "layers=" << r.config.depth << " hidden=" << r.config.hidden << " alpha=" << r.config.alpha
        << " theta=" << r.config.theta << ' ';
    if (r.error.empty()) {
      out << metric << '=' << r.score << (r.best ? "  <- best" : "") << '\n';
    } else {
      out << "failed: " << r.error << '\n';
    }
  }
  if (results.empty() || !results.front().best) {
    throw DivergenceError("every grid configuration failed");
  }
  gnn::write_checkpoint(*results.front().model, train.feature_schema, dir / "best.ckpt");
  manifest.output(dir / "best.ckpt");
  manifest.write(dir);
}

// ---------------------------------------------------------------- plot

void plot_cmd(const CLI::App* app, const std::string& report_path, const std::string& out_dir,
              std::ostream& out) {
  Manifest manifest(app, 0);
  if (!fs::exists(report_path)) throw UsageError("metrics report not found: " + report_path);
  const eval::MetricsReport report = eval::read_report(report_path);
  manifest.input(report_path);
  if (report.links.empty()) throw UsageError("metrics report has no link predictions");

  const fs::path dir = ensure_dir(out_dir);
  std::vector<plot::XY> pts;
  {
    std::ofstream csv(dir / "pred_vs_true.csv");
    if (!csv) throw Error("cannot write " + (dir / "pred_vs_true.csv").string());
    csv << std::setprecision(17) << "graph_id,link,true_flow,predicted_flow\n";
    for (const eval::LinkPrediction& l : report.links) {
      pts.push_back({l.target, l.predicted});
      csv << l.graph_id << ',' << l.link << ',' << l.target << ',' << l.predicted << '\n';
    }
  }
  plot::ScatterOptions scatter;
  scatter.title = "Predicted vs true flow";
  scatter.x_label = "true flow (veh/h)";
  scatter.y_label = "predicted flow (veh/h)";
  scatter.reference = plot::Line{1.0, 0.0};
  scatter.equal_axes = true;
  plot::write_text_file(dir / "pred_vs_true.svg", plot::scatter_svg(pts, scatter));

  const eval::SizeErrorAnalysis size = eval::error_vs_graph_size(report);
  std::vector<plot::XY> size_pts;
  {
    std::ofstream csv(dir / "error_vs_size.csv");
    if (!csv) throw Error("cannot write " + (dir / "error_vs_size.csv").string());
    csv << std::setprecision(17) << "num_nodes,mae_ge10\n";
    for (const eval::SizePoint& p : size.points) {
      size_pts.push_back({p.num_nodes, p.mae});
      csv << p.num_nodes << ',' << p.mae << '\n';
    }
  }
  std::ostringstream note;
  note << std::setprecision(4) << "slope " << size.slope << " veh/h per node, r = " << size.correlation;
  plot::ScatterOptions size_opts;
  size_opts.title = "MAE (true flow >= 10) vs graph size";
  size_opts.x_label = "road nodes";
  size_opts.y_label = "MAE (veh/h)";
  size_opts.fit = plot::Line{size.slope, size.intercept};
  size_opts.annotation = note.str();
  plot::write_text_file(dir / "error_vs_size.svg", plot::scatter_svg(size_pts, size_opts));

  for (const char* name : {"pred_vs_true.svg", "pred_vs_true.csv", "error_vs_size.svg", "error_vs_size.csv"}) {
    manifest.output(dir / name);
  }
  out << "plotted " << report.links.size() << " links and " << size.points.size() << " graphs; "
      << note.str() << '\n';
  manifest.write(dir);
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

void write_json_atomic(const json& j, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << std::setw(2) << j << '\n';
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path) return args;
  std::ifstream in(*config_path);
  if (!in) throw UsageError("cannot open config file " + *config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + *config_path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must contain a JSON object");
  // Drop command-line occurrences of keys the config sets, values included.
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      const std::string key = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
      if (key != "config" && j.contains(key)) {
        if (a.find('=') == std::string::npos) {
          while (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) ++i;
        }
        continue;
      }
    }
    out.push_back(a);
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "config") throw UsageError("config files cannot nest --config");
    out.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const json& v : value) joined += (joined.empty() ? "" : ",") + json_scalar(v);
      out.push_back(joined);
    } else {
      out.push_back(json_scalar(value));
    }
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic traffic-flow data generation and graph neural network surrogates", "flowgnn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FLOWGNN_VERSION);

  std::string config_file;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON object of flag values overriding the command line");
  };

  GenDataFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "Generate and label synthetic networks");
  gen_cmd->add_option("--samples", gen.samples, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--min-nodes", gen.min_nodes, "Smallest target node count")->capture_default_str();
  gen_cmd->add_option("--max-nodes", gen.max_nodes, "Largest target node count")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--workers", gen.workers, "Generation threads")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--train-fraction", gen.train_fraction)->capture_default_str();
  gen_cmd->add_option("--val-fraction", gen.val_fraction)->capture_default_str();
  gen_cmd->add_option("--test-fraction", gen.test_fraction)->capture_default_str();
  gen_cmd->add_option("--zones-per-node", gen.zones_per_node)->capture_default_str();
  gen_cmd->add_option("--lookahead", gen.lookahead, "Candidates examined per routing step")->capture_default_str();
  add_config(gen_cmd);

  ModelFlags model;
  TrainFlags training;
  DataFlags data;
  std::uint64_t seed = 0;
  std::string out_dir;

  CLI::App* train_app = app.add_subcommand("train", "Train a surrogate model");
  add_model_flags(train_app, model);
  add_train_flags(train_app, training);
  add_data_flags(train_app, data);
  train_app->add_option("--seed", seed, "Random seed")->capture_default_str();
  train_app->add_option("--out", out_dir, "Output directory")->required();
  add_config(train_app);

  std::string checkpoint;
  std::string eval_data;
  CLI::App* eval_app = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset file");
  eval_app->add_option("--checkpoint", checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  eval_app->add_option("--data", eval_data, "Dataset .jsonl file")->required()->check(CLI::ExistingFile);
  eval_app->add_option("--out", out_dir, "Output directory")->required();
  add_config(eval_app);

  GridFlags grid;
  CLI::App* grid_app = app.add_subcommand("gridsearch", "Grid search over depth, width, alpha and theta");
  add_model_flags(grid_app, model);
  add_train_flags(grid_app, training);
  add_data_flags(grid_app, data);
  grid_app->add_option("--grid-layers", grid.layers)->delimiter(',')->capture_default_str();
  grid_app->add_option("--grid-hidden", grid.hidden)->delimiter(',')->capture_default_str();
  grid_app->add_option("--grid-alpha", grid.alpha)->delimiter(',')->capture_default_str();
  grid_app->add_option("--grid-theta", grid.theta)->delimiter(',')->capture_default_str();
  grid_app->add_option("--workers", grid.workers, "Concurrent training runs")->check(CLI::PositiveNumber);
  grid_app->add_option("--seed", seed, "Random seed")->capture_default_str();
  grid_app->add_option("--out", out_dir, "Output directory")->required();
  add_config(grid_app);

  std::string report_path;
  CLI::App* plot_app = app.add_subcommand("plot", "Scatter plots from a metrics report");
  plot_app->add_option("--report", report_path, "Metrics report JSON")->required();
  plot_app->add_option("--out", out_dir, "Output directory")->required();
  add_config(plot_app);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (gen_cmd->parsed()) {
      gen_data(gen_cmd, gen, out);
    } else if (train_app->parsed()) {
      train_cmd(train_app, model, training, data, seed, out_dir, out);
    } else if (eval_app->parsed()) {
      eval_cmd(eval_app, checkpoint, eval_data, out_dir, out);
    } else if (grid_app->parsed()) {
      gridsearch_cmd(grid_app, model, training, data, grid, seed, out_dir, out);
    } else if (plot_app->parsed()) {
      plot_cmd(plot_app, report_path, out_dir, out);
    }
    return kExitOk;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace flowgnn::cli
