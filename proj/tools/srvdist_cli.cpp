// srvdist command-line driver: generation, labeling, distances, training,
// prediction, evaluation, clustering and benchmarking.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "srvdist/analysis.hpp"
#include "srvdist/datagen.hpp"
#include "srvdist/dp_match.hpp"
#include "srvdist/exact_match.hpp"
#include "srvdist/io.hpp"
#include "srvdist/network.hpp"
#include "srvdist/quotient.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srvdist;

namespace {

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

Topology parse_topology(const std::string& s) {
  if (s == "open") return Topology::Open;
  if (s == "closed") return Topology::Closed;
  throw CLI::ValidationError("--topology", "must be open or closed");
}

Method parse_method(const std::string& s) {
  if (s == "exact") return Method::Exact;
  if (s == "dp") return Method::Dp;
  if (s == "nn") return Method::Nn;
  throw CLI::ValidationError("--method", "must be exact, dp or nn");
}

// Random curve in R^d assembled from d independent synthetic coordinate
// functions (d=1 reduces to the plain generator).
Curve gen_curve(const GenParams& p, Eigen::Index d, Topology topology, Rng& rng) {
  Curve c;
  c.topology = topology;
  c.points.resize(d, p.n);
  for (Eigen::Index r = 0; r < d; ++r)
    c.points.row(r) = gen_synthetic_function(p, rng).points.row(0);
  if (topology == Topology::Closed && d >= 2) {
    // close smoothly: blend the tail into the head over the last quarter
    const Eigen::Index n = p.n;
    const VectorXd gap = c.points.col(n - 1) - c.points.col(0);
    for (Eigen::Index i = 0; i < n; ++i)
      c.points.col(i) -= gap * (static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return c;
}

std::vector<fs::path> list_curve_files(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".crv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .crv files in " + dir);
  return files;
}

int cmd_gen(const std::string& out_dir, const GenParams& p, Eigen::Index d,
            const std::string& topology, int count, unsigned long long seed) {
  fs::create_directories(out_dir);
  Rng rng(seed);
  const Topology topo = parse_topology(topology);
  for (int i = 0; i < count; ++i) {
    const Curve c = gen_curve(p, d, topo, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "curve_%05d.crv", i);
    write_curve_file(c, (fs::path(out_dir) / name).string());
  }
  std::cout << "wrote " << count << " curves to " << out_dir << "\n";
  return 0;
}

int cmd_label(const std::string& in_dir, const std::string& out_path, const std::string& method,
              int workers, long long max_pairs, int window, Eigen::Index resample,
              bool no_rotation, int checkpoint_every, unsigned long long seed,
              const std::string& command_line) {
  const auto files = list_curve_files(in_dir);
  std::vector<Curve> curves;
  for (const auto& f : files) curves.push_back(parse_curve_file(f.string()));

  ShapeDistanceConfig cfg;
  cfg.method = parse_method(method);
  cfg.quotient.with_rotation = !no_rotation;
  cfg.dp_window = window;
  cfg.dp_resample = resample;

  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < curves.size() && (max_pairs < 0 || (long long)pairs.size() < max_pairs);
       ++i)
    for (size_t j = i + 1;
         j < curves.size() && (max_pairs < 0 || (long long)pairs.size() < max_pairs); ++j)
      pairs.push_back({i, j});

  // resumable labeling: labels (null = skipped) checkpointed to <out>.part
  const std::string part_path = out_path + ".part";
  json labels = json::array();
  if (fs::exists(part_path)) {
    std::ifstream in(part_path);
    json part = json::parse(in);
    if (part.value("command", "") == command_line) {
      labels = part["labels"];
      std::cerr << "resuming from " << part_path << " (" << labels.size() << " labels)\n";
    }
  }

  size_t skipped = 0;
  for (size_t p = labels.size(); p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    try {
      labels.push_back(shape_distance(curves[i], curves[j], cfg).distance);
    } catch (const std::exception& e) {
      std::cerr << "skip pair (" << i << "," << j << "): " << e.what() << "\n";
      labels.push_back(nullptr);
      ++skipped;
    }
    if (checkpoint_every > 0 && ((p + 1) % checkpoint_every == 0)) {
      std::ofstream out(part_path);
      out << json{{"command", command_line}, {"labels", labels}} << "\n";
    }
  }

  PairDataset ds;
  ds.meta.d = curves[0].dim();
  ds.meta.n = curves[0].size();
  ds.meta.topology = curves[0].topology;
  ds.meta.labeler = cfg.method;
  ds.meta.seed = seed;
  ds.meta.generator = in_dir;
  for (size_t p = 0; p < pairs.size(); ++p) {
    if (labels[p].is_null()) continue;
    ds.records.push_back({curves[pairs[p].first], curves[pairs[p].second],
                          labels[p].get<double>()});
  }
  (void)workers;
  write_manifest(ds, out_path, command_line);
  fs::remove(part_path);
  std::cout << "labeled " << ds.records.size() << " pairs (" << skipped << " skipped) -> "
            << out_path << "\n";
  return 0;
}

int cmd_distance(const std::string& path_a, const std::string& path_b, const std::string& method,
                 bool no_rotation, int window, Eigen::Index resample, const std::string& model,
                 bool verbose) {
  const Curve a = parse_curve_file(path_a);
  const Curve b = parse_curve_file(path_b);
  const Method m = parse_method(method);
  double dist = 0.0;
  if (m == Method::Nn) {
    if (model.empty()) throw std::runtime_error("--method nn requires --model");
    const NetworkParams params = load_checkpoint(model);
    dist = forward(params, a, b);
    std::cout.precision(12);
    std::cout << dist << "\n";
    return 0;
  }
  ShapeDistanceConfig cfg;
  cfg.method = m;
  cfg.quotient.with_rotation = !no_rotation;
  cfg.dp_window = window;
  cfg.dp_resample = resample;
  const ShapeDistanceResult res = shape_distance(a, b, cfg);
  std::cout.precision(12);
  std::cout << res.distance << "\n";
  if (verbose) {
    std::cout << "energy " << res.energy << "\niterations " << res.iterations << "\nshift "
              << res.shift << "\nrotation\n"
              << res.rotation << "\n";
  }
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& out_model,
              const std::string& out_history, int epochs, int batch, double holdout,
              bool no_augment, double roughness, unsigned long long seed,
              const std::string& command_line) {
  const PairDataset ds = parse_manifest(data_path);
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch;
  cfg.holdout_fraction = holdout;
  cfg.augment = !no_augment;
  cfg.augment_opts.roughness = roughness;
  cfg.seed = seed;
  const TrainResult result = train(ds, cfg);
  save_checkpoint(result.params, out_model, command_line);
  if (!out_history.empty()) write_history(result.history, out_history, command_line);
  std::cout << "final train mse " << result.history.train_mse.back();
  if (!result.history.test_mse.empty())
    std::cout << ", holdout mse " << result.history.test_mse.back();
  std::cout << "\nwrote " << out_model << "\n";
  return 0;
}

int cmd_predict(const std::string& data_path, const std::string& model_path,
                const std::string& out_path, const std::string& command_line) {
  const PairDataset ds = parse_manifest(data_path);
  const NetworkParams params = load_checkpoint(model_path);
  const std::vector<double> preds = predict_batch(params, ds.records);
  write_manifest_with_predictions(ds, preds, out_path, command_line);
  std::cout << "wrote " << preds.size() << " predictions -> " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& data_path, const std::string& out_path,
             const std::string& command_line) {
  const PairDataset ds = parse_manifest(data_path);
  const std::vector<double> preds = parse_manifest_predictions(data_path);
  std::vector<double> labels;
  for (const auto& r : ds.records) labels.push_back(r.label);
  const EvalReport rep = evaluate(labels, preds);
  std::cout.precision(6);
  std::cout << "n_cases  " << rep.n_cases << "\nmre      " << rep.mre << "\npearson  "
            << rep.pearson << "\nfloored  " << rep.n_floored << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << json{{"format_version", 1},
                {"command", command_line},
                {"n_cases", rep.n_cases},
                {"mre", rep.mre},
                {"pearson", rep.pearson},
                {"n_floored", rep.n_floored}}
        << "\n";
  }
  return 0;
}

int cmd_cluster(const std::string& matrix_path, const std::string& out_path, Eigen::Index k) {
  std::ifstream in(matrix_path);
  if (!in) throw std::runtime_error("cannot open " + matrix_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw std::runtime_error("distance matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = rows[i][j];
  }
  const MatrixXd coords = cmds(dist, k);
  std::ofstream out(out_path);
  out.precision(17);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) out << (c ? " " : "") << coords(i, c);
    out << "\n";
  }
  std::cout << "wrote " << n << " embedding rows -> " << out_path << "\n";
  return 0;
}

int cmd_bench(Eigen::Index n, Eigen::Index d, int n_pairs, int reps, int window,
              const std::string& model_path, unsigned long long seed) {
  Rng rng(seed);
  GenParams gp;
  gp.n = n;
  std::vector<PairRecord> pairs;
  for (int i = 0; i < n_pairs; ++i)
    pairs.push_back({gen_curve(gp, d, Topology::Open, rng), gen_curve(gp, d, Topology::Open, rng),
                     0.0});

  NetworkParams net;
  if (!model_path.empty()) {
    net = load_checkpoint(model_path);
  } else {
    Arch arch;
    arch.n = n;
    arch.d = d;
    net = NetworkParams::init(arch, seed);
  }

  std::vector<BenchRow> table;
  table.push_back(bench_per_pair(
      "exact",
      [](const PairRecord& p) { return exact_distance_open(p.a, p.b, true).distance; }, pairs,
      reps));
  table.push_back(bench_per_pair(
      "dp",
      [&](const PairRecord& p) {
        DpOptions o;
        o.n_resample = 0;
        o.window = window;
        return dp_distance(p.a, p.b, o).distance;
      },
      pairs, reps));
  table.push_back(bench_batch(
      "nn", [&](const std::vector<PairRecord>& ps) { return predict_batch(net, ps); }, pairs,
      reps));
  std::cout << format_bench_table(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastic shape distances for curves: exact, windowed-DP and learned"};
  app.require_subcommand(1);
  const std::string command_line = join_argv(argc, argv);

  unsigned long long seed = 1;
  app.add_option("--seed", seed, "global random seed")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic curves");
  GenParams gp;
  Eigen::Index gen_d = 1;
  int gen_count = 100;
  std::string gen_out = "curves", gen_topology = "open";
  gen->add_option("--mu", gp.mu, "mean extrema count")->capture_default_str();
  gen->add_option("--sigma", gp.sigma, "extrema count std dev")->capture_default_str();
  gen->add_option("--n", gp.n, "samples per curve")->capture_default_str();
  gen->add_option("--d", gen_d, "ambient dimension")->capture_default_str();
  gen->add_option("--count", gen_count, "number of curves")->capture_default_str();
  gen->add_option("--roughness", gp.reparam_roughness, "reparametrization roughness")
      ->capture_default_str();
  gen->add_option("--topology", gen_topology, "open|closed")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();

  // label
  auto* label = app.add_subcommand("label", "label all curve pairs with a matcher");
  std::string label_in = "curves", label_out = "dataset.json", label_method = "exact";
  int label_workers = 1, label_window = 6, label_ckpt = 500;
  long long label_max = -1;
  Eigen::Index label_resample = 0;
  bool label_norot = false;
  label->add_option("--in", label_in, "curve directory")->capture_default_str();
  label->add_option("--out", label_out, "manifest path")->capture_default_str();
  label->add_option("--method", label_method, "exact|dp")->capture_default_str();
  label->add_option("--workers", label_workers, "worker count")->capture_default_str();
  label->add_option("--max-pairs", label_max, "cap on pair count (-1: all)")
      ->capture_default_str();
  label->add_option("--window", label_window, "dp window")->capture_default_str();
  label->add_option("--resample", label_resample, "dp resampling (0: keep)")
      ->capture_default_str();
  label->add_flag("--no-rotation", label_norot, "skip rotation optimization");
  label->add_option("--checkpoint-every", label_ckpt, "labels per progress checkpoint")
      ->capture_default_str();

  // distance
  auto* dist = app.add_subcommand("distance", "distance between two curve files");
  std::string dist_a, dist_b, dist_method = "exact", dist_model;
  int dist_window = 6;
  Eigen::Index dist_resample = 0;
  bool dist_norot = false, dist_verbose = false;
  dist->add_option("a", dist_a, "first curve file")->required();
  dist->add_option("b", dist_b, "second curve file")->required();
  dist->add_option("--method", dist_method, "exact|dp|nn")->capture_default_str();
  dist->add_flag("--no-rotation", dist_norot, "skip rotation optimization");
  dist->add_option("--window", dist_window, "dp window")->capture_default_str();
  dist->add_option("--resample", dist_resample, "dp resampling (0: keep)")
      ->capture_default_str();
  dist->add_option("--model", dist_model, "checkpoint for --method nn");
  dist->add_flag("--verbose", dist_verbose, "print energy/rotation/shift");

  // train
  auto* tr = app.add_subcommand("train", "train the distance regressor");
  std::string train_data = "dataset.json", train_model = "model.ckpt", train_history;
  int train_epochs = 100, train_batch = 32;
  double train_holdout = 0.1, train_rough = 1.0;
  bool train_noaug = false;
  tr->add_option("--data", train_data, "labeled manifest")->capture_default_str();
  tr->add_option("--out", train_model, "checkpoint path")->capture_default_str();
  tr->add_option("--history", train_history, "per-epoch loss file");
  tr->add_option("--epochs", train_epochs, "training epochs")->capture_default_str();
  tr->add_option("--batch", train_batch, "batch size")->capture_default_str();
  tr->add_option("--holdout", train_holdout, "holdout fraction")->capture_default_str();
  tr->add_flag("--no-augment", train_noaug, "disable augmentation");
  tr->add_option("--roughness", train_rough, "augmentation roughness")->capture_default_str();

  // predict
  auto* pr = app.add_subcommand("predict", "append predictions to a manifest");
  std::string pred_data = "dataset.json", pred_model = "model.ckpt",
              pred_out = "predictions.json";
  pr->add_option("--data", pred_data, "manifest")->capture_default_str();
  pr->add_option("--model", pred_model, "checkpoint")->capture_default_str();
  pr->add_option("--out", pred_out, "output manifest")->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "score a manifest with predictions");
  std::string eval_data = "predictions.json", eval_out;
  ev->add_option("--data", eval_data, "manifest with predictions")->capture_default_str();
  ev->add_option("--out", eval_out, "machine-readable report");

  // cluster
  auto* cl = app.add_subcommand("cluster", "CMDS embedding of a distance matrix");
  std::string cl_matrix = "dist.txt", cl_out = "coords.txt";
  Eigen::Index cl_k = 2;
  cl->add_option("--matrix", cl_matrix, "text distance matrix")->capture_default_str();
  cl->add_option("--out", cl_out, "coordinate file")->capture_default_str();
  cl->add_option("-k", cl_k, "embedding dimension")->capture_default_str();

  // bench
  auto* be = app.add_subcommand("bench", "timing table for the three methods");
  Eigen::Index bench_n = 100, bench_d = 2;
  int bench_pairs = 10, bench_reps = 3, bench_window = 6;
  std::string bench_model;
  be->add_option("--n", bench_n, "samples per curve")->capture_default_str();
  be->add_option("--d", bench_d, "ambient dimension")->capture_default_str();
  be->add_option("--pairs", bench_pairs, "number of random pairs")->capture_default_str();
  be->add_option("--reps", bench_reps, "repetitions per pair")->capture_default_str();
  be->add_option("--window", bench_window, "dp window")->capture_default_str();
  be->add_option("--model", bench_model, "checkpoint for the nn row");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_out, gp, gen_d, gen_topology, gen_count, seed);
    if (label->parsed())
      return cmd_label(label_in, label_out, label_method, label_workers, label_max, label_window,
                       label_resample, label_norot, label_ckpt, seed, command_line);
    if (dist->parsed())
      return cmd_distance(dist_a, dist_b, dist_method, dist_norot, dist_window, dist_resample,
                          dist_model, dist_verbose);
    if (tr->parsed())
      return cmd_train(train_data, train_model, train_history, train_epochs, train_batch,
                       train_holdout, train_noaug, train_rough, seed, command_line);
    if (pr->parsed()) return cmd_predict(pred_data, pred_model, pred_out, command_line);
    if (ev->parsed()) return cmd_eval(eval_data, eval_out, command_line);
    if (cl->parsed()) return cmd_cluster(cl_matrix, cl_out, cl_k);
    if (be->parsed())
      return cmd_bench(bench_n, bench_d, bench_pairs, bench_reps, bench_window, bench_model,
                       seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
