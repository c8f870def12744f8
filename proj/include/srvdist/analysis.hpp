#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srvdist/datagen.hpp"

namespace srvdist {

struct EvalReport {
  double mre = 0.0;
  double pearson = 0.0;
  size_t n_cases = 0;
  size_t n_floored = 0;  // labels below the relative-error floor
  std::vector<double> labels;
  std::vector<double> predictions;
  std::vector<double> relative_errors;
};

// Mean of |pred - label| / max(label, floor); floor <= 0 selects the default
// 1e-6 * max label.
double mre(const std::vector<double>& labels, const std::vector<double>& preds,
           double floor = 0.0, size_t* n_floored = nullptr);

double pearson(const std::vector<double>& labels, const std::vector<double>& preds);

EvalReport evaluate(const std::vector<double>& labels, const std::vector<double>& preds,
                    double floor = 0.0);

// Classical multidimensional scaling: eigen-embedding of the double-centered
// squared-distance matrix. Rows of the result are k-dimensional coordinates.
MatrixXd cmds(const MatrixXd& dist, Eigen::Index k);

struct BenchRow {
  std::string method;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  int reps = 0;
  size_t pairs = 0;
};

using DistanceFn = std::function<double(const PairRecord&)>;
// Per-pair throughput path: evaluates a whole batch at once, returns one
// distance per record (used for the nn method).
using BatchDistanceFn = std::function<std::vector<double>(const std::vector<PairRecord>&)>;

BenchRow bench_per_pair(const std::string& name, const DistanceFn& fn,
                        const std::vector<PairRecord>& pairs, int reps);
BenchRow bench_batch(const std::string& name, const BatchDistanceFn& fn,
                     const std::vector<PairRecord>& pairs, int reps);

std::string format_bench_table(const std::vector<BenchRow>& rows);

}  // namespace srvdist
