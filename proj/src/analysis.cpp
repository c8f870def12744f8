#include "srvdist/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace srvdist {

double mre(const std::vector<double>& labels, const std::vector<double>& preds, double floor,
           size_t* n_floored) {
  if (labels.empty() || labels.size() != preds.size())
    throw std::invalid_argument("mre needs equal-length nonempty inputs");
  if (floor <= 0.0)
    floor = 1e-6 * *std::max_element(labels.begin(), labels.end());
  double acc = 0.0;
  size_t floored = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < floor) ++floored;
    acc += std::abs(preds[i] - labels[i]) / std::max(labels[i], floor);
  }
  if (n_floored) *n_floored = floored;
  return acc / static_cast<double>(labels.size());
}

double pearson(const std::vector<double>& labels, const std::vector<double>& preds) {
  const size_t n = labels.size();
  if (n < 2 || preds.size() != n)
    throw std::invalid_argument("pearson needs two series of equal length >= 2");
  const double my = std::accumulate(labels.begin(), labels.end(), 0.0) / n;
  const double mp = std::accumulate(preds.begin(), preds.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = labels[i] - my, b = preds[i] - mp;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("undefined correlation");
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

EvalReport evaluate(const std::vector<double>& labels, const std::vector<double>& preds,
                    double floor) {
  EvalReport rep;
  rep.labels = labels;
  rep.predictions = preds;
  rep.n_cases = labels.size();
  rep.mre = mre(labels, preds, floor, &rep.n_floored);
  rep.pearson = pearson(labels, preds);
  if (floor <= 0.0) floor = 1e-6 * *std::max_element(labels.begin(), labels.end());
  rep.relative_errors.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i)
    rep.relative_errors.push_back(std::abs(preds[i] - labels[i]) / std::max(labels[i], floor));
  return rep;
}

MatrixXd cmds(const MatrixXd& dist, Eigen::Index k) {
  const Eigen::Index n = dist.rows();
  if (dist.cols() != n) throw std::invalid_argument("distance matrix must be square");
  if (k > n) throw std::invalid_argument("target dimension exceeds point count");
  if ((dist - dist.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("distance matrix must be symmetric");

  const MatrixXd d2 = dist.array().square();
  const MatrixXd j = MatrixXd::Identity(n, n) - MatrixXd::Constant(n, n, 1.0 / n);
  const MatrixXd b = -0.5 * j * d2 * j;

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  // eigenvalues ascending; take the top-k nonnegative ones
  if (eig.eigenvalues()(n - 1) <= 0.0) throw std::runtime_error("non-embeddable");

  MatrixXd coords = MatrixXd::Zero(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index idx = n - 1 - c;
    const double lambda = eig.eigenvalues()(idx);
    if (lambda <= 0.0) break;  // remaining axes stay zero
    VectorXd axis = eig.eigenvectors().col(idx) * std::sqrt(lambda);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (axis[r] != 0.0) {
        if (axis[r] < 0.0) axis = -axis;
        break;
      }
    }
    coords.col(c) = axis;
  }
  return coords;
}

namespace {

BenchRow summarize(const std::string& name, std::vector<double>& ms, int reps, size_t pairs) {
  BenchRow row;
  row.method = name;
  row.reps = reps;
  row.pairs = pairs;
  row.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
  std::sort(ms.begin(), ms.end());
  row.median_ms = ms[ms.size() / 2];
  return row;
}

}  // namespace

BenchRow bench_per_pair(const std::string& name, const DistanceFn& fn,
                        const std::vector<PairRecord>& pairs, int reps) {
  std::vector<double> ms;
  volatile double sink = 0.0;
  for (const PairRecord& p : pairs) {
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      sink = sink + fn(p);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    ms.push_back(*std::min_element(times.begin(), times.end()));
  }
  return summarize(name, ms, reps, pairs.size());
}

BenchRow bench_batch(const std::string& name, const BatchDistanceFn& fn,
                     const std::vector<PairRecord>& pairs, int reps) {
  std::vector<double> ms;
  volatile double sink = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> out = fn(pairs);
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + out.back();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count() / pairs.size());
  }
  return summarize(name, ms, reps, pairs.size());
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "method      median_ms      mean_ms   reps  pairs\n";
  for (const BenchRow& r : rows) {
    os.setf(std::ios::fixed);
    os.precision(4);
    os.width(6);
    os << r.method;
    os.width(14);
    os << r.median_ms;
    os.width(13);
    os << r.mean_ms;
    os.width(7);
    os << r.reps;
    os.width(7);
    os << r.pairs << "\n";
  }
  return os.str();
}

}  // namespace srvdist
