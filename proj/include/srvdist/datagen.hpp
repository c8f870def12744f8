#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srvdist/curve.hpp"
#include "srvdist/quotient.hpp"

namespace srvdist {

struct PairRecord {
  Curve a;
  Curve b;
  double label = 0.0;
};

struct DatasetMeta {
  Eigen::Index d = 1;
  Eigen::Index n = 0;
  Topology topology = Topology::Open;
  Method labeler = Method::Exact;
  unsigned long long seed = 0;
  std::string generator;
};

struct PairDataset {
  std::vector<PairRecord> records;
  DatasetMeta meta;
};

// Synthetic function generator: extrema count drawn from N(mu, sigma),
// alternating extrema values, constant-speed representative composed with a
// random reparametrization.
struct GenParams {
  double mu = 18.0;
  double sigma = 6.0;
  Eigen::Index n = 90;
  double value_lo = 0.0;
  double value_hi = 1.0;
  double reparam_roughness = 1.0;
};

using Rng = std::mt19937_64;

Curve gen_synthetic_function(const GenParams& p, Rng& rng);

// Gamma-increment random element of the reparametrization semi-group;
// roughness -> 0 concentrates at the identity, large roughness produces
// adversarial mass concentration.
Reparam random_reparam(Eigen::Index n_knots, double roughness, Rng& rng);

MatrixXd random_rotation(Eigen::Index d, Rng& rng);

struct AugmentOptions {
  double roughness = 1.0;
  bool rotate = true;        // d >= 2 only
  bool shift_seam = true;    // closed curves only
};

// Shape-preserving augmentation: per-curve random resampling, rotation and
// seam shift; the distance label is carried over unchanged.
PairRecord augment_pair(const PairRecord& r, Rng& rng, const AugmentOptions& opts = {});

struct LabelOptions {
  ShapeDistanceConfig config;
  int workers = 1;
  std::optional<size_t> max_pairs;  // cap on all-pairs enumeration
};

// Labels all C(n,2) pairs of the given curves (or an explicit pair list)
// with the configured matcher. Pairs whose labeling throws are skipped and
// reported, never zero-labeled.
PairDataset build_labeled_dataset(const std::vector<Curve>& curves, const LabelOptions& opts,
                                  std::vector<std::string>* skipped = nullptr);
PairDataset build_labeled_dataset(std::vector<PairRecord> pairs, const LabelOptions& opts,
                                  std::vector<std::string>* skipped = nullptr);

}  // namespace srvdist
