#pragma once

#include <functional>
#include <random>

#include "srvdist/matching.hpp"

namespace srvdist {

enum class Method { Exact, Dp, Nn };

struct ShapeDistanceResult {
  double distance = 0.0;
  MatrixXd rotation;          // d x d proper orthogonal
  Eigen::Index shift = 0;     // seam index, closed curves only
  MatchingPath path;
  Method method = Method::Exact;
  int iterations = 0;
  double energy = 0.0;
  double q1_sqnorm = 0.0;
  double q2_sqnorm = 0.0;
  bool degenerate_rotation = false;
};

using Matcher = std::function<MatchingPath(const SrvFunction&, const SrvFunction&)>;

// Haar-uniform proper rotation (d=1: scalar 1).
MatrixXd haar_rotation(Eigen::Index d, std::mt19937_64& rng);

// Procrustes maximizer of the unclamped bilinear energy along the path:
// M = sum of sqrt(ex*ey) q1_r q2_s^T over matched cells, O = U diag(1,..,det(UV^T)) V^T.
MatrixXd optimal_rotation(const SrvFunction& q1, const SrvFunction& q2, const MatchingPath& p,
                          bool* degenerate = nullptr);

struct QuotientOptions {
  int seeds = 8;
  double tol = 1e-8;
  int max_iter = 50;
  bool with_rotation = true;
  unsigned long long seed_rng = 12345;  // Haar seeds for d >= 3
};

// Joint matching/rotation optimization by block alternation from multiple
// rotation seeds; open curves.
ShapeDistanceResult alternate_rotation_match(const Curve& c1, const Curve& c2,
                                             const Matcher& matcher,
                                             const QuotientOptions& opts = {});

// Closed curves: exhaustive seam search over c2's vertices, alternation per
// candidate shift, minimum over shifts.
ShapeDistanceResult closed_distance(const Curve& c1, const Curve& c2, const Matcher& matcher,
                                    const QuotientOptions& opts = {});

struct ShapeDistanceConfig {
  Method method = Method::Exact;
  QuotientOptions quotient;
  Eigen::Index dp_resample = 0;  // 0: keep the input sampling
  int dp_window = 6;
};

// Full shape-space distance: dispatches on topology and method.
ShapeDistanceResult shape_distance(const Curve& c1, const Curve& c2,
                                   const ShapeDistanceConfig& config = {});

}  // namespace srvdist
