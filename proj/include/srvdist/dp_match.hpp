#pragma once

#include "srvdist/matching.hpp"

namespace srvdist {

struct ShapeDistanceResult;

// Windowed dynamic-programming approximation: max-energy path whose
// diagonal steps satisfy 1 <= di <= K, 1 <= dj <= K, with weight-0 unit
// horizontal/vertical steps keeping (m,n) reachable. Searches a subset of
// precise_match's paths, so its energy is a lower bound (distance an
// over-estimate).
MatchingPath dp_match(const SrvFunction& q1, const SrvFunction& q2, int window);

struct DpOptions {
  Eigen::Index n_resample = 100;
  int window = 6;
  bool with_rotation = true;
  int seeds = 8;
};

ShapeDistanceResult dp_distance(const Curve& c1, const Curve& c2, const DpOptions& opts = {});

}  // namespace srvdist
