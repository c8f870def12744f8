#pragma once

#include <random>

#include "srvdist/curve.hpp"

namespace srvdist::testutil {

inline Curve random_curve(Eigen::Index d, Eigen::Index n, std::mt19937_64& rng,
                          Topology topology = Topology::Open) {
  std::normal_distribution<double> g(0.0, 1.0);
  Curve c;
  c.topology = topology;
  c.points.resize(d, n);
  // random walk so consecutive points differ at every scale
  for (Eigen::Index r = 0; r < d; ++r) {
    double acc = g(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      c.points(r, i) = acc;
      acc += 0.3 * g(rng);
    }
  }
  return c;
}

// Step function with the given number of intervals on a random strictly
// increasing breakpoint grid (uniform if asked).
inline SrvFunction random_srv(Eigen::Index d, Eigen::Index m, std::mt19937_64& rng,
                              bool uniform_grid = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  SrvFunction q;
  q.breakpoints.resize(m + 1);
  if (uniform_grid) {
    for (Eigen::Index i = 0; i <= m; ++i)
      q.breakpoints[i] = static_cast<double>(i) / static_cast<double>(m);
  } else {
    q.breakpoints[0] = 0.0;
    for (Eigen::Index i = 1; i <= m; ++i) q.breakpoints[i] = q.breakpoints[i - 1] + u(rng);
    q.breakpoints /= q.breakpoints[m];
    q.breakpoints[m] = 1.0;
  }
  q.values.resize(d, m);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index i = 0; i < m; ++i) q.values(r, i) = g(rng);
  return q;
}

}  // namespace srvdist::testutil
