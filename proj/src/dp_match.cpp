#include "srvdist/dp_match.hpp"

#include <cmath>

#include "srvdist/quotient.hpp"

namespace srvdist {

MatchingPath dp_match(const SrvFunction& q1, const SrvFunction& q2, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const MatchGrid grid(q1, q2);
  const int m = grid.m(), n = grid.n();

  const int cols = n + 1;
  std::vector<double> best(static_cast<size_t>(m + 1) * cols, -1.0);
  std::vector<int> pred(static_cast<size_t>(m + 1) * cols, -1);
  const auto id = [cols](int i, int j) { return i * cols + j; };
  best[id(0, 0)] = 0.0;

  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= n; ++l) {
      if (k == 0 && l == 0) continue;
      double e = -1.0;
      int p = -1;
      const auto consider = [&](int i, int j, double w) {
        const double base = best[id(i, j)];
        if (base < 0.0) return;
        const double cand = base + w;
        if (cand > e) {
          e = cand;
          p = id(i, j);
        }
      };
      for (int i = std::max(0, k - window); i < k; ++i) {
        for (int j = std::max(0, l - window); j < l; ++j)
          consider(i, j, edge_weight(grid, i, j, k, l));
        if (i == k - 1) consider(i, l, 0.0);
      }
      if (l >= 1) consider(k, l - 1, 0.0);
      best[id(k, l)] = e;
      pred[id(k, l)] = p;
    }
  }

  MatchingPath path;
  path.energy = best[id(m, n)];
  for (int cur = id(m, n); cur >= 0; cur = pred[cur])
    path.nodes.emplace_back(cur / cols, cur % cols);
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.validate(m, n);
  return path;
}

ShapeDistanceResult dp_distance(const Curve& c1, const Curve& c2, const DpOptions& opts) {
  Curve a = c1, b = c2;
  if (opts.n_resample > 0) {
    a = resample_uniform(a, opts.n_resample);
    b = resample_uniform(b, opts.n_resample);
  }
  const int window = opts.window;
  const Matcher matcher = [window](const SrvFunction& q1, const SrvFunction& q2) {
    return dp_match(q1, q2, window);
  };
  QuotientOptions qopts;
  qopts.with_rotation = opts.with_rotation;
  qopts.seeds = opts.seeds;
  ShapeDistanceResult res = a.topology == Topology::Closed
                                ? closed_distance(a, b, matcher, qopts)
                                : alternate_rotation_match(a, b, matcher, qopts);
  res.method = Method::Dp;
  return res;
}

}  // namespace srvdist
