#include "srvdist/quotient.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "srvdist/dp_match.hpp"
#include "srvdist/exact_match.hpp"

namespace srvdist {

MatrixXd haar_rotation(Eigen::Index d, std::mt19937_64& rng) {
  if (d == 1) return MatrixXd::Ones(1, 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (d == 2) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    const double a = uni(rng);
    MatrixXd o(2, 2);
    o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return o;
  }
  MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

MatrixXd optimal_rotation(const SrvFunction& q1, const SrvFunction& q2, const MatchingPath& p,
                          bool* degenerate) {
  const Eigen::Index d = q1.dim();
  if (degenerate) *degenerate = false;
  if (d == 1) return MatrixXd::Ones(1, 1);
  const MatchGrid grid(q1, q2);
  p.validate(grid.m(), grid.n());
  MatrixXd cross = MatrixXd::Zero(d, d);
  for (size_t t = 1; t < p.nodes.size(); ++t) {
    const auto [i, j] = p.nodes[t - 1];
    const auto [k, l] = p.nodes[t];
    walk_edge(grid.x, grid.y, i, j, k, l, [&](int r, int s, double ex, double ey) {
      cross.noalias() += std::sqrt(ex * ey) * q1.values.col(r) * q2.values.col(s).transpose();
    });
  }
  Eigen::JacobiSVD<MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (degenerate && svd.singularValues()(d - 1) < 1e-12 * (svd.singularValues()(0) + 1e-300))
    *degenerate = true;
  VectorXd diag = VectorXd::Ones(d);
  diag(d - 1) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * diag.asDiagonal() * svd.matrixV().transpose();
}

namespace {

SrvFunction rotated(const SrvFunction& q, const MatrixXd& o) {
  SrvFunction out = q;
  out.values = o * q.values;
  return out;
}

std::vector<MatrixXd> rotation_seeds(Eigen::Index d, const QuotientOptions& opts) {
  std::vector<MatrixXd> seeds;
  if (d == 1 || !opts.with_rotation) {
    seeds.push_back(MatrixXd::Identity(d, d));
    return seeds;
  }
  if (d == 2) {
    for (int s = 0; s < opts.seeds; ++s) {
      const double a = 2.0 * M_PI * s / opts.seeds;
      MatrixXd o(2, 2);
      o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      seeds.push_back(o);
    }
    return seeds;
  }
  seeds.push_back(MatrixXd::Identity(d, d));
  std::mt19937_64 rng(opts.seed_rng);
  for (int s = 1; s < opts.seeds; ++s) seeds.push_back(haar_rotation(d, rng));
  return seeds;
}

// Block alternation on SRV representatives; returns the best result across
// rotation seeds. Energy is nondecreasing within each alternation: a
// rotation step that fails to improve the clamped energy ends the loop.
ShapeDistanceResult alternate_srv(const SrvFunction& q1, const SrvFunction& q2,
                                  const Matcher& matcher, const QuotientOptions& opts) {
  const Eigen::Index d = q1.dim();
  ShapeDistanceResult best;
  best.energy = -1.0;
  for (const MatrixXd& seed : rotation_seeds(d, opts)) {
    MatrixXd o = seed, o_used = seed;
    double e_prev = -1.0;
    MatchingPath path;
    int iters = 0;
    bool degenerate = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      MatchingPath cand = matcher(q1, rotated(q2, o));
      ++iters;
      if (cand.energy < e_prev) break;  // clamped objective regressed; keep previous
      path = cand;
      o_used = o;
      const double gain = cand.energy - e_prev;
      e_prev = cand.energy;
      if (d == 1 || !opts.with_rotation || gain < opts.tol) break;
      o = optimal_rotation(q1, q2, path, &degenerate);
    }
    if (e_prev > best.energy) {
      best.energy = e_prev;
      best.rotation = o_used;
      best.path = path;
      best.iterations = iters;
      best.degenerate_rotation = degenerate;
    }
  }
  best.q1_sqnorm = q1.squared_norm();
  best.q2_sqnorm = q2.squared_norm();
  double d2 = best.q1_sqnorm + best.q2_sqnorm - 2.0 * best.energy;
  // the three summands cancel exactly for identical shapes; snap residual
  // rounding noise below the inputs' precision to zero
  if (d2 < 1e-13 * (best.q1_sqnorm + best.q2_sqnorm)) d2 = 0.0;
  best.distance = std::sqrt(d2);
  return best;
}

}  // namespace

ShapeDistanceResult alternate_rotation_match(const Curve& c1, const Curve& c2,
                                             const Matcher& matcher, const QuotientOptions& opts) {
  if (c1.topology != Topology::Open || c2.topology != Topology::Open)
    throw std::invalid_argument("alternate_rotation_match requires open curves");
  if (c1.dim() != c2.dim()) throw std::invalid_argument("dimension mismatch");
  return alternate_srv(srv(c1), srv(c2), matcher, opts);
}

ShapeDistanceResult closed_distance(const Curve& c1, const Curve& c2, const Matcher& matcher,
                                    const QuotientOptions& opts) {
  if (c1.topology != Topology::Closed || c2.topology != Topology::Closed)
    throw std::invalid_argument("closed_distance requires closed curves");
  if (c1.dim() != c2.dim()) throw std::invalid_argument("dimension mismatch");
  const SrvFunction q1 = srv(c1);
  ShapeDistanceResult best;
  bool have = false;
  for (Eigen::Index k = 0; k < c2.size(); ++k) {
    ShapeDistanceResult res = alternate_srv(q1, srv(apply_shift(c2, k)), matcher, opts);
    res.shift = k;
    if (!have || res.distance < best.distance) {
      best = res;
      have = true;
    }
  }
  return best;
}

ShapeDistanceResult shape_distance(const Curve& c1, const Curve& c2,
                                   const ShapeDistanceConfig& config) {
  if (c1.topology != c2.topology) throw std::invalid_argument("topology mismatch");
  if (c1.dim() != c2.dim()) throw std::invalid_argument("dimension mismatch");
  Matcher matcher;
  switch (config.method) {
    case Method::Exact:
      matcher = &precise_match;
      break;
    case Method::Dp: {
      const int window = config.dp_window;
      matcher = [window](const SrvFunction& a, const SrvFunction& b) {
        return dp_match(a, b, window);
      };
      break;
    }
    default:
      throw std::invalid_argument("shape_distance supports exact and dp methods");
  }
  Curve a = c1, b = c2;
  if (config.method == Method::Dp && config.dp_resample > 0) {
    a = resample_uniform(a, config.dp_resample);
    b = resample_uniform(b, config.dp_resample);
  }
  ShapeDistanceResult res = a.topology == Topology::Closed
                                ? closed_distance(a, b, matcher, config.quotient)
                                : alternate_rotation_match(a, b, matcher, config.quotient);
  res.method = config.method;
  return res;
}

}  // namespace srvdist
