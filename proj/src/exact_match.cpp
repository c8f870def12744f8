#include "srvdist/exact_match.hpp"

#include <cmath>
#include <numeric>

#include "srvdist/quotient.hpp"

namespace srvdist {

void MatchingPath::validate(int m, int n) const {
  if (nodes.empty() || nodes.front() != std::make_pair(0, 0) ||
      nodes.back() != std::make_pair(m, n))
    throw std::invalid_argument("path must run from (0,0) to (m,n)");
  for (size_t t = 1; t < nodes.size(); ++t) {
    const auto [i, j] = nodes[t - 1];
    const auto [k, l] = nodes[t];
    if (k < i || l < j || (k == i && l == j))
      throw std::invalid_argument("path not monotone");
  }
}

MatchGrid::MatchGrid(const SrvFunction& q1, const SrvFunction& q2) {
  q1.validate();
  q2.validate();
  if (q1.dim() != q2.dim()) throw std::invalid_argument("dimension mismatch");
  x = q1.breakpoints;
  y = q2.breakpoints;
  ip.noalias() = q1.values.transpose() * q2.values;
}

double edge_weight(const MatchGrid& grid, int i, int j, int k, int l) {
  if (k < i || l < j || (k == i && l == j))
    throw std::invalid_argument("non-monotone edge");
  double w = 0.0;
  walk_edge(grid.x, grid.y, i, j, k, l, [&](int r, int s, double ex, double ey) {
    const double g = grid.ip(r, s);
    if (g > 0.0) w += g * std::sqrt(ex * ey);
  });
  return w;
}

double edge_weight(const SrvFunction& q1, const SrvFunction& q2, int i, int j, int k, int l) {
  return edge_weight(MatchGrid(q1, q2), i, j, k, l);
}

namespace {

bool is_uniform(const VectorXd& bp) {
  const Eigen::Index m = bp.size() - 1;
  for (Eigen::Index i = 0; i <= m; ++i)
    if (std::abs(bp[i] - static_cast<double>(i) / static_cast<double>(m)) > 1e-12) return false;
  return true;
}

// gcd(di,dj) == 1 table; on uniform grids a non-coprime jump passes through
// another grid node and can be split without changing its weight.
std::vector<std::vector<char>> coprime_table(int a, int b) {
  std::vector<std::vector<char>> t(a + 1, std::vector<char>(b + 1, 0));
  for (int di = 1; di <= a; ++di)
    for (int dj = 1; dj <= b; ++dj) t[di][dj] = std::gcd(di, dj) == 1 ? 1 : 0;
  return t;
}

}  // namespace

MatchingPath precise_match(const SrvFunction& q1, const SrvFunction& q2) {
  const MatchGrid grid(q1, q2);
  const int m = grid.m(), n = grid.n();
  const bool prune = is_uniform(grid.x) && is_uniform(grid.y);
  const auto coprime = prune ? coprime_table(m, n) : std::vector<std::vector<char>>{};

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
        if (cand > e) {  // ties keep the lexicographically smallest predecessor
          e = cand;
          p = id(i, j);
        }
      };
      for (int i = 0; i < k; ++i) {
        const double x0 = grid.x[i], dx = grid.x[k] - grid.x[i];
        for (int j = 0; j < l; ++j) {
          if (prune && !coprime[k - i][l - j]) continue;
          // inlined walk over cells crossed by the segment (i,j)->(k,l)
          double w = 0.0;
          {
            const double y0 = grid.y[j], dy = grid.y[l] - y0;
            int r = i, s = j;
            double t = 0.0;
            while (r < k || s < l) {
              const double tx = r + 1 <= k ? (grid.x[r + 1] - x0) / dx : 2.0;
              const double ty = s + 1 <= l ? (grid.y[s + 1] - y0) / dy : 2.0;
              const double tn = std::min(1.0, std::min(tx, ty));
              const double g = grid.ip(r, s);
              if (g > 0.0) {
                const double ex = (tn - t) * dx, ey = (tn - t) * dy;
                if (ex > 1e-15 && ey > 1e-15) w += g * std::sqrt(ex * ey);
              }
              t = tn;
              if (tx <= tn + 1e-15 && r < k) ++r;
              if (ty <= tn + 1e-15 && s < l) ++s;
              if (tn >= 1.0) break;
            }
          }
          consider(i, j, w);
        }
        if (i == k - 1) consider(i, l, 0.0);  // horizontal unit step
      }
      if (l >= 1) consider(k, l - 1, 0.0);  // vertical unit step
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

std::pair<Reparam, Reparam> path_to_reparams(const MatchingPath& p, const SrvFunction& q1,
                                             const SrvFunction& q2) {
  const MatchGrid grid(q1, q2);
  p.validate(grid.m(), grid.n());
  std::vector<double> arc{0.0}, g1{0.0}, g2{0.0};
  double a = 0.0;
  const auto push = (([&](double xv, double yv) {
    a += (xv - g1.back()) + (yv - g2.back());
    arc.push_back(a);
    g1.push_back(xv);
    g2.push_back(yv);
  }));
  for (size_t t = 1; t < p.nodes.size(); ++t) {
    const auto [i, j] = p.nodes[t - 1];
    const auto [k, l] = p.nodes[t];
    if (k == i || l == j) {
      push(grid.x[k], grid.y[l]);
      continue;
    }
    double xc = grid.x[i], yc = grid.y[j];
    walk_edge(grid.x, grid.y, i, j, k, l, [&](int r, int s, double ex, double ey) {
      if (grid.ip(r, s) >= 0.0) {
        xc += ex;
        yc += ey;
        push(xc, yc);
      } else {
        // detour: exhaust the horizontal extent first, then the vertical,
        // so the negative cell contributes nothing to the cross term
        xc += ex;
        push(xc, yc);
        yc += ey;
        push(xc, yc);
      }
    });
    if (std::abs(xc - grid.x[k]) > 1e-12 || std::abs(yc - grid.y[l]) > 1e-12) {
      push(grid.x[k], grid.y[l]);
    } else {  // absorb float drift from the walk
      g1.back() = grid.x[k];
      g2.back() = grid.y[l];
    }
  }
  const double total = arc.back();
  Reparam r1, r2;
  const Eigen::Index nk = static_cast<Eigen::Index>(arc.size());
  r1.knots_in.resize(nk);
  r2.knots_in.resize(nk);
  r1.knots_out = Eigen::Map<const VectorXd>(g1.data(), nk);
  r2.knots_out = Eigen::Map<const VectorXd>(g2.data(), nk);
  for (Eigen::Index i = 0; i < nk; ++i) r1.knots_in[i] = arc[static_cast<size_t>(i)] / total;
  r1.knots_in[nk - 1] = 1.0;
  r2.knots_in = r1.knots_in;
  r1.knots_out[nk - 1] = 1.0;
  r2.knots_out[nk - 1] = 1.0;
  r1.validate();
  r2.validate();
  return {r1, r2};
}

ShapeDistanceResult exact_distance_open(const Curve& c1, const Curve& c2, bool with_rotation) {
  if (c1.topology != Topology::Open || c2.topology != Topology::Open)
    throw std::invalid_argument("exact_distance_open requires open curves (use closed_distance)");
  QuotientOptions opts;
  opts.with_rotation = with_rotation;
  ShapeDistanceResult res = alternate_rotation_match(c1, c2, &precise_match, opts);
  res.method = Method::Exact;
  return res;
}

}  // namespace srvdist
