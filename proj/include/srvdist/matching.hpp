#pragma once

#include <utility>
#include <vector>

#include "srvdist/curve.hpp"

namespace srvdist {

// Monotone lattice path over the breakpoint grid of two SRV functions,
// together with the matched (clamped) energy E. A path encodes a pair of
// generalized reparametrizations simultaneously.
struct MatchingPath {
  std::vector<std::pair<int, int>> nodes;  // (0,0) .. (m,n), monotone
  double energy = 0.0;

  void validate(int m, int n) const;
};

// Shared matching-grid state: breakpoint coordinates of both functions and
// the table of pairwise inner products between their values.
struct MatchGrid {
  VectorXd x;    // q1 breakpoints, size m+1
  VectorXd y;    // q2 breakpoints, size n+1
  MatrixXd ip;   // m x n, <q1_r, q2_s>

  MatchGrid(const SrvFunction& q1, const SrvFunction& q2);

  int m() const { return static_cast<int>(ip.rows()); }
  int n() const { return static_cast<int>(ip.cols()); }
};

// Visits every grid cell crossed by the straight segment from node (i,j) to
// node (k,l), reporting the segment's horizontal/vertical extents inside the
// cell. Extents below 1e-15 are dropped.
template <class Fn>
void walk_edge(const VectorXd& x, const VectorXd& y, int i, int j, int k, int l, Fn&& fn) {
  constexpr double kTiny = 1e-15;
  const double x0 = x[i], y0 = y[j];
  const double dx = x[k] - x0, dy = y[l] - y0;
  if (dx <= kTiny || dy <= kTiny) return;  // horizontal/vertical: no cell area
  int r = i, s = j;
  double t = 0.0;
  while (r < k || s < l) {
    // parameter at which the segment leaves the current cell
    const double tx = r + 1 <= k ? (x[r + 1] - x0) / dx : 2.0;
    const double ty = s + 1 <= l ? (y[s + 1] - y0) / dy : 2.0;
    const double tn = std::min(1.0, std::min(tx, ty));
    const double ex = (tn - t) * dx, ey = (tn - t) * dy;
    if (ex > kTiny && ey > kTiny) fn(r, s, ex, ey);
    t = tn;
    if (tx <= tn + kTiny && r < k) ++r;
    if (ty <= tn + kTiny && s < l) ++s;
    if (tn >= 1.0) break;
  }
}

// Positive-part matched energy of the straight edge (i,j)->(k,l):
// sum over crossed cells of max(<q1_r,q2_s>, 0) * sqrt(ex * ey).
double edge_weight(const MatchGrid& grid, int i, int j, int k, int l);
double edge_weight(const SrvFunction& q1, const SrvFunction& q2, int i, int j, int k, int l);

// Piecewise-linear (gamma1, gamma2) realizing the path on a common
// parameter, with horizontal/vertical detours inserted across cells whose
// inner product is negative.
std::pair<Reparam, Reparam> path_to_reparams(const MatchingPath& p, const SrvFunction& q1,
                                             const SrvFunction& q2);

}  // namespace srvdist
