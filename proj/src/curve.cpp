#include "srvdist/curve.hpp"

#include <cmath>

namespace srvdist {

namespace {

Eigen::Index min_points(Topology t) { return t == Topology::Open ? 2 : 3; }

// Segment vectors of the polyline; closed curves include the wrap segment.
MatrixXd segment_deltas(const Curve& c) {
  const Eigen::Index n = c.size();
  const Eigen::Index m = c.topology == Topology::Open ? n - 1 : n;
  MatrixXd d(c.dim(), m);
  for (Eigen::Index i = 0; i < m; ++i)
    d.col(i) = c.points.col((i + 1) % n) - c.points.col(i);
  return d;
}

}  // namespace

void Curve::validate() const {
  if (points.cols() < min_points(topology))
    throw std::invalid_argument("curve has too few points");
  if (!points.allFinite())
    throw std::invalid_argument("curve has non-finite coordinates");
}

double SrvFunction::squared_norm() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < intervals(); ++i)
    s += values.col(i).squaredNorm() * (breakpoints[i + 1] - breakpoints[i]);
  return s;
}

void SrvFunction::validate() const {
  if (intervals() < 1) throw std::invalid_argument("empty SRV function");
  if (breakpoints.size() != intervals() + 1)
    throw std::invalid_argument("SRV breakpoint/value count mismatch");
  if (breakpoints[0] != 0.0 || breakpoints[breakpoints.size() - 1] != 1.0)
    throw std::invalid_argument("SRV breakpoints must span [0,1]");
  for (Eigen::Index i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw std::invalid_argument("SRV breakpoints not strictly increasing");
}

double Reparam::operator()(double t) const {
  const Eigen::Index n = knots_in.size();
  if (t <= knots_in[0]) return knots_out[0];
  if (t >= knots_in[n - 1]) return knots_out[n - 1];
  // binary search for the knot interval containing t
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    Eigen::Index mid = (lo + hi) / 2;
    (knots_in[mid] <= t ? lo : hi) = mid;
  }
  const double w = knots_in[hi] - knots_in[lo];
  if (w <= 0.0) return knots_out[lo];
  const double a = (t - knots_in[lo]) / w;
  return knots_out[lo] + a * (knots_out[hi] - knots_out[lo]);
}

void Reparam::validate() const {
  const Eigen::Index n = knots_in.size();
  if (n < 2 || knots_out.size() != n)
    throw std::invalid_argument("reparam needs matching knot lists, length >= 2");
  if (knots_in[0] != 0.0 || knots_in[n - 1] != 1.0 || knots_out[0] != 0.0 ||
      knots_out[n - 1] != 1.0)
    throw std::invalid_argument("reparam knots must span [0,1]");
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(knots_in[i] < knots_in[i + 1]))
      throw std::invalid_argument("reparam input knots not increasing");
    if (knots_out[i + 1] < knots_out[i])
      throw std::invalid_argument("reparam output knots decreasing");
  }
}

Reparam Reparam::identity(Eigen::Index n_knots) {
  Reparam g;
  g.knots_in = VectorXd::LinSpaced(n_knots, 0.0, 1.0);
  g.knots_out = g.knots_in;
  return g;
}

Curve normalize_translation(const Curve& c) {
  c.validate();
  Curve out = c;
  out.points.colwise() -= VectorXd(c.points.col(0));
  return out;
}

Curve normalize_scale(const Curve& c) {
  const double len = polyline_length(c);
  if (len <= 0.0) throw std::invalid_argument("degenerate curve");
  Curve out = c;
  out.points /= len;
  return out;
}

double polyline_length(const Curve& c) {
  return segment_deltas(c).colwise().norm().sum();
}

VectorXd eval_curve(const Curve& c, double t) {
  const Eigen::Index n = c.size();
  if (c.topology == Topology::Open) {
    if (t <= 0.0) return c.points.col(0);
    if (t >= 1.0) return c.points.col(n - 1);
    const double u = t * static_cast<double>(n - 1);
    const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 2);
    const double a = u - static_cast<double>(i);
    return c.points.col(i) + a * (c.points.col(i + 1) - c.points.col(i));
  }
  double tw = t - std::floor(t);
  const double u = tw * static_cast<double>(n);
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 1);
  const double a = u - static_cast<double>(i);
  return c.points.col(i) + a * (c.points.col((i + 1) % n) - c.points.col(i));
}

Curve resample_uniform(const Curve& c, Eigen::Index n) {
  c.validate();
  if (n < min_points(c.topology))
    throw std::invalid_argument("resample target too small");
  const MatrixXd deltas = segment_deltas(c);
  const Eigen::Index m = deltas.cols();
  VectorXd cumlen(m + 1);
  cumlen[0] = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) cumlen[i + 1] = cumlen[i] + deltas.col(i).norm();
  const double total = cumlen[m];
  if (total <= 0.0) throw std::invalid_argument("degenerate curve");

  Curve out;
  out.topology = c.topology;
  out.points.resize(c.dim(), n);
  const double denom = c.topology == Topology::Open ? static_cast<double>(n - 1)
                                                    : static_cast<double>(n);
  Eigen::Index seg = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double target = total * static_cast<double>(k) / denom;
    while (seg + 1 < m && cumlen[seg + 1] < target) ++seg;
    const double seglen = cumlen[seg + 1] - cumlen[seg];
    const double a = seglen > 0.0 ? (target - cumlen[seg]) / seglen : 0.0;
    out.points.col(k) =
        c.points.col(seg) + std::clamp(a, 0.0, 1.0) * deltas.col(seg);
  }
  return out;
}

SrvFunction srv(const Curve& c) {
  c.validate();
  const MatrixXd deltas = segment_deltas(c);
  const Eigen::Index m = deltas.cols();
  SrvFunction q;
  q.breakpoints = VectorXd::LinSpaced(m + 1, 0.0, 1.0);
  q.values.resize(c.dim(), m);
  const double h = 1.0 / static_cast<double>(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double len = deltas.col(i).norm();
    q.values.col(i) =
        len > 0.0 ? VectorXd(deltas.col(i) / std::sqrt(len * h)) : VectorXd::Zero(c.dim());
  }
  return q;
}

SrvFunction srv_with_knots(const MatrixXd& points, const VectorXd& knots) {
  const Eigen::Index m = points.cols() - 1;
  if (knots.size() != m + 1)
    throw std::invalid_argument("knot count must match point count");
  SrvFunction q;
  q.breakpoints = knots;
  q.values.resize(points.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const VectorXd d = points.col(i + 1) - points.col(i);
    const double len = d.norm();
    const double h = knots[i + 1] - knots[i];
    q.values.col(i) =
        (len > 0.0 && h > 0.0) ? VectorXd(d / std::sqrt(len * h)) : VectorXd::Zero(points.rows());
  }
  q.validate();
  return q;
}

Curve srv_inverse(const SrvFunction& q, const VectorXd& basepoint) {
  q.validate();
  const Eigen::Index m = q.intervals();
  Curve c;
  c.topology = Topology::Open;
  c.points.resize(q.dim(), m + 1);
  c.points.col(0) = basepoint;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double h = q.breakpoints[i + 1] - q.breakpoints[i];
    c.points.col(i + 1) = c.points.col(i) + q.values.col(i) * q.values.col(i).norm() * h;
  }
  return c;
}

double l2_distance(const SrvFunction& q1, const SrvFunction& q2) {
  if (q1.dim() != q2.dim()) throw std::invalid_argument("dimension mismatch");
  // integrate |q1 - q2|^2 exactly on the merged breakpoint grid
  double acc = 0.0;
  Eigen::Index i = 0, j = 0;
  double t = 0.0;
  while (t < 1.0) {
    const double next = std::min(q1.breakpoints[i + 1], q2.breakpoints[j + 1]);
    acc += (q1.values.col(i) - q2.values.col(j)).squaredNorm() * (next - t);
    t = next;
    if (q1.breakpoints[i + 1] <= t && i + 1 < q1.intervals()) ++i;
    if (q2.breakpoints[j + 1] <= t && j + 1 < q2.intervals()) ++j;
    if (t >= 1.0) break;
  }
  return std::sqrt(std::max(acc, 0.0));
}

double dq_distance(const Curve& c1, const Curve& c2) {
  if (c1.topology != c2.topology)
    throw std::invalid_argument("mixed open/closed topology");
  return l2_distance(srv(c1), srv(c2));
}

Curve apply_reparam(const Curve& c, const Reparam& g, const VectorXd& out_grid) {
  c.validate();
  g.validate();
  if (c.topology != Topology::Open)
    throw std::invalid_argument("apply_reparam expects an open curve");
  Curve out;
  out.topology = Topology::Open;
  out.points.resize(c.dim(), out_grid.size());
  for (Eigen::Index j = 0; j < out_grid.size(); ++j)
    out.points.col(j) = eval_curve(c, g(out_grid[j]));
  return out;
}

Curve apply_reparam(const Curve& c, const Reparam& g) {
  return apply_reparam(c, g, g.knots_in);
}

Reparam compose_reparam(const Reparam& outer, const Reparam& inner) {
  outer.validate();
  inner.validate();
  // knots: inner's input knots plus preimages of outer's input knots
  std::vector<double> ts(inner.knots_in.data(), inner.knots_in.data() + inner.knots_in.size());
  for (Eigen::Index k = 0; k < outer.knots_in.size(); ++k) {
    const double target = outer.knots_in[k];
    for (Eigen::Index i = 0; i + 1 < inner.knots_in.size(); ++i) {
      const double a = inner.knots_out[i], b = inner.knots_out[i + 1];
      if (a < target && target < b) {
        const double t = inner.knots_in[i] +
                         (target - a) / (b - a) * (inner.knots_in[i + 1] - inner.knots_in[i]);
        ts.push_back(t);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  Reparam out;
  out.knots_in = Eigen::Map<const VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  out.knots_out.resize(out.knots_in.size());
  for (Eigen::Index i = 0; i < out.knots_in.size(); ++i)
    out.knots_out[i] = outer(inner(out.knots_in[i]));
  out.knots_out[out.knots_out.size() - 1] = 1.0;
  return out;
}

Curve apply_rotation(const Curve& c, const MatrixXd& rot) {
  c.validate();
  if (rot.rows() != c.dim() || rot.cols() != c.dim())
    throw std::invalid_argument("rotation dimension mismatch");
  Curve out = c;
  out.points = rot * c.points;
  return out;
}

Curve apply_shift(const Curve& c, Eigen::Index k) {
  c.validate();
  if (c.topology != Topology::Closed)
    throw std::invalid_argument("seam shift requires a closed curve");
  const Eigen::Index n = c.size();
  k = ((k % n) + n) % n;
  Curve out = c;
  for (Eigen::Index i = 0; i < n; ++i) out.points.col(i) = c.points.col((i + k) % n);
  return out;
}

}  // namespace srvdist
