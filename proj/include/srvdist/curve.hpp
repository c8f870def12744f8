#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace srvdist {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Topology { Open, Closed };

// Polyline in R^d, one point per column. Closed curves do not repeat the
// first point; the closing segment is points.col(n-1) -> points.col(0).
// Open curves use the uniform parameter grid i/(n-1), closed curves i/n.
struct Curve {
  MatrixXd points;  // d x n
  Topology topology = Topology::Open;

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }

  void validate() const;
};

// Piecewise-constant R^d valued function on [0,1]: values.col(i) holds on
// (breakpoints[i], breakpoints[i+1]).
struct SrvFunction {
  VectorXd breakpoints;  // m+1, strictly increasing, 0 to 1
  MatrixXd values;       // d x m

  Eigen::Index dim() const { return values.rows(); }
  Eigen::Index intervals() const { return values.cols(); }

  double squared_norm() const;
  void validate() const;
};

// Piecewise-linear nondecreasing map of [0,1] onto itself.
struct Reparam {
  VectorXd knots_in;
  VectorXd knots_out;

  double operator()(double t) const;
  void validate() const;

  static Reparam identity(Eigen::Index n_knots = 2);
};

Curve normalize_translation(const Curve& c);
Curve normalize_scale(const Curve& c);  // optional unit-length pre-normalization
Curve resample_uniform(const Curve& c, Eigen::Index n);

double polyline_length(const Curve& c);

// Evaluate the polyline at parameter t in [0,1] under the uniform grid
// convention (closed curves wrap).
VectorXd eval_curve(const Curve& c, double t);

SrvFunction srv(const Curve& c);
// SRV of a polyline with an explicit (possibly non-uniform) parameter grid.
SrvFunction srv_with_knots(const MatrixXd& points, const VectorXd& knots);
Curve srv_inverse(const SrvFunction& q, const VectorXd& basepoint);

double l2_distance(const SrvFunction& q1, const SrvFunction& q2);
double dq_distance(const Curve& c1, const Curve& c2);

Curve apply_reparam(const Curve& c, const Reparam& g);
Curve apply_reparam(const Curve& c, const Reparam& g, const VectorXd& out_grid);
Reparam compose_reparam(const Reparam& outer, const Reparam& inner);

Curve apply_rotation(const Curve& c, const MatrixXd& rot);
Curve apply_shift(const Curve& c, Eigen::Index k);

}  // namespace srvdist
