#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "srvdist/exact_match.hpp"
#include "srvdist/quotient.hpp"

using namespace srvdist;
using testutil::random_curve;
using testutil::random_srv;

namespace {

MatrixXd rot2(double th) {
  MatrixXd o(2, 2);
  o << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return o;
}

// Reparametrization whose output knots refine the curve's own grid, so the
// warped polyline is the same point set.
Reparam refining_reparam(Eigen::Index n_curve, Topology topo, std::mt19937_64& rng) {
  const Eigen::Index m = topo == Topology::Open ? n_curve - 1 : n_curve;
  std::vector<double> outs;
  for (Eigen::Index i = 0; i <= m; ++i) outs.push_back(static_cast<double>(i) / m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int e = 0; e < 7; ++e) outs.push_back(u(rng));
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  Reparam g;
  g.knots_out = Eigen::Map<VectorXd>(outs.data(), static_cast<Eigen::Index>(outs.size()));
  g.knots_in = VectorXd::LinSpaced(g.knots_out.size(), 0.0, 1.0);
  return g;
}

Curve warp_closed(const Curve& c, const Reparam& g) {
  Curve out;
  out.topology = Topology::Closed;
  out.points.resize(c.dim(), g.knots_in.size() - 1);
  for (Eigen::Index j = 0; j + 1 < g.knots_in.size(); ++j)
    out.points.col(j) = eval_curve(c, g(g.knots_in[j]));
  return out;
}

}  // namespace

TEST_CASE("haar rotations are proper orthogonal") {
  std::mt19937_64 rng(41);
  for (Eigen::Index d : {1, 2, 3, 5}) {
    for (int rep = 0; rep < 10; ++rep) {
      const MatrixXd o = haar_rotation(d, rng);
      CHECK((o * o.transpose() - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(o.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("procrustes rotation beats a dense angle sweep (d=2)") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const SrvFunction q1 = random_srv(2, 8, rng), q2 = random_srv(2, 7, rng);
    const MatchingPath p = precise_match(q1, q2);
    const MatrixXd o = optimal_rotation(q1, q2, p);
    CHECK((o * o.transpose() - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(o.determinant() == doctest::Approx(1.0).epsilon(1e-10));

    // unclamped bilinear energy along the path as a function of the rotation
    const MatchGrid grid(q1, q2);
    MatrixXd m = MatrixXd::Zero(2, 2);
    for (size_t s = 0; s + 1 < p.nodes.size(); ++s)
      walk_edge(grid.x, grid.y, p.nodes[s].first, p.nodes[s].second, p.nodes[s + 1].first,
                p.nodes[s + 1].second, [&](int r, int c, double ex, double ey) {
                  m += std::sqrt(ex * ey) * q1.values.col(r) * q2.values.col(c).transpose();
                });
    const double opt = (o.transpose() * m).trace();
    double sweep = -1e300;
    for (int a = 0; a < 20000; ++a)
      sweep = std::max(sweep, (rot2(2.0 * M_PI * a / 20000.0).transpose() * m).trace());
    CHECK(opt >= sweep - 1e-9);
    CHECK(opt <= sweep + 1e-5 * std::abs(opt) + 1e-7);
  }
}

TEST_CASE("exact quotient distance vanishes on reparametrized+rotated copies (open)") {
  std::mt19937_64 rng(43);
  for (Eigen::Index d : {1, 2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Curve c1 = random_curve(d, 9, rng);
      const Reparam g = refining_reparam(c1.size(), Topology::Open, rng);
      Curve c2 = apply_reparam(c1, g);
      if (d >= 2) c2 = apply_rotation(c2, haar_rotation(d, rng));
      c2.points.colwise() += VectorXd::Ones(d);  // translation is modded out
      const auto res = shape_distance(c1, c2);
      CHECK(res.distance < 1e-6);
    }
  }
}

TEST_CASE("closed quotient distance vanishes on shifted+warped+rotated copies") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 5; ++rep) {
    const Curve c1 = random_curve(2, 8, rng, Topology::Closed);
    const Reparam g = refining_reparam(c1.size(), Topology::Closed, rng);
    Curve c2 = warp_closed(c1, g);
    c2 = apply_shift(c2, 1 + rep % (c2.size() - 1));
    c2 = apply_rotation(c2, haar_rotation(2, rng));
    const auto res = shape_distance(c1, c2);
    CHECK(res.distance < 1e-6);
  }
}

TEST_CASE("pure rotation is recovered") {
  std::mt19937_64 rng(45);
  for (int rep = 0; rep < 6; ++rep) {
    const Curve c1 = random_curve(2, 10, rng);
    const MatrixXd o = rot2(0.3 + 0.5 * rep);
    const Curve c2 = apply_rotation(c1, o);
    const auto res = shape_distance(c1, c2);
    CHECK(res.distance < 1e-7);
    // the reported rotation maps c2's srv back onto c1's
    CHECK(dq_distance(c1, normalize_translation(apply_rotation(c2, res.rotation))) < 1e-6);
  }
}

TEST_CASE("pure seam shift is recovered for closed curves") {
  std::mt19937_64 rng(46);
  const Curve c1 = random_curve(2, 9, rng, Topology::Closed);
  for (Eigen::Index k : {1, 3, 6}) {
    const Curve c2 = apply_shift(c1, k);
    const auto res = shape_distance(c1, c2);
    CHECK(res.distance < 1e-7);
    // undoing the reported shift on c2 reproduces c1's traversal start
    const Curve undone = apply_shift(c2, res.shift);
    CHECK(dq_distance(c1, undone) < 1e-6);
  }
}

TEST_CASE("quotient distance symmetry (exact)") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 6; ++rep) {
    const Curve a = random_curve(2, 10, rng), b = random_curve(2, 10, rng);
    const double dab = shape_distance(a, b).distance;
    const double dba = shape_distance(b, a).distance;
    CHECK(dab == doctest::Approx(dba).epsilon(1e-8));
  }
}

TEST_CASE("quotient distance is bounded by the parametrized distance") {
  std::mt19937_64 rng(48);
  for (int rep = 0; rep < 10; ++rep) {
    const Curve a = random_curve(2, 10, rng), b = random_curve(2, 10, rng);
    CHECK(shape_distance(a, b).distance <=
          dq_distance(normalize_translation(a), normalize_translation(b)) + 1e-10);
  }
}

TEST_CASE("rotation can be disabled") {
  std::mt19937_64 rng(49);
  const Curve a = random_curve(2, 10, rng);
  const Curve b = apply_rotation(a, rot2(1.2));
  ShapeDistanceConfig cfg;
  cfg.quotient.with_rotation = false;
  const double frozen = shape_distance(a, b, cfg).distance;
  const double free = shape_distance(a, b).distance;
  CHECK(free < 1e-7);
  CHECK(frozen > 1e-3);  // a genuinely rotated copy stays far without alignment
}
