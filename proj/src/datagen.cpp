#include "srvdist/datagen.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace srvdist {

namespace {

double eval_pl(const VectorXd& knots, const VectorXd& vals, double t) {
  const Eigen::Index n = knots.size();
  if (t <= knots[0]) return vals[0];
  if (t >= knots[n - 1]) return vals[n - 1];
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    Eigen::Index mid = (lo + hi) / 2;
    (knots[mid] <= t ? lo : hi) = mid;
  }
  const double w = knots[hi] - knots[lo];
  if (w <= 0.0) return vals[lo];
  return vals[lo] + (t - knots[lo]) / w * (vals[hi] - vals[lo]);
}

}  // namespace

Curve gen_synthetic_function(const GenParams& p, Rng& rng) {
  if (p.mu <= 0.0 || p.sigma < 0.0 || p.n < 2) throw std::invalid_argument("bad GenParams");
  std::normal_distribution<double> count(p.mu, p.sigma);
  std::uniform_real_distribution<double> value(p.value_lo, p.value_hi);
  const Eigen::Index k = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::llround(count(rng))), 2, p.n - 1);

  VectorXd extrema(k);
  extrema[0] = value(rng);
  double dir = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5 ? 1.0 : -1.0;
  for (Eigen::Index i = 1; i < k; ++i) {
    double v = value(rng);
    while ((v - extrema[i - 1]) * dir <= 0.0) v = value(rng);
    extrema[i] = v;
    dir = -dir;
  }

  // constant-speed representative: knot spacing proportional to |delta|
  VectorXd knots(k);
  knots[0] = 0.0;
  for (Eigen::Index i = 1; i < k; ++i)
    knots[i] = knots[i - 1] + std::abs(extrema[i] - extrema[i - 1]);
  knots /= knots[k - 1];

  const Reparam g = random_reparam(p.n, p.reparam_roughness, rng);
  Curve c;
  c.topology = Topology::Open;
  c.points.resize(1, p.n);
  for (Eigen::Index j = 0; j < p.n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(p.n - 1);
    c.points(0, j) = eval_pl(knots, extrema, g(t));
  }
  return c;
}

Reparam random_reparam(Eigen::Index n_knots, double roughness, Rng& rng) {
  if (n_knots < 2 || roughness <= 0.0)
    throw std::invalid_argument("bad random_reparam parameters");
  std::gamma_distribution<double> gamma(1.0 / roughness, 1.0);
  VectorXd inc(n_knots - 1);
  for (Eigen::Index i = 0; i < inc.size(); ++i) inc[i] = gamma(rng) + 1e-12;
  Reparam g;
  g.knots_in = VectorXd::LinSpaced(n_knots, 0.0, 1.0);
  g.knots_out.resize(n_knots);
  g.knots_out[0] = 0.0;
  for (Eigen::Index i = 0; i < inc.size(); ++i) g.knots_out[i + 1] = g.knots_out[i] + inc[i];
  g.knots_out /= g.knots_out[n_knots - 1];
  g.knots_out[n_knots - 1] = 1.0;
  g.validate();
  return g;
}

MatrixXd random_rotation(Eigen::Index d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return haar_rotation(d, rng);
}

namespace {

Curve resample_by_reparam(const Curve& c, const Reparam& g) {
  Curve out = c;
  const Eigen::Index n = c.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double denom = c.topology == Topology::Open ? static_cast<double>(n - 1)
                                                      : static_cast<double>(n);
    out.points.col(j) = eval_curve(c, g(static_cast<double>(j) / denom));
  }
  return out;
}

Curve augment_curve(const Curve& c, Rng& rng, const AugmentOptions& opts) {
  Curve out = c;
  if (c.topology == Topology::Closed && opts.shift_seam) {
    std::uniform_int_distribution<Eigen::Index> shift(0, c.size() - 1);
    out = apply_shift(out, shift(rng));
  }
  out = resample_by_reparam(out, random_reparam(c.size(), opts.roughness, rng));
  if (c.dim() >= 2 && opts.rotate) out = apply_rotation(out, random_rotation(c.dim(), rng));
  return out;
}

}  // namespace

PairRecord augment_pair(const PairRecord& r, Rng& rng, const AugmentOptions& opts) {
  PairRecord out;
  out.a = augment_curve(r.a, rng, opts);
  out.b = augment_curve(r.b, rng, opts);
  out.label = r.label;
  return out;
}

PairDataset build_labeled_dataset(std::vector<PairRecord> pairs, const LabelOptions& opts,
                                  std::vector<std::string>* skipped) {
  const size_t total = pairs.size();
  std::vector<char> ok(total, 0);
  std::vector<std::string> errors(total);
  std::atomic<size_t> next{0};
  const int workers = std::max(1, opts.workers);

  const auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      try {
        pairs[i].label = shape_distance(pairs[i].a, pairs[i].b, opts.config).distance;
        ok[i] = 1;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  PairDataset out;
  out.meta.labeler = opts.config.method;
  if (!pairs.empty()) {
    out.meta.d = pairs[0].a.dim();
    out.meta.n = pairs[0].a.size();
    out.meta.topology = pairs[0].a.topology;
  }
  for (size_t i = 0; i < total; ++i) {
    if (ok[i]) {
      out.records.push_back(std::move(pairs[i]));
    } else if (skipped) {
      skipped->push_back("pair " + std::to_string(i) + ": " + errors[i]);
    }
  }
  return out;
}

PairDataset build_labeled_dataset(const std::vector<Curve>& curves, const LabelOptions& opts,
                                  std::vector<std::string>* skipped) {
  std::vector<PairRecord> pairs;
  for (size_t i = 0; i < curves.size(); ++i)
    for (size_t j = i + 1; j < curves.size(); ++j) {
      if (opts.max_pairs && pairs.size() >= *opts.max_pairs) goto done;
      pairs.push_back({curves[i], curves[j], 0.0});
    }
done:
  return build_labeled_dataset(std::move(pairs), opts, skipped);
}

}  // namespace srvdist
