#include "srvdist/network.hpp"

#include <cmath>
#include <numeric>

namespace srvdist {

namespace layers {

MatrixXd im2col(const MatrixXd& x, Eigen::Index batch, Eigen::Index len, int kernel) {
  const Eigen::Index c = x.rows();
  const int pad = (kernel - 1) / 2;
  MatrixXd col = MatrixXd::Zero(c * kernel, batch * len);
  for (Eigen::Index s = 0; s < batch; ++s) {
    for (Eigen::Index t = 0; t < len; ++t) {
      const Eigen::Index out = s * len + t;
      for (int k = 0; k < kernel; ++k) {
        const Eigen::Index src = t + k - pad;
        if (src < 0 || src >= len) continue;
        col.block(k * c, out, c, 1) = x.col(s * len + src);
      }
    }
  }
  return col;
}

MatrixXd conv_forward(const MatrixXd& w, const VectorXd& b, const MatrixXd& col) {
  return (w * col).colwise() + b;
}

void conv_backward(const MatrixXd& w, const MatrixXd& col, const MatrixXd& gy,
                   Eigen::Index batch, Eigen::Index len, int kernel, MatrixXd& gw, VectorXd& gb,
                   MatrixXd& gx) {
  const Eigen::Index c = w.cols() / kernel;
  const int pad = (kernel - 1) / 2;
  gw.noalias() = gy * col.transpose();
  gb = gy.rowwise().sum();
  const MatrixXd gcol = w.transpose() * gy;  // (c*kernel) x (batch*len)
  gx = MatrixXd::Zero(c, batch * len);
  for (Eigen::Index s = 0; s < batch; ++s) {
    for (Eigen::Index t = 0; t < len; ++t) {
      const Eigen::Index out = s * len + t;
      for (int k = 0; k < kernel; ++k) {
        const Eigen::Index src = t + k - pad;
        if (src < 0 || src >= len) continue;
        gx.col(s * len + src) += gcol.block(k * c, out, c, 1);
      }
    }
  }
}

namespace {
constexpr double kBnEps = 1e-5;
}

MatrixXd bn_forward_train(const VectorXd& gamma, const VectorXd& beta, const MatrixXd& x,
                          BnCache& cache, VectorXd& running_mean, VectorXd& running_var,
                          double momentum) {
  const double n = static_cast<double>(x.cols());
  const VectorXd mean = x.rowwise().mean();
  const MatrixXd centered = x.colwise() - mean;
  const VectorXd var = centered.array().square().rowwise().sum() / n;
  cache.inv_std = (var.array() + kBnEps).rsqrt();
  cache.xhat = centered.array().colwise() * cache.inv_std.array();
  running_mean = momentum * running_mean + (1.0 - momentum) * mean;
  running_var = momentum * running_var + (1.0 - momentum) * var;
  return (cache.xhat.array().colwise() * gamma.array()).colwise() + beta.array();
}

MatrixXd bn_forward_infer(const VectorXd& gamma, const VectorXd& beta,
                          const VectorXd& running_mean, const VectorXd& running_var,
                          const MatrixXd& x) {
  const VectorXd inv_std = (running_var.array() + kBnEps).rsqrt();
  const MatrixXd xhat = (x.colwise() - running_mean).array().colwise() * inv_std.array();
  return (xhat.array().colwise() * gamma.array()).colwise() + beta.array();
}

MatrixXd bn_backward(const VectorXd& gamma, const BnCache& cache, const MatrixXd& gy,
                     VectorXd& ggamma, VectorXd& gbeta) {
  const double n = static_cast<double>(gy.cols());
  ggamma = (gy.array() * cache.xhat.array()).rowwise().sum();
  gbeta = gy.rowwise().sum();
  const MatrixXd gxhat = gy.array().colwise() * gamma.array();
  const VectorXd sum_gxhat = gxhat.rowwise().sum();
  const VectorXd sum_gxhat_xhat = (gxhat.array() * cache.xhat.array()).rowwise().sum();
  MatrixXd gx = n * gxhat;
  gx.colwise() -= sum_gxhat;
  gx -= (cache.xhat.array().colwise() * sum_gxhat_xhat.array()).matrix();
  return (gx.array().colwise() * (cache.inv_std.array() / n)).matrix();
}

MatrixXd relu(const MatrixXd& x) { return x.cwiseMax(0.0); }

MatrixXd relu_backward(const MatrixXd& x, const MatrixXd& gy) {
  return (x.array() > 0.0).select(gy, MatrixXd::Zero(gy.rows(), gy.cols()));
}

MatrixXd maxpool_forward(const MatrixXd& x, Eigen::Index batch, Eigen::Index len,
                         Eigen::MatrixXi& argmax) {
  const Eigen::Index c = x.rows();
  const Eigen::Index out_len = len / 2;
  MatrixXd y(c, batch * out_len);
  argmax.resize(c, batch * out_len);
  for (Eigen::Index s = 0; s < batch; ++s) {
    for (Eigen::Index u = 0; u < out_len; ++u) {
      const Eigen::Index a = s * len + 2 * u, o = s * out_len + u;
      for (Eigen::Index ch = 0; ch < c; ++ch) {
        const bool second = x(ch, a + 1) > x(ch, a);
        argmax(ch, o) = second ? 1 : 0;
        y(ch, o) = x(ch, a + (second ? 1 : 0));
      }
    }
  }
  return y;
}

MatrixXd maxpool_backward(const MatrixXd& gy, const Eigen::MatrixXi& argmax, Eigen::Index batch,
                          Eigen::Index len) {
  const Eigen::Index c = gy.rows();
  const Eigen::Index out_len = len / 2;
  MatrixXd gx = MatrixXd::Zero(c, batch * len);
  for (Eigen::Index s = 0; s < batch; ++s)
    for (Eigen::Index u = 0; u < out_len; ++u) {
      const Eigen::Index a = s * len + 2 * u, o = s * out_len + u;
      for (Eigen::Index ch = 0; ch < c; ++ch) gx(ch, a + argmax(ch, o)) = gy(ch, o);
    }
  return gx;
}

MatrixXd dense_forward(const MatrixXd& w, const VectorXd& b, const MatrixXd& x) {
  return (w * x).colwise() + b;
}

void dense_backward(const MatrixXd& w, const MatrixXd& x, const MatrixXd& gy, MatrixXd& gw,
                    VectorXd& gb, MatrixXd& gx) {
  gw.noalias() = gy * x.transpose();
  gb = gy.rowwise().sum();
  gx.noalias() = w.transpose() * gy;
}

}  // namespace layers

// ---------------------------------------------------------------------------

std::vector<int> Arch::effective_dense_widths() const {
  if (!dense_widths.empty()) return dense_widths;
  const int dd = static_cast<int>(d);
  return {64 * dd, 32 * dd, 16 * dd, 8 * dd};
}

Eigen::Index Arch::conv_out_len() const {
  Eigen::Index l = n;
  for (size_t i = 0; i < conv_channels.size(); ++i) l /= pool;
  return l;
}

Eigen::Index Arch::branch_features() const {
  return conv_channels.empty() ? n * d : conv_channels.back() * conv_out_len();
}

NetworkParams NetworkParams::init(const Arch& arch, unsigned long long seed) {
  if (arch.conv_out_len() < 1) throw std::invalid_argument("input too short for the conv stack");
  NetworkParams p;
  p.arch = arch;
  p.init_seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto he = [&](Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in) {
    MatrixXd w(rows, cols);
    const double s = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = s * gauss(rng);
    return w;
  };

  Eigen::Index c_in = arch.d;
  for (int c_out : arch.conv_channels) {
    ConvBlock blk;
    blk.w = he(c_out, c_in * arch.kernel, c_in * arch.kernel);
    blk.b = VectorXd::Zero(c_out);
    blk.bn_gamma = VectorXd::Ones(c_out);
    blk.bn_beta = VectorXd::Zero(c_out);
    blk.bn_rmean = VectorXd::Zero(c_out);
    blk.bn_rvar = VectorXd::Ones(c_out);
    p.conv.push_back(std::move(blk));
    c_in = c_out;
  }

  Eigen::Index in = 2 * arch.branch_features();
  for (int width : arch.effective_dense_widths()) {
    p.dense.push_back({he(width, in, in), VectorXd::Zero(width)});
    in = width;
  }
  p.dense.push_back({he(1, in, in), VectorXd::Zero(1)});  // scalar head
  return p;
}

std::vector<TensorView> trainable_tensors(NetworkParams& p) {
  std::vector<TensorView> out;
  for (ConvBlock& b : p.conv) {
    out.push_back({b.w.data(), b.w.size()});
    out.push_back({b.b.data(), b.b.size()});
    out.push_back({b.bn_gamma.data(), b.bn_gamma.size()});
    out.push_back({b.bn_beta.data(), b.bn_beta.size()});
  }
  for (DenseLayer& d : p.dense) {
    out.push_back({d.w.data(), d.w.size()});
    out.push_back({d.b.data(), d.b.size()});
  }
  return out;
}

namespace {

void zero_tensors(NetworkParams& p) {
  for (TensorView t : trainable_tensors(p)) std::fill(t.data, t.data + t.size, 0.0);
}

}  // namespace

AdamState AdamState::init(const NetworkParams& p) {
  AdamState s;
  s.m = p;
  s.v = p;
  zero_tensors(s.m);
  zero_tensors(s.v);
  return s;
}

void adam_step(NetworkParams& params, NetworkParams& grads, AdamState& state,
               const AdamHyper& hyper) {
  ++state.t;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
  const auto pv = trainable_tensors(params);
  const auto gv = trainable_tensors(grads);
  const auto mv = trainable_tensors(state.m);
  const auto vv = trainable_tensors(state.v);
  for (size_t k = 0; k < pv.size(); ++k) {
    double* p = pv[k].data;
    const double* g = gv[k].data;
    double* m = mv[k].data;
    double* v = vv[k].data;
    for (Eigen::Index i = 0; i < pv[k].size; ++i) {
      m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g[i];
      v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
      p[i] -= hyper.alpha * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + hyper.eps);
    }
  }
}

// ---------------------------------------------------------------------------
// Whole-network forward/backward
// ---------------------------------------------------------------------------

namespace {

struct ConvCache {
  MatrixXd col, pre_bn, pre_relu;
  layers::BnCache bn;
  Eigen::MatrixXi argmax;
  Eigen::Index len_in = 0;
};

struct NetCache {
  std::vector<ConvCache> conv;
  std::vector<MatrixXd> dense_in;  // input to each dense layer
  MatrixXd input;                  // normalized curve batch
};

// Curves stacked into a d x (count * n) activation, translation-normalized.
MatrixXd assemble_input(const Arch& arch, const std::vector<const Curve*>& curves) {
  MatrixXd x(arch.d, static_cast<Eigen::Index>(curves.size()) * arch.n);
  for (size_t s = 0; s < curves.size(); ++s) {
    const Curve& c = *curves[s];
    if (c.dim() != arch.d || c.size() != arch.n)
      throw std::invalid_argument("curve shape does not match network input " +
                                  std::to_string(arch.d) + "x" + std::to_string(arch.n));
    x.middleCols(static_cast<Eigen::Index>(s) * arch.n, arch.n) =
        c.points.colwise() - VectorXd(c.points.col(0));
  }
  return x;
}

MatrixXd branch_forward(const NetworkParams& p, const MatrixXd& input, Eigen::Index count,
                        NetMode mode, NetCache* cache, NetworkParams* mutable_p) {
  MatrixXd x = input;
  Eigen::Index len = p.arch.n;
  for (size_t i = 0; i < p.conv.size(); ++i) {
    const ConvBlock& blk = p.conv[i];
    ConvCache cc;
    cc.len_in = len;
    cc.col = layers::im2col(x, count, len, p.arch.kernel);
    cc.pre_bn = layers::conv_forward(blk.w, blk.b, cc.col);
    MatrixXd y;
    if (mode == NetMode::Train) {
      ConvBlock& mblk = mutable_p->conv[i];
      y = layers::bn_forward_train(blk.bn_gamma, blk.bn_beta, cc.pre_bn, cc.bn, mblk.bn_rmean,
                                   mblk.bn_rvar, p.bn_momentum);
    } else {
      y = layers::bn_forward_infer(blk.bn_gamma, blk.bn_beta, blk.bn_rmean, blk.bn_rvar,
                                   cc.pre_bn);
    }
    cc.pre_relu = y;
    y = layers::relu(y);
    x = layers::maxpool_forward(y, count, len, cc.argmax);
    len /= p.arch.pool;
    if (cache) cache->conv.push_back(std::move(cc));
  }
  // flatten each sample's channels x len block into one feature column
  const Eigen::Index f = p.arch.branch_features();
  const Eigen::Index c = x.rows();
  MatrixXd feats(f, count);
  for (Eigen::Index s = 0; s < count; ++s)
    feats.col(s) =
        Eigen::Map<const VectorXd>(MatrixXd(x.middleCols(s * len, len)).data(), c * len);
  return feats;
}

MatrixXd branch_backward(const NetworkParams& p, NetCache& cache, Eigen::Index count,
                         const MatrixXd& gfeats, NetworkParams& grads) {
  const Eigen::Index lenf = p.arch.conv_out_len();
  const Eigen::Index c = p.arch.conv_channels.back();
  MatrixXd gx(c, count * lenf);
  for (Eigen::Index s = 0; s < count; ++s)
    gx.middleCols(s * lenf, lenf) =
        Eigen::Map<const MatrixXd>(gfeats.col(s).data(), c, lenf);
  for (size_t ii = p.conv.size(); ii-- > 0;) {
    ConvCache& cc = cache.conv[ii];
    const ConvBlock& blk = p.conv[ii];
    ConvBlock& gblk = grads.conv[ii];
    MatrixXd g = layers::maxpool_backward(gx, cc.argmax, count, cc.len_in);
    g = layers::relu_backward(cc.pre_relu, g);
    VectorXd ggamma, gbeta;
    g = layers::bn_backward(blk.bn_gamma, cc.bn, g, ggamma, gbeta);
    gblk.bn_gamma += ggamma;
    gblk.bn_beta += gbeta;
    MatrixXd gw, gin;
    VectorXd gb;
    layers::conv_backward(blk.w, cc.col, g, count, cc.len_in, p.arch.kernel, gw, gb, gin);
    gblk.w += gw;
    gblk.b += gb;
    gx = gin;
  }
  return gx;
}

// Dense head over pair features; columns p and count+p hold the two
// concatenation orders of pair p.
MatrixXd head_forward(const NetworkParams& p, const MatrixXd& din, NetCache* cache) {
  MatrixXd x = din;
  for (size_t i = 0; i < p.dense.size(); ++i) {
    if (cache) cache->dense_in.push_back(x);
    x = layers::dense_forward(p.dense[i].w, p.dense[i].b, x);
    if (i + 1 < p.dense.size()) x = layers::relu(x);
  }
  return x;  // 1 x (2*pairs)
}

MatrixXd head_backward(const NetworkParams& p, NetCache& cache, const MatrixXd& gout,
                       NetworkParams& grads) {
  MatrixXd g = gout;
  for (size_t ii = p.dense.size(); ii-- > 0;) {
    if (ii + 1 < p.dense.size()) {
      const MatrixXd pre =
          layers::dense_forward(p.dense[ii].w, p.dense[ii].b, cache.dense_in[ii]);
      g = layers::relu_backward(pre, g);
    }
    MatrixXd gw, gx;
    VectorXd gb;
    layers::dense_backward(p.dense[ii].w, cache.dense_in[ii], g, gw, gb, gx);
    grads.dense[ii].w += gw;
    grads.dense[ii].b += gb;
    g = gx;
  }
  return g;
}

VectorXd pair_outputs(const NetworkParams& p, const std::vector<PairRecord>& batch, NetMode mode,
                      NetCache* cache, NetworkParams* mutable_p) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  std::vector<const Curve*> curves;
  for (const PairRecord& r : batch) curves.push_back(&r.a);
  for (const PairRecord& r : batch) curves.push_back(&r.b);
  const MatrixXd input = assemble_input(p.arch, curves);
  if (cache) cache->input = input;
  const MatrixXd feats = branch_forward(p, input, 2 * b, mode, cache, mutable_p);

  const Eigen::Index f = p.arch.branch_features();
  MatrixXd din(2 * f, 2 * b);
  for (Eigen::Index i = 0; i < b; ++i) {
    din.col(i) << feats.col(i), feats.col(b + i);
    din.col(b + i) << feats.col(b + i), feats.col(i);
  }
  const MatrixXd out = head_forward(p, din, cache);
  VectorXd y(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    y[i] = 0.5 * (out(0, i) + out(0, b + i));
    if (mode == NetMode::Infer) y[i] = std::max(0.0, y[i]);
  }
  return y;
}

}  // namespace

double forward(const NetworkParams& params, const Curve& a, const Curve& b, NetMode mode) {
  NetworkParams scratch = params;  // train mode touches running stats
  const std::vector<PairRecord> batch{{a, b, 0.0}};
  return pair_outputs(params, batch, mode, nullptr, mode == NetMode::Train ? &scratch : nullptr)[0];
}

std::vector<double> predict_batch(const NetworkParams& params,
                                  const std::vector<PairRecord>& pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  constexpr size_t kChunk = 256;
  for (size_t start = 0; start < pairs.size(); start += kChunk) {
    const size_t stop = std::min(pairs.size(), start + kChunk);
    const std::vector<PairRecord> chunk(pairs.begin() + start, pairs.begin() + stop);
    const VectorXd y = pair_outputs(params, chunk, NetMode::Infer, nullptr, nullptr);
    out.insert(out.end(), y.data(), y.data() + y.size());
  }
  return out;
}

double batch_loss_and_gradients(NetworkParams& params, const std::vector<PairRecord>& batch,
                                NetworkParams* grads) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  NetCache cache;
  const VectorXd y = pair_outputs(params, batch, NetMode::Train, &cache, &params);

  double loss = 0.0;
  VectorXd dy(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const double err = y[i] - batch[i].label;
    loss += err * err;
    dy[i] = 2.0 * err / static_cast<double>(b);
  }
  loss /= static_cast<double>(b);
  if (!grads) return loss;

  zero_tensors(*grads);
  MatrixXd gout(1, 2 * b);
  for (Eigen::Index i = 0; i < b; ++i) {
    gout(0, i) = 0.5 * dy[i];
    gout(0, b + i) = 0.5 * dy[i];
  }
  const MatrixXd gdin = head_backward(params, cache, gout, *grads);
  const Eigen::Index f = params.arch.branch_features();
  MatrixXd gfeats(f, 2 * b);
  for (Eigen::Index i = 0; i < b; ++i) {
    gfeats.col(i) = gdin.block(0, i, f, 1) + gdin.block(f, b + i, f, 1);
    gfeats.col(b + i) = gdin.block(f, i, f, 1) + gdin.block(0, b + i, f, 1);
  }
  branch_backward(params, cache, 2 * b, gfeats, *grads);
  return loss;
}

TrainResult train(const PairDataset& data, const TrainConfig& cfg,
                  const std::vector<PairRecord>* holdout_override) {
  if (data.records.empty()) throw std::invalid_argument("empty dataset");
  Arch arch;
  arch.n = data.meta.n;
  arch.d = data.meta.d;
  NetworkParams params = NetworkParams::init(arch, cfg.seed);
  NetworkParams grads = params;
  AdamState state = AdamState::init(params);

  std::vector<PairRecord> trainset, holdout;
  if (holdout_override) {
    trainset = data.records;
    holdout = *holdout_override;
  } else {
    const size_t n_hold =
        static_cast<size_t>(cfg.holdout_fraction * static_cast<double>(data.records.size()));
    trainset.assign(data.records.begin(), data.records.end() - n_hold);
    holdout.assign(data.records.end() - n_hold, data.records.end());
  }
  if (trainset.empty()) throw std::invalid_argument("empty training split");

  TrainResult result;
  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x5DEECE66DULL);
  std::vector<size_t> order(trainset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::vector<PairRecord> batch;
      batch.reserve(stop - start);
      for (size_t k = start; k < stop; ++k) {
        const size_t idx = order[k];
        if (cfg.augment) {
          std::seed_seq seq{static_cast<unsigned long long>(cfg.seed),
                            static_cast<unsigned long long>(epoch),
                            static_cast<unsigned long long>(idx)};
          Rng rng(seq);
          batch.push_back(augment_pair(trainset[idx], rng, cfg.augment_opts));
        } else {
          batch.push_back(trainset[idx]);
        }
      }
      const double loss = batch_loss_and_gradients(params, batch, &grads);
      if (!std::isfinite(loss))
        throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch));
      epoch_loss += loss * static_cast<double>(batch.size());
      seen += batch.size();
      adam_step(params, grads, state, cfg.adam);
    }
    result.history.train_mse.push_back(epoch_loss / static_cast<double>(seen));

    double test_mse = 0.0;
    if (!holdout.empty()) {
      const std::vector<double> preds = predict_batch(params, holdout);
      for (size_t i = 0; i < holdout.size(); ++i) {
        const double err = preds[i] - holdout[i].label;
        test_mse += err * err;
      }
      test_mse /= static_cast<double>(holdout.size());
    }
    result.history.test_mse.push_back(test_mse);
  }
  result.params = params;
  return result;
}

}  // namespace srvdist
