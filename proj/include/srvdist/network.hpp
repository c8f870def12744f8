#pragma once

#include <string>
#include <vector>

#include "srvdist/datagen.hpp"

namespace srvdist {

// ---------------------------------------------------------------------------
// Layer primitives. Batched activations are stored channels x (batch * len),
// columns grouped sample by sample.
// ---------------------------------------------------------------------------
namespace layers {

// Length-preserving 1-D cross-correlation, stride 1, zero padding
// (kernel-1)/2. im2col lays out the receptive fields so the convolution is a
// single matrix product.
MatrixXd im2col(const MatrixXd& x, Eigen::Index batch, Eigen::Index len, int kernel);
MatrixXd conv_forward(const MatrixXd& w, const VectorXd& b, const MatrixXd& col);
void conv_backward(const MatrixXd& w, const MatrixXd& col, const MatrixXd& gy,
                   Eigen::Index batch, Eigen::Index len, int kernel, MatrixXd& gw, VectorXd& gb,
                   MatrixXd& gx);

struct BnCache {
  MatrixXd xhat;
  VectorXd inv_std;
};

MatrixXd bn_forward_train(const VectorXd& gamma, const VectorXd& beta, const MatrixXd& x,
                          BnCache& cache, VectorXd& running_mean, VectorXd& running_var,
                          double momentum);
MatrixXd bn_forward_infer(const VectorXd& gamma, const VectorXd& beta,
                          const VectorXd& running_mean, const VectorXd& running_var,
                          const MatrixXd& x);
MatrixXd bn_backward(const VectorXd& gamma, const BnCache& cache, const MatrixXd& gy,
                     VectorXd& ggamma, VectorXd& gbeta);

MatrixXd relu(const MatrixXd& x);
MatrixXd relu_backward(const MatrixXd& x, const MatrixXd& gy);

// Width-2 stride-2 max pooling along the length axis; odd lengths drop the
// trailing element. argmax stores the winning column offset (0 or 1).
MatrixXd maxpool_forward(const MatrixXd& x, Eigen::Index batch, Eigen::Index len,
                         Eigen::MatrixXi& argmax);
MatrixXd maxpool_backward(const MatrixXd& gy, const Eigen::MatrixXi& argmax, Eigen::Index batch,
                          Eigen::Index len);

MatrixXd dense_forward(const MatrixXd& w, const VectorXd& b, const MatrixXd& x);
void dense_backward(const MatrixXd& w, const MatrixXd& x, const MatrixXd& gy, MatrixXd& gw,
                    VectorXd& gb, MatrixXd& gx);

}  // namespace layers

// ---------------------------------------------------------------------------
// Siamese distance regressor
// ---------------------------------------------------------------------------

struct Arch {
  Eigen::Index n = 100;
  Eigen::Index d = 1;
  std::vector<int> conv_channels = {32, 64, 128};
  std::vector<int> dense_widths;  // defaults to {64d, 32d, 16d, 8d}
  int kernel = 5;
  int pool = 2;

  std::vector<int> effective_dense_widths() const;
  Eigen::Index conv_out_len() const;     // length after all pool layers
  Eigen::Index branch_features() const;  // flattened single-branch size
};

struct ConvBlock {
  MatrixXd w;  // K x (C*kernel)
  VectorXd b, bn_gamma, bn_beta, bn_rmean, bn_rvar;
};

struct DenseLayer {
  MatrixXd w;
  VectorXd b;
};

struct NetworkParams {
  int version = 1;
  Arch arch;
  double bn_momentum = 0.9;
  std::vector<ConvBlock> conv;
  std::vector<DenseLayer> dense;  // four hidden layers plus the scalar head
  unsigned long long init_seed = 0;

  static NetworkParams init(const Arch& arch, unsigned long long seed);
};

// Mutable views over every trainable tensor, in a fixed order (batch-norm
// running stats excluded).
struct TensorView {
  double* data;
  Eigen::Index size;
};
std::vector<TensorView> trainable_tensors(NetworkParams& p);

struct AdamHyper {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  NetworkParams m, v;  // moment buffers shaped like the parameters
  long t = 0;

  static AdamState init(const NetworkParams& p);
};

void adam_step(NetworkParams& params, NetworkParams& grads, AdamState& state,
               const AdamHyper& hyper);

enum class NetMode { Train, Infer };

// Symmetrized scalar output 0.5*(f(a,b) + f(b,a)); clamped at zero in
// inference mode only.
double forward(const NetworkParams& params, const Curve& a, const Curve& b,
               NetMode mode = NetMode::Infer);

std::vector<double> predict_batch(const NetworkParams& params,
                                  const std::vector<PairRecord>& pairs);

// One optimizer step on a batch; returns the batch MSE and fills grads.
// Exposed for the finite-difference gradient suite.
double batch_loss_and_gradients(NetworkParams& params, const std::vector<PairRecord>& batch,
                                NetworkParams* grads);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  AdamHyper adam;
  bool augment = true;
  AugmentOptions augment_opts;
  unsigned long long seed = 1;
  double holdout_fraction = 0.1;
};

struct TrainHistory {
  std::vector<double> train_mse;
  std::vector<double> test_mse;
};

struct TrainResult {
  NetworkParams params;
  TrainHistory history;
};

TrainResult train(const PairDataset& data, const TrainConfig& cfg,
                  const std::vector<PairRecord>* holdout_override = nullptr);

}  // namespace srvdist
