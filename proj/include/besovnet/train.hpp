#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "besovnet/manifold.hpp"
#include "besovnet/network.hpp"

namespace besovnet {

enum class LossKind { Squared, Logistic };

LossKind parse_loss(const std::string& name);
std::string loss_name(LossKind kind);

struct TrainConfig {
  double lambda1 = 0.0;  // residual weight decay
  double lambda2 = 0.0;  // output weight decay
  double lr = 0.01;
  int epochs = 500;
  int batch_size = 64;
  LossKind loss = LossKind::Squared;
  std::uint64_t seed = 0;
  bool freeze_residual = false;
  /// Share of the data held out for early stopping; 0 trains on everything
  /// and returns the last iterate.
  double validation_fraction = 0.0;

  void validate() const;
};

/// mean over samples of y log(1 + e^{-f}) + (1 - y) log(1 + e^{f}); y in {0,1}.
double logistic_risk(const Eigen::VectorXd& f, const Eigen::VectorXd& y);
/// mean (f - y)^2
double squared_risk(const Eigen::VectorXd& f, const Eigen::VectorXd& y);

/// Random ConvResNeXt with `channels` stream channels and hidden width
/// `channels`. Kernels are He-scaled; the last kernel of each path is shrunk
/// so the net starts close to the identity skip.
ConvResNeXt init_resnext(int D, int K, int channels, int N, int M, int L, std::uint64_t seed);

/// Batched forward pass (rows of xs are inputs). Matches resnext_forward up to rounding.
Eigen::VectorXd predict(const ConvResNeXt& net, const Eigen::MatrixXd& xs);

struct GradResult {
  ConvResNeXt grad;  // same shape as the net, entries hold partial derivatives
  double loss = 0.0;
  double objective = 0.0;
};

/// Exact reverse-mode gradient of mean loss + lambda1 b_res + lambda2 b_out.
GradResult grad(const ConvResNeXt& net, const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                const TrainConfig& config);
double objective(const ConvResNeXt& net, const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                 const TrainConfig& config);

struct FitResult {
  ConvResNeXt net;
  std::vector<double> trace;  // objective on the training rows after each epoch
  std::vector<double> validation;  // held-out loss after each epoch (may be empty)
  int best_epoch = -1;
  NormReport norms;
};

/// Mini-batch gradient descent with a constant step. With a validation
/// fraction the rows are split by seed and the iterate with the lowest
/// held-out loss is returned. Throws kind "divergence" naming the epoch when
/// the objective becomes non-finite.
FitResult fit(ConvResNeXt net, const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const TrainConfig& config);

int parameter_count(const ConvResNeXt& net);

struct KRRConfig {
  double bandwidth = 1.0;
  double ridge = 1e-3;

  void validate() const;
};

/// k(x, x') = exp(-|x - x'|^2 / (2 h^2)); predictions k(test, train) (K + ridge I)^{-1} y.
Eigen::VectorXd krr_fit_predict(const Eigen::MatrixXd& train_xs, const Eigen::VectorXd& train_ys,
                                const Eigen::MatrixXd& test_xs, const KRRConfig& config);
/// trace K (K + ridge I)^{-1}
double krr_dof(const Eigen::MatrixXd& train_xs, const KRRConfig& config);
/// Median pairwise distance over (at most 500) rows.
double median_distance(const Eigen::MatrixXd& xs);

struct KRRTuning {
  KRRConfig best;
  double validation_mse = 0.0;
};

/// Grid search on a seeded 80/20 holdout of the training data.
KRRTuning krr_tune(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const std::vector<double>& bandwidth_scales,
                   const std::vector<double>& ridges, std::uint64_t seed);

/// Training settings used by the benchmark: lr 0.02, batch 32, 100 epochs,
/// lambda1 = lambda2 = 3e-4 and a 20% early-stopping holdout.
TrainConfig default_bench_training();

struct BenchConfig {
  std::string sweep = "D";  // D | n | dof
  std::vector<double> values;
  std::vector<std::uint64_t> seeds{0};
  int D = 8;
  int n = 2000;
  double noise_sd = 1.0;
  // ConvResNeXt architecture.
  int w = 8, L = 6, K = 6, M = 2, N = 2;
  TrainConfig train = default_bench_training();
  std::vector<double> bandwidth_scales{0.25, 0.5, 1.0, 2.0};
  std::vector<double> ridges{1e-3, 1e-2, 1e-1, 1.0};
  bool with_net = true;
  bool with_krr = true;

  void validate() const;
};

struct BenchRow {
  double sweep_value = 0.0;
  std::string estimator;
  double dof = 0.0;
  double mse = 0.0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Test MSE is measured against the noiseless link g0(t) on a seeded 80/20 split.
std::vector<BenchRow> run_benchmark(const BenchConfig& config);
void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

}  // namespace besovnet
