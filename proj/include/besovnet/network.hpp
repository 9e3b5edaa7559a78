#pragma once

#include <Eigen/Dense>
#include <vector>

namespace besovnet {

struct DenseLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;  // out
};

/// Feed-forward ReLU network: affine layers with max(., 0) between them and
/// no activation after the last one.
struct DenseNet {
  std::vector<DenseLayer> layers;

  int depth() const { return static_cast<int>(layers.size()); }
  int in_dim() const;
  int out_dim() const;
  /// Largest layer output size, the last layer excluded unless depth == 1.
  int width() const;
  /// sum_l ||W_l||_F^2 + ||b_l||^2, accumulated in layer order.
  double sq_norm() const;
  bool has_bias() const;
  void validate() const;
};

/// Matrix-vector products are accumulated left to right in column order and
/// the bias is added last, so two nets with equal rows give equal outputs bit
/// for bit.
Eigen::VectorXd dense_forward(const DenseNet& net, const Eigen::VectorXd& x);

/// Convolution kernel W in R^{out x K x in}.
class ConvKernel {
 public:
  ConvKernel() = default;
  ConvKernel(int out_channels, int size, int in_channels);

  int out_channels() const { return out_; }
  int size() const { return K_; }
  int in_channels() const { return in_; }

  double& at(int j, int k, int l) { return w_[index(j, k, l)]; }
  double at(int j, int k, int l) const { return w_[index(j, k, l)]; }
  std::vector<double>& entries() { return w_; }
  const std::vector<double>& entries() const { return w_; }

  double sq_norm() const;

 private:
  std::size_t index(int j, int k, int l) const {
    return (static_cast<std::size_t>(j) * K_ + k) * in_ + l;
  }
  int out_ = 0, K_ = 0, in_ = 0;
  std::vector<double> w_;
};

/// One-sided stride-one convolution with zero padding past the right end:
///   y(i, j) = sum_k sum_l W(j, k, l) z(i + k, l),  z(i + k, .) = 0 for i + k >= D.
/// Rows of z are spatial positions, columns are channels.
Eigen::MatrixXd conv1d(const ConvKernel& kernel, const Eigen::MatrixXd& z);

/// Sum over the M parallel paths is added to the stream (identity skip).
/// The padded input carries x in channel 0, ones in channel 1 (the bias
/// carrier) and zeros in the remaining accumulator channels.
struct ConvResNeXt {
  int D = 0;
  int K = 1;
  int channels = 0;  // stream width w
  int N = 0, M = 0, L = 0;
  std::vector<std::vector<std::vector<ConvKernel>>> paths;  // [n][m][l]
  Eigen::VectorXd w_out;    // length D * channels, index = pos * channels + ch
  std::vector<int> readout;  // flattened indices the construction reads

  /// Allocates zero kernels with every hidden layer `hidden` channels wide.
  static ConvResNeXt zeros(int D, int K, int channels, int N, int M, int L, int hidden);

  int max_width() const;
  void validate() const;
  /// Multiplies every path kernel by c and w_out by c^{-L}; the function is unchanged.
  void rescale(double c);
};

Eigen::MatrixXd pad_input(const Eigen::VectorXd& x, int channels);
Eigen::MatrixXd path_forward(const std::vector<ConvKernel>& path, const Eigen::MatrixXd& z);
double resnext_forward(const ConvResNeXt& net, const Eigen::VectorXd& x);

/// Residual network whose building blocks are bias-free dense nets acting on
/// the stream [x; 1; accumulators]. This is the intermediate form produced by
/// the constructive approximation before conversion to convolutions.
struct DenseResNeXt {
  int D = 0;
  int stream = 0;  // D + 1 + number of accumulator entries
  int N = 0, M = 0, L = 0;
  std::vector<std::vector<DenseNet>> blocks;  // [n][m]
  Eigen::VectorXd w_out;
  std::vector<int> readout;

  void validate() const;
  void rescale(double c);
};

Eigen::VectorXd pad_stream(const Eigen::VectorXd& x, int stream);
double resnext_forward(const DenseResNeXt& net, const Eigen::VectorXd& x);

struct NormReport {
  std::vector<std::vector<double>> per_path;  // [n][m] squared Frobenius totals
  std::vector<double> per_block;              // [n], sum over m
  double b_res = 0.0;
  double b_out = 0.0;
};

NormReport norm_report(const ConvResNeXt& net);
NormReport norm_report(const DenseResNeXt& net);

struct NormBudget {
  double b_res = 0.0;
  double b_out = 0.0;

  bool admits(const NormReport& r) const { return r.b_res <= b_res && r.b_out <= b_out; }
};

}  // namespace besovnet
