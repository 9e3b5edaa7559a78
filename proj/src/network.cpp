#include "besovnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovnet/error.hpp"

namespace besovnet {

int DenseNet::in_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().W.cols()); }
int DenseNet::out_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.back().W.rows()); }

int DenseNet::width() const {
  if (layers.empty()) return 0;
  if (layers.size() == 1) return static_cast<int>(layers[0].W.rows());
  int w = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) w = std::max(w, static_cast<int>(layers[l].W.rows()));
  return w;
}

double DenseNet::sq_norm() const {
  double s = 0.0;
  for (const auto& layer : layers) {
    for (Eigen::Index i = 0; i < layer.W.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.W.cols(); ++j) s += layer.W(i, j) * layer.W(i, j);
    for (Eigen::Index i = 0; i < layer.b.size(); ++i) s += layer.b(i) * layer.b(i);
  }
  return s;
}

bool DenseNet::has_bias() const {
  for (const auto& layer : layers)
    if ((layer.b.array() != 0.0).any()) return true;
  return false;
}

void DenseNet::validate() const {
  require(!layers.empty(), "invalid_argument", "dense net has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    require(layers[l].b.size() == layers[l].W.rows(), "dimension_mismatch",
            "bias size differs from layer output size at layer " + std::to_string(l));
    if (l > 0)
      require(layers[l].W.cols() == layers[l - 1].W.rows(), "dimension_mismatch",
              "layer " + std::to_string(l) + " input does not match previous output");
  }
}

Eigen::VectorXd dense_forward(const DenseNet& net, const Eigen::VectorXd& x) {
  require(x.size() > 0, "invalid_argument", "empty input");
  require(!net.layers.empty(), "invalid_argument", "dense net has no layers");
  require(x.size() == net.in_dim(), "dimension_mismatch",
          "input size " + std::to_string(x.size()) + " != net input " + std::to_string(net.in_dim()));
  Eigen::VectorXd h = x;
  const std::size_t depth = net.layers.size();
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& W = net.layers[l].W;
    const auto& b = net.layers[l].b;
    Eigen::VectorXd y(W.rows());
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < W.cols(); ++j) s += W(i, j) * h(j);
      s += b(i);
      y(i) = (l + 1 < depth) ? std::max(s, 0.0) : s;
    }
    h = std::move(y);
  }
  return h;
}

ConvKernel::ConvKernel(int out_channels, int size, int in_channels)
    : out_(out_channels), K_(size), in_(in_channels),
      w_(static_cast<std::size_t>(out_channels) * size * in_channels, 0.0) {
  require(out_channels >= 1 && in_channels >= 1, "invalid_argument", "kernel channels must be >= 1");
  require(size >= 1, "invalid_argument", "kernel size K must be >= 1");
}

double ConvKernel::sq_norm() const {
  double s = 0.0;
  for (double v : w_) s += v * v;
  return s;
}

Eigen::MatrixXd conv1d(const ConvKernel& kernel, const Eigen::MatrixXd& z) {
  require(z.cols() == kernel.in_channels(), "dimension_mismatch",
          "kernel expects " + std::to_string(kernel.in_channels()) + " input channels, got " +
              std::to_string(z.cols()));
  const int D = static_cast<int>(z.rows());
  const int K = kernel.size();
  const int win = kernel.in_channels();
  const int wout = kernel.out_channels();
  const double* w = kernel.entries().data();
  Eigen::MatrixXd y(D, wout);
  for (int i = 0; i < D; ++i) {
    const int kmax = std::min(K, D - i);
    for (int j = 0; j < wout; ++j) {
      double s = 0.0;
      const double* wj = w + static_cast<std::size_t>(j) * K * win;
      for (int k = 0; k < kmax; ++k)
        for (int l = 0; l < win; ++l) s += wj[k * win + l] * z(i + k, l);
      y(i, j) = s;
    }
  }
  return y;
}

ConvResNeXt ConvResNeXt::zeros(int D, int K, int channels, int N, int M, int L, int hidden) {
  require(D >= 1 && K >= 1 && channels >= 1 && N >= 0 && M >= 0 && L >= 1 && hidden >= 1,
          "invalid_argument", "invalid ConvResNeXt shape");
  ConvResNeXt net;
  net.D = D;
  net.K = K;
  net.channels = channels;
  net.N = N;
  net.M = M;
  net.L = L;
  net.paths.assign(N, std::vector<std::vector<ConvKernel>>(M));
  for (auto& block : net.paths)
    for (auto& path : block)
      for (int l = 0; l < L; ++l) {
        const int in = (l == 0) ? channels : hidden;
        const int out = (l == L - 1) ? channels : hidden;
        path.emplace_back(out, K, in);
      }
  net.w_out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D) * channels);
  return net;
}

int ConvResNeXt::max_width() const {
  int w = channels;
  for (const auto& block : paths)
    for (const auto& path : block)
      for (const auto& k : path) w = std::max(w, k.out_channels());
  return w;
}

void ConvResNeXt::validate() const {
  require(static_cast<int>(paths.size()) == N, "dimension_mismatch", "expected N residual blocks");
  require(w_out.size() == static_cast<Eigen::Index>(D) * channels, "dimension_mismatch",
          "w_out length must be D * channels");
  for (const auto& block : paths) {
    require(static_cast<int>(block.size()) == M, "dimension_mismatch", "expected M paths per block");
    for (const auto& path : block) {
      require(static_cast<int>(path.size()) == L, "dimension_mismatch", "expected L kernels per path");
      for (int l = 0; l < L; ++l) {
        require(path[l].size() == K, "dimension_mismatch", "kernel size differs from K");
        const int expect_in = (l == 0) ? channels : path[l - 1].out_channels();
        require(path[l].in_channels() == expect_in, "dimension_mismatch", "kernel channels do not compose");
      }
      require(path.back().out_channels() == channels, "dimension_mismatch",
              "last kernel must return to the stream width");
    }
  }
  for (int idx : readout)
    require(idx >= 0 && idx < w_out.size(), "dimension_mismatch", "readout index out of range");
}

void ConvResNeXt::rescale(double c) {
  for (auto& block : paths)
    for (auto& path : block)
      for (auto& k : path)
        for (double& v : k.entries()) v *= c;
  w_out *= std::pow(c, -L);
}

Eigen::MatrixXd pad_input(const Eigen::VectorXd& x, int channels) {
  require(channels >= 1, "invalid_argument", "need at least one channel");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(x.size(), channels);
  z.col(0) = x;
  if (channels >= 2) z.col(1).setOnes();
  return z;
}

Eigen::MatrixXd path_forward(const std::vector<ConvKernel>& path, const Eigen::MatrixXd& z) {
  Eigen::MatrixXd a = conv1d(path.front(), z);
  for (std::size_t l = 1; l < path.size(); ++l) a = conv1d(path[l], a.cwiseMax(0.0));
  return a;
}

double resnext_forward(const ConvResNeXt& net, const Eigen::VectorXd& x) {
  require(x.size() == net.D, "dimension_mismatch",
          "input size " + std::to_string(x.size()) + " != D = " + std::to_string(net.D));
  Eigen::MatrixXd h = pad_input(x, net.channels);
  for (const auto& block : net.paths) {
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    for (const auto& path : block) delta += path_forward(path, h);
    h += delta;
  }
  double out = 0.0;
  for (int i = 0; i < net.D; ++i)
    for (int c = 0; c < net.channels; ++c) out += net.w_out(i * net.channels + c) * h(i, c);
  return out;
}

void DenseResNeXt::validate() const {
  require(stream >= D + 1, "dimension_mismatch", "stream must hold x and the bias carrier");
  require(static_cast<int>(blocks.size()) == N, "dimension_mismatch", "expected N residual blocks");
  require(w_out.size() == stream, "dimension_mismatch", "w_out length must equal stream width");
  for (const auto& block : blocks) {
    require(static_cast<int>(block.size()) == M, "dimension_mismatch", "expected M paths per block");
    for (const auto& net : block) {
      net.validate();
      require(net.depth() == L, "dimension_mismatch", "every building block must have depth L");
      require(net.in_dim() == stream && net.out_dim() == stream, "dimension_mismatch",
              "building block must map the stream to itself");
    }
  }
}

void DenseResNeXt::rescale(double c) {
  for (auto& block : blocks)
    for (auto& net : block)
      for (auto& layer : net.layers) {
        layer.W *= c;
        layer.b *= c;
      }
  w_out *= std::pow(c, -L);
}

Eigen::VectorXd pad_stream(const Eigen::VectorXd& x, int stream) {
  require(stream >= x.size() + 1, "dimension_mismatch", "stream too narrow for padding");
  Eigen::VectorXd h = Eigen::VectorXd::Zero(stream);
  h.head(x.size()) = x;
  h(x.size()) = 1.0;
  return h;
}

double resnext_forward(const DenseResNeXt& net, const Eigen::VectorXd& x) {
  require(x.size() == net.D, "dimension_mismatch", "input size does not match D");
  Eigen::VectorXd h = pad_stream(x, net.stream);
  for (const auto& block : net.blocks) {
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(h.size());
    for (const auto& path : block) delta += dense_forward(path, h);
    h += delta;
  }
  double out = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) out += net.w_out(i) * h(i);
  return out;
}

NormReport norm_report(const ConvResNeXt& net) {
  NormReport r;
  r.per_path.assign(net.paths.size(), {});
  r.per_block.assign(net.paths.size(), 0.0);
  for (std::size_t n = 0; n < net.paths.size(); ++n) {
    for (const auto& path : net.paths[n]) {
      double s = 0.0;
      for (const auto& k : path) s += k.sq_norm();
      r.per_path[n].push_back(s);
      r.per_block[n] += s;
    }
    r.b_res += r.per_block[n];
  }
  r.b_out = net.w_out.squaredNorm();
  return r;
}

NormReport norm_report(const DenseResNeXt& net) {
  NormReport r;
  r.per_path.assign(net.blocks.size(), {});
  r.per_block.assign(net.blocks.size(), 0.0);
  for (std::size_t n = 0; n < net.blocks.size(); ++n) {
    for (const auto& path : net.blocks[n]) {
      const double s = path.sq_norm();
      r.per_path[n].push_back(s);
      r.per_block[n] += s;
    }
    r.b_res += r.per_block[n];
  }
  r.b_out = net.w_out.squaredNorm();
  return r;
}

}  // namespace besovnet
