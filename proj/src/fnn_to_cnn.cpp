#include <algorithm>
#include <set>
#include <string>

#include "besovnet/construct.hpp"
#include "besovnet/error.hpp"

namespace besovnet {

using Eigen::MatrixXd;

int gather_depth(int max_pos, int K) {
  require(K > 1, "invalid_argument", "kernel size K must be > 1");
  require(max_pos >= 0, "invalid_argument", "negative position");
  return std::max(1, (max_pos + K - 2) / (K - 1));
}

ConvLayout default_layout(int in_dim, int out_dim) {
  ConvLayout layout;
  layout.in_channels = 1;
  for (int i = 0; i < in_dim; ++i) layout.inputs.emplace_back(i, 0);
  layout.out_channels = out_dim;
  for (int j = 0; j < out_dim; ++j) layout.outputs.push_back(j);
  return layout;
}

ConvPath fnn_to_cnn(const DenseNet& net, int K) {
  return fnn_to_cnn(net, K, default_layout(net.in_dim(), net.out_dim()));
}

ConvPath fnn_to_cnn(const DenseNet& net, int K, const ConvLayout& layout, int min_gather) {
  require(K > 1, "invalid_argument", "kernel size K must be > 1");
  net.validate();
  require(!net.has_bias(), "invalid_argument", "fnn_to_cnn expects a bias-free net");
  require(static_cast<int>(layout.inputs.size()) == net.in_dim(), "dimension_mismatch",
          "layout must place every input coordinate");
  require(static_cast<int>(layout.outputs.size()) == net.out_dim(), "dimension_mismatch",
          "layout must place every output coordinate");
  int max_pos = 0;
  std::set<int> used;
  for (auto [p, c] : layout.inputs) {
    require(p >= 0 && c >= 0 && c < layout.in_channels, "invalid_argument", "bad input placement");
    max_pos = std::max(max_pos, p);
  }
  for (int c : layout.outputs)
    require(c >= 0 && c < layout.out_channels, "invalid_argument", "bad output placement");

  const int L0 = std::max(gather_depth(max_pos, K), min_gather);
  const int Ld = net.depth();
  const MatrixXd& W1 = net.layers.front().W;
  const int w1 = static_cast<int>(W1.rows());
  // Only channels with coordinates beyond the first window need carries.
  for (auto [p, c] : layout.inputs)
    if (p > K - 1) used.insert(c);
  const std::vector<int> chans(used.begin(), used.end());
  const int nc = static_cast<int>(chans.size());
  const int step = K - 1;

  ConvPath path;
  path.gather_layers = L0;

  // Channel count / index of a dense output written by a layer that may be the last one.
  auto out_rows = [&](int dense_layer) {
    return dense_layer == Ld - 1 ? layout.out_channels : static_cast<int>(net.layers[dense_layer].W.rows());
  };
  auto out_index = [&](int dense_layer, int j) { return dense_layer == Ld - 1 ? layout.outputs[j] : j; };

  if (L0 == 1) {
    ConvKernel k(out_rows(0), K, layout.in_channels);
    for (int j = 0; j < w1; ++j)
      for (int i = 0; i < W1.cols(); ++i) {
        auto [p, c] = layout.inputs[i];
        k.at(out_index(0, j), p, c) += W1(j, i);
      }
    path.kernels.push_back(std::move(k));
  } else {
    // Gather channels: acc+ (w1), acc- (w1), carry+ (nc), carry- (nc).
    const int G = 2 * w1 + 2 * nc;
    auto cplus = [&](int ci) { return 2 * w1 + ci; };
    auto cminus = [&](int ci) { return 2 * w1 + nc + ci; };
    auto chan_slot = [&](int c) {
      return static_cast<int>(std::lower_bound(chans.begin(), chans.end(), c) - chans.begin());
    };
    for (int layer = 1; layer <= L0; ++layer) {
      const bool first = layer == 1;
      const bool last = layer == L0;
      const int in_ch = first ? layout.in_channels : G;
      ConvKernel k(last ? out_rows(0) : G, K, in_ch);
      const int lo = first ? 0 : (layer - 1) * step + 1;
      const int hi = layer * step;
      for (int j = 0; j < w1; ++j) {
        if (W1.row(j).isZero(0.0)) continue;
        const int rj = last ? out_index(0, j) : j;
        if (!first) {
          // Running partial sums from the previous layer.
          k.at(rj, 0, j) += 1.0;
          if (last)
            k.at(rj, 0, w1 + j) -= 1.0;
          else
            k.at(w1 + j, 0, w1 + j) += 1.0;
        }
        for (int i = 0; i < W1.cols(); ++i) {
          auto [p, c] = layout.inputs[i];
          if (p < lo || p > hi) continue;
          const double a = W1(j, i);
          if (first) {
            k.at(j, p, c) += a;
            k.at(w1 + j, p, c) -= a;
            continue;
          }
          const int off = p - (layer - 1) * step;
          const int s = chan_slot(c);
          if (last) {
            k.at(rj, off, cplus(s)) += a;
            k.at(rj, off, cminus(s)) -= a;
          } else {
            const double pos = std::max(a, 0.0), neg = std::max(-a, 0.0);
            k.at(j, off, cplus(s)) += pos;
            k.at(j, off, cminus(s)) += neg;
            k.at(w1 + j, off, cplus(s)) += neg;
            k.at(w1 + j, off, cminus(s)) += pos;
          }
        }
      }
      if (!last)
        for (int s = 0; s < nc; ++s) {
          if (first) {
            k.at(cplus(s), step, chans[s]) = 1.0;
            k.at(cminus(s), step, chans[s]) = -1.0;
          } else {
            k.at(cplus(s), step, cplus(s)) = 1.0;
            k.at(cminus(s), step, cminus(s)) = 1.0;
          }
        }
      path.kernels.push_back(std::move(k));
    }
  }

  for (int l = 1; l < Ld; ++l) {
    const MatrixXd& W = net.layers[l].W;
    ConvKernel k(out_rows(l), K, static_cast<int>(W.cols()));
    for (int j = 0; j < W.rows(); ++j)
      for (int i = 0; i < W.cols(); ++i) k.at(out_index(l, j), 0, i) += W(j, i);
    path.kernels.push_back(std::move(k));
  }
  return path;
}

ConvResNeXt to_conv(const DenseResNeXt& net, int K) {
  net.validate();
  require(net.stream == net.D + 2, "dimension_mismatch", "to_conv expects the stream [x; 1; acc]");
  ConvLayout layout;
  layout.in_channels = 3;
  for (int i = 0; i < net.D; ++i) layout.inputs.emplace_back(i, 0);
  layout.inputs.emplace_back(0, 1);
  layout.inputs.emplace_back(0, 2);
  layout.out_channels = 3;
  // Dense outputs x and 1 are never written by the blocks; send them to
  // channels that the zero rows leave untouched.
  for (int i = 0; i < net.D; ++i) layout.outputs.push_back(0);
  layout.outputs.push_back(1);
  layout.outputs.push_back(2);

  ConvResNeXt out;
  out.D = net.D;
  out.K = K;
  out.channels = 3;
  out.N = net.N;
  out.M = net.M;
  out.paths.assign(net.N, {});
  int L = -1;
  for (int n = 0; n < net.N; ++n)
    for (int m = 0; m < net.M; ++m) {
      const DenseNet& block = net.blocks[n][m];
      for (int i = 0; i < net.D + 1; ++i)
        require(block.layers.back().W.row(i).isZero(0.0), "invalid_argument",
                "blocks may only write the accumulator");
      ConvPath p = fnn_to_cnn(block, K, layout);
      if (L < 0) L = static_cast<int>(p.kernels.size());
      require(static_cast<int>(p.kernels.size()) == L, "dimension_mismatch", "paths differ in depth");
      out.paths[n].push_back(std::move(p.kernels));
    }
  out.L = L;
  out.w_out = Eigen::VectorXd::Zero(3 * net.D);
  const double acc_weight = net.w_out(net.D + 1);
  out.w_out(2) = acc_weight;
  out.readout = {2};
  for (int i = 0; i < net.D + 1; ++i)
    require(net.w_out(i) == 0.0, "invalid_argument", "to_conv reads only the accumulator");
  out.validate();
  return out;
}

}  // namespace besovnet
