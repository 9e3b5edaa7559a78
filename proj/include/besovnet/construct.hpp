#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "besovnet/bspline.hpp"
#include "besovnet/network.hpp"

namespace besovnet {

/// Ball cover of the data manifold. Chart i maps x to local coordinates
///   phi_i(x) = frames[i]^T (x - centers[i]) / (2 r) + 1/2,
/// so the inner ball B(c_i, r) lands in [0,1]^d.
/// `delta` is the indicator slack in squared-distance units.
struct ChartCover {
  std::vector<Eigen::VectorXd> centers;
  std::vector<Eigen::MatrixXd> frames;  // D x d, orthonormal columns
  double r = 0.0;
  double R_outer = 0.0;
  double tau = 0.0;
  double delta = 0.0;

  int size() const { return static_cast<int>(centers.size()); }
  int ambient_dim() const { return centers.empty() ? 0 : static_cast<int>(centers.front().size()); }
  int chart_dim() const { return frames.empty() ? 0 : static_cast<int>(frames.front().cols()); }
  Eigen::VectorXd chart_coords(int i, const Eigen::VectorXd& x) const;
  /// R_outer <= tau/2, r < R_outer - 2 delta, and consistent shapes.
  void validate() const;
};

struct GadgetReport {
  DenseNet net;
  std::string contract;
  double measured_error = 0.0;
  double certified_error = 0.0;
  int depth = 0;
  int width = 0;
  double sq_norm = 0.0;
};

/// Sawtooth approximation of x^2 on [0, 2B] with L-1 stages, width 4.
/// The output interpolates x^2 at 2^{L-1}+1 equispaced knots, so it is exact
/// at 0 and 2B and its error is at most B^2 4^{-(L-1)}.
GadgetReport build_square(int L, double B);
double square_error_bound(int L, double B);

/// g(x, y) = -C sigma(-x/C + y) + C sigma(y).
DenseNet build_multiply_gate(double C);

/// Clipped squared distance min-like map F(x) ~ |x - c|^2 that equals tau^2
/// exactly once |x - c| >= tau. Valid whenever |x_i - c_i| <= 2B for all i;
/// exactness of the clip holds for every x as long as tau <= 2B.
/// Net depth is L and the square gadgets use L - 2 layers.
GadgetReport build_distance_sq(const Eigen::VectorXd& c, int L, double B, double tau);
double distance_error_bound(int D, int L, double B);

/// Coordinate bound used for the distance gadget of a cover.
double cover_coordinate_bound(const ChartCover& cover);

/// Soft indicator of B(c_i, r): 1 on the inner ball, 0 outside R_outer.
/// Net depth is L. Requires cover.delta >= the distance gadget bound.
DenseNet build_indicator(const ChartCover& cover, int i, int L);

/// Squared-distance slack that build_indicator needs at depth L.
double indicator_slack(const ChartCover& cover, int L);

/// ReLU approximation of a * prod_i M_m(2^k (x_i - s_i)) of depth L. The
/// output is exactly 0 off the support box and never negative when a >= 0.
GadgetReport build_bspline_net(const BSplineAtom& atom, int L);
/// Smallest admissible depth of build_bspline_net for the given order and dimension.
int bspline_net_min_depth(int m, int d);

/// Bias-free net of width w+1 with f'([x; 1]) = f(x).
DenseNet remove_bias(const DenseNet& net);

struct AssembleOptions {
  /// Depth of every square gadget inside the blocks (stages + 1).
  int L = 6;
  /// Rescale residual weights so b_res = L.
  bool budget_mode = false;
  int paths_per_block = 4;
  double gate_cap = 2.0;
};

struct Assembly {
  DenseResNeXt net;
  NormReport norms;
  int block_depth = 0;
  int n_atoms = 0;
  double budget_scale = 1.0;   // c applied in budget mode
  double norm_constant = 0.0;  // b_res / L
  double delta = 0.0;          // indicator slack actually used
};

/// One building block per (chart i, atom j): the chart indicator and the
/// spline of the atom composed with phi_i feed the multiply gate and the
/// result is added to the accumulator entry of the stream [x; 1; acc].
Assembly assemble_resnext(const std::vector<SparseSeries>& series_per_chart,
                          const ChartCover& cover, const AssembleOptions& options);

/// Where each dense input coordinate sits in the convolutional input.
struct ConvLayout {
  int in_channels = 1;
  std::vector<std::pair<int, int>> inputs;  // (position, channel) per coordinate
  int out_channels = 1;
  std::vector<int> outputs;  // channel receiving dense output j at position 0
};

/// Coordinate i at position i of one channel; output j in channel j.
ConvLayout default_layout(int in_dim, int out_dim);

struct ConvPath {
  std::vector<ConvKernel> kernels;
  int gather_layers = 1;
};

/// Number of gather layers needed to bring positions 0..max_pos to position 0.
int gather_depth(int max_pos, int K);

/// Converts a bias-free dense net into a path of one-sided convolutions whose
/// output at position 0 reproduces the dense output. The first
/// gather_layers kernels pull the inputs to position 0 through sigma(+-)
/// carries; the remaining layers act at offset 0 only.
ConvPath fnn_to_cnn(const DenseNet& net, int K, const ConvLayout& layout, int min_gather = 1);
ConvPath fnn_to_cnn(const DenseNet& net, int K);

/// Converts every block with the stream layout x_i -> (i, 0), 1 -> (0, 1),
/// acc -> (0, 2). The result has 3 channels and reads (0, 2).
ConvResNeXt to_conv(const DenseResNeXt& net, int K);

}  // namespace besovnet
