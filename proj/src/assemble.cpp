#include <algorithm>
#include <cmath>
#include <string>

#include "besovnet/construct.hpp"
#include "besovnet/dense_ops.hpp"
#include "besovnet/error.hpp"
#include "gadgets_internal.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd ChartCover::chart_coords(int i, const VectorXd& x) const {
  require(i >= 0 && i < size(), "invalid_argument", "chart index out of range");
  require(x.size() == centers[i].size(), "dimension_mismatch", "point and center sizes differ");
  return (frames[i].transpose() * (x - centers[i])) / (2.0 * r) + VectorXd::Constant(frames[i].cols(), 0.5);
}

void ChartCover::validate() const {
  require(!centers.empty(), "invalid_argument", "cover has no centers");
  require(frames.size() == centers.size(), "dimension_mismatch", "need one frame per center");
  const auto D = centers.front().size();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    require(centers[i].size() == D, "dimension_mismatch", "centers differ in dimension");
    require(frames[i].rows() == D && frames[i].cols() == frames.front().cols() && frames[i].cols() >= 1,
            "dimension_mismatch", "frame shape must be D x d");
  }
  require(r > 0.0 && tau > 0.0 && delta >= 0.0, "invalid_argument", "radii must be positive");
  require(R_outer <= tau / 2.0, "invalid_argument", "outer radius must satisfy R <= tau/2");
  require(r < R_outer - 2.0 * delta, "invalid_argument", "inner radius must satisfy r < R - 2 delta");
}

namespace {

DenseNet chart_map(const ChartCover& cover, int i) {
  const MatrixXd& F = cover.frames[i];
  MatrixXd W = F.transpose() / (2.0 * cover.r);
  VectorXd b = -W * cover.centers[i] + VectorXd::Constant(F.cols(), 0.5);
  return affine(W, b);
}

// [x; 1] -> [x; 1; acc]-shaped block writing into the accumulator.
DenseNet embed_in_stream(const DenseNet& biasfree, int D) {
  DenseNet out = biasfree;
  auto& first = out.layers.front();
  MatrixXd W = MatrixXd::Zero(first.W.rows(), D + 2);
  W.leftCols(D + 1) = first.W;
  first.W = W;
  auto& last = out.layers.back();
  MatrixXd Wl = MatrixXd::Zero(D + 2, last.W.cols());
  Wl.row(D + 1) = last.W.row(0);
  last.W = Wl;
  last.b = VectorXd::Zero(D + 2);
  return out;
}

DenseNet zero_like(const DenseNet& net) {
  DenseNet z = net;
  for (auto& layer : z.layers) {
    layer.W.setZero();
    layer.b.setZero();
  }
  return z;
}

}  // namespace

Assembly assemble_resnext(const std::vector<SparseSeries>& series_per_chart, const ChartCover& cover,
                          const AssembleOptions& options) {
  require(options.L >= 2, "invalid_argument", "gadget depth L must be >= 2");
  require(options.paths_per_block >= 1, "invalid_argument", "paths_per_block must be >= 1");
  require(options.gate_cap >= 1.0, "invalid_argument", "gate cap must be >= 1");
  require(static_cast<int>(series_per_chart.size()) == cover.size(), "dimension_mismatch",
          "need one series per chart");
  const int stages = options.L - 1;
  const int D = cover.ambient_dim();
  const int d = cover.chart_dim();

  ChartCover cv = cover;
  const int ind_depth = stages + 5;
  cv.delta = std::max(cover.delta, indicator_slack(cover, ind_depth));
  const double lo = cv.r * cv.r + cv.delta;
  const double hi = cv.R_outer * cv.R_outer - cv.delta;
  require(cv.r < cv.R_outer - 2.0 * cv.delta && lo < hi, "infeasible",
          "gadget depth L = " + std::to_string(options.L) +
              " leaves no room for the indicator transition (slack " + std::to_string(cv.delta) + ")");
  cv.validate();

  const double C = options.gate_cap;
  std::vector<DenseNet> blocks;
  std::vector<double> coefs;
  for (int i = 0; i < cv.size(); ++i) {
    DenseNet ind = compose(detail::distance_net(cv.centers[i], stages, cover_coordinate_bound(cv), cv.tau),
                           detail::indicator_tail(lo, hi));
    for (const auto& atom : series_per_chart[i].atoms) {
      require(atom.dim() == d, "dimension_mismatch", "atom dimension differs from chart dimension");
      DenseNet spline = compose(chart_map(cv, i), detail::spline_core(atom.m, atom.k, atom.s, stages));
      const int depth = std::max(ind.depth(), spline.depth());
      DenseNet both = parallel(pad_depth(ind, depth), pad_depth(spline, depth));
      // Multiply gate on (indicator, spline).
      DenseNet gate;
      MatrixXd g(2, 2);
      g << 1.0, -1.0 / C, 1.0, 0.0;
      gate.layers.push_back({g, VectorXd::Zero(2)});
      MatrixXd go(1, 2);
      go << -C, C;
      gate.layers.push_back({go, VectorXd::Zero(1)});
      blocks.push_back(compose(both, gate));
      coefs.push_back(atom.a);
    }
  }
  require(!blocks.empty(), "invalid_argument", "no atoms to assemble");

  int L = 0;
  for (const auto& b : blocks) L = std::max(L, b.depth());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    DenseNet net = remove_bias(pad_depth(blocks[j], L));
    const double c = std::pow(std::abs(coefs[j]), 1.0 / L);
    for (auto& layer : net.layers) layer.W *= c;
    if (coefs[j] < 0.0) net.layers.back().W *= -1.0;
    blocks[j] = embed_in_stream(net, D);
  }

  const int M = options.paths_per_block;
  const int total = static_cast<int>(blocks.size());
  const int N = (total + M - 1) / M;
  Assembly out;
  out.n_atoms = total;
  out.block_depth = L;
  out.delta = cv.delta;
  DenseResNeXt& net = out.net;
  net.D = D;
  net.stream = D + 2;
  net.N = N;
  net.M = M;
  net.L = L;
  const DenseNet filler = zero_like(blocks.front());
  net.blocks.assign(N, {});
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) {
      const int j = n * M + m;
      net.blocks[n].push_back(j < total ? blocks[j] : filler);
    }
  net.w_out = VectorXd::Zero(D + 2);
  net.w_out(D + 1) = 1.0;
  net.readout = {D + 1};

  NormReport rep = norm_report(net);
  if (options.budget_mode && rep.b_res > 0.0) {
    out.budget_scale = std::sqrt(L / rep.b_res);
    net.rescale(out.budget_scale);
    rep = norm_report(net);
  }
  out.norms = rep;
  out.norm_constant = rep.b_res / L;
  net.validate();
  return out;
}

}  // namespace besovnet
