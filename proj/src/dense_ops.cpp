#include "besovnet/dense_ops.hpp"

#include <string>

#include "besovnet/error.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

DenseNet affine(const MatrixXd& W, const VectorXd& b) {
  require(b.size() == W.rows(), "dimension_mismatch", "bias size must equal W rows");
  DenseNet net;
  net.layers.push_back({W, b});
  return net;
}

DenseNet affine(const MatrixXd& W) { return affine(W, VectorXd::Zero(W.rows())); }

DenseNet compose(const DenseNet& first, const DenseNet& second) {
  require(!first.layers.empty() && !second.layers.empty(), "invalid_argument", "cannot compose empty nets");
  require(first.out_dim() == second.in_dim(), "dimension_mismatch",
          "compose: output " + std::to_string(first.out_dim()) + " feeds input " +
              std::to_string(second.in_dim()));
  DenseNet out;
  out.layers.assign(first.layers.begin(), first.layers.end() - 1);
  const DenseLayer& a = first.layers.back();
  const DenseLayer& b = second.layers.front();
  out.layers.push_back({b.W * a.W, b.W * a.b + b.b});
  out.layers.insert(out.layers.end(), second.layers.begin() + 1, second.layers.end());
  return out;
}

DenseNet parallel(const DenseNet& a, const DenseNet& b) {
  require(a.depth() == b.depth(), "dimension_mismatch", "parallel nets need equal depth");
  require(a.in_dim() == b.in_dim(), "dimension_mismatch", "parallel nets need equal input size");
  DenseNet out;
  for (int l = 0; l < a.depth(); ++l) {
    const auto& la = a.layers[l];
    const auto& lb = b.layers[l];
    DenseLayer layer;
    if (l == 0) {
      layer.W.resize(la.W.rows() + lb.W.rows(), la.W.cols());
      layer.W << la.W, lb.W;
    } else {
      layer.W = MatrixXd::Zero(la.W.rows() + lb.W.rows(), la.W.cols() + lb.W.cols());
      layer.W.topLeftCorner(la.W.rows(), la.W.cols()) = la.W;
      layer.W.bottomRightCorner(lb.W.rows(), lb.W.cols()) = lb.W;
    }
    layer.b.resize(la.b.size() + lb.b.size());
    layer.b << la.b, lb.b;
    out.layers.push_back(std::move(layer));
  }
  return out;
}

DenseNet stack(const DenseNet& a, const DenseNet& b) {
  require(a.depth() == b.depth(), "dimension_mismatch", "stacked nets need equal depth");
  DenseNet out;
  for (int l = 0; l < a.depth(); ++l) {
    const auto& la = a.layers[l];
    const auto& lb = b.layers[l];
    DenseLayer layer;
    layer.W = MatrixXd::Zero(la.W.rows() + lb.W.rows(), la.W.cols() + lb.W.cols());
    layer.W.topLeftCorner(la.W.rows(), la.W.cols()) = la.W;
    layer.W.bottomRightCorner(lb.W.rows(), lb.W.cols()) = lb.W;
    layer.b.resize(la.b.size() + lb.b.size());
    layer.b << la.b, lb.b;
    out.layers.push_back(std::move(layer));
  }
  return out;
}

DenseNet stack(const std::vector<DenseNet>& nets) {
  require(!nets.empty(), "invalid_argument", "nothing to stack");
  DenseNet out = nets.front();
  for (std::size_t i = 1; i < nets.size(); ++i) out = stack(out, nets[i]);
  return out;
}

DenseNet carry_nonneg(int dim, int depth) {
  require(dim >= 1 && depth >= 1, "invalid_argument", "carry needs dim >= 1 and depth >= 1");
  DenseNet net;
  for (int l = 0; l < depth; ++l) net.layers.push_back({MatrixXd::Identity(dim, dim), VectorXd::Zero(dim)});
  return net;
}

DenseNet carry_signed(int dim, int depth) {
  require(dim >= 1 && depth >= 1, "invalid_argument", "carry needs dim >= 1 and depth >= 1");
  if (depth == 1) return carry_nonneg(dim, 1);
  DenseNet net;
  MatrixXd split(2 * dim, dim);
  split << MatrixXd::Identity(dim, dim), -MatrixXd::Identity(dim, dim);
  net.layers.push_back({split, VectorXd::Zero(2 * dim)});
  for (int l = 1; l + 1 < depth; ++l)
    net.layers.push_back({MatrixXd::Identity(2 * dim, 2 * dim), VectorXd::Zero(2 * dim)});
  MatrixXd join(dim, 2 * dim);
  join << MatrixXd::Identity(dim, dim), -MatrixXd::Identity(dim, dim);
  net.layers.push_back({join, VectorXd::Zero(dim)});
  return net;
}

DenseNet pad_depth(const DenseNet& net, int depth) {
  net.validate();
  require(depth >= net.depth(), "invalid_argument", "cannot reduce depth by padding");
  if (depth == net.depth()) return net;
  if (net.depth() == 1) return compose(net, carry_signed(net.out_dim(), depth));
  DenseNet out;
  out.layers.push_back(net.layers.front());
  const int h = static_cast<int>(net.layers.front().W.rows());
  for (int l = net.depth(); l < depth; ++l)
    out.layers.push_back({MatrixXd::Identity(h, h), VectorXd::Zero(h)});
  out.layers.insert(out.layers.end(), net.layers.begin() + 1, net.layers.end());
  return out;
}

DenseNet scale_output(const DenseNet& net, double s) {
  DenseNet out = net;
  out.layers.back().W *= s;
  out.layers.back().b *= s;
  return out;
}

}  // namespace besovnet
