#pragma once

#include <Eigen/Dense>

#include "besovnet/network.hpp"

// Small algebra over DenseNet used to wire gadgets together.
namespace besovnet {

/// Single affine layer x -> Wx + b (no activation).
DenseNet affine(const Eigen::MatrixXd& W, const Eigen::VectorXd& b);
DenseNet affine(const Eigen::MatrixXd& W);

/// second(first(x)). The last layer of `first` is folded into the first
/// layer of `second`, so depth = depth(first) + depth(second) - 1.
DenseNet compose(const DenseNet& first, const DenseNet& second);

/// x -> [a(x); b(x)]. Both nets read the same input and must have equal depth.
DenseNet parallel(const DenseNet& a, const DenseNet& b);

/// [x; y] -> [a(x); b(y)]. Equal depth required.
DenseNet stack(const DenseNet& a, const DenseNet& b);
DenseNet stack(const std::vector<DenseNet>& nets);

/// Same function at a larger depth. Identity layers go after the first
/// hidden layer, where every value is already nonnegative.
DenseNet pad_depth(const DenseNet& net, int depth);

/// Identity on R^dim realised with `depth` layers. The nonnegative version
/// is only exact on inputs >= 0 (and clamps negatives to 0); the signed
/// version passes sigma(x) and sigma(-x) and recombines.
DenseNet carry_nonneg(int dim, int depth);
DenseNet carry_signed(int dim, int depth);

/// Multiplies the last layer by s (weights and bias).
DenseNet scale_output(const DenseNet& net, double s);

}  // namespace besovnet
