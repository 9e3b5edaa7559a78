#pragma once

#include <Eigen/Dense>
#include <vector>

#include "besovnet/network.hpp"

namespace besovnet::detail {

// Builders keyed by the number of sawtooth stages instead of total depth.
DenseNet square_net(int stages, double B);
DenseNet distance_net(const Eigen::VectorXd& c, int stages, double B, double tau);
double clip_margin(int D, int stages, double B, double tau);
DenseNet indicator_tail(double lo, double hi);
DenseNet spline_core(int m, int k, const std::vector<double>& s, int stages);

}  // namespace besovnet::detail
