#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "besovnet/construct.hpp"

namespace besovnet {

struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> values;

  /// Knots {0, .25, .5, .75, 1}, values {0, 1, -0.5, 0.8, 0}.
  static PiecewiseLinear default_link();
  /// Linear interpolation; constant extension outside the knot range.
  double operator()(double t) const;
  void validate() const;
};

struct CurveSpec {
  int D = 8;
  Eigen::MatrixXd rotation;  // D x D orthogonal; empty means identity
  double noise_sd = 1.0;
  PiecewiseLinear g0 = PiecewiseLinear::default_link();
  int n = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ManifoldDataset {
  Eigen::MatrixXd xs;  // n x D
  Eigen::VectorXd ys;
  Eigen::VectorXd ts;
};

/// (t sin 4 pi t, t cos 4 pi t, t (1 - t)).
Eigen::Vector3d curve_point(double t);

/// Same spec and seed give a bit-identical dataset. Rows are x = U^T x~ with
/// x~ = (curve(t), u_4, ..., u_D), u_j uniform on [0,1], and y = g0(t) + noise.
ManifoldDataset generate_curve_dataset(const CurveSpec& spec);

/// Orthogonal matrix from the QR factorisation of a Gaussian matrix with the
/// diagonal of R made positive; one column is flipped if needed so det = +1.
Eigen::MatrixXd random_rotation(int D, std::uint64_t seed);

/// Spec with rotation = random_rotation(D, seed).
CurveSpec make_curve_spec(int D, int n, double noise_sd, std::uint64_t seed);

/// Greedy farthest-point cover of the rows of `points`: every row lies within
/// r of a center. R_outer = 2r, tau = 4r, delta = 0; frames hold the top-d
/// principal directions of the points within R_outer of each center.
ChartCover build_cover(const Eigen::MatrixXd& points, double r, int d = 1);

/// Index of the nearest center for each row.
std::vector<int> assign_to_cover(const ChartCover& cover, const Eigen::MatrixXd& points);

void write_dataset_csv(const ManifoldDataset& data, const std::string& path);
/// Reads the format written by write_dataset_csv.
ManifoldDataset read_dataset_csv(const std::string& path);

}  // namespace besovnet
