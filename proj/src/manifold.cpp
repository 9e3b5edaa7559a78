#include "besovnet/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "besovnet/error.hpp"
#include "besovnet/rng.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

PiecewiseLinear PiecewiseLinear::default_link() {
  return {{0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 1.0, -0.5, 0.8, 0.0}};
}

void PiecewiseLinear::validate() const {
  require(knots.size() >= 2 && knots.size() == values.size(), "invalid_argument",
          "link needs >= 2 knots and one value per knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require(knots[i] >= 0.0 && knots[i] <= 1.0, "invalid_argument", "knots must lie in [0,1]");
    if (i > 0) require(knots[i] > knots[i - 1], "invalid_argument", "knots must be strictly increasing");
  }
}

double PiecewiseLinear::operator()(double t) const {
  if (t <= knots.front()) return values.front();
  if (t >= knots.back()) return values.back();
  std::size_t i = 1;
  while (knots[i] < t) ++i;
  const double u = (t - knots[i - 1]) / (knots[i] - knots[i - 1]);
  return values[i - 1] + u * (values[i] - values[i - 1]);
}

void CurveSpec::validate() const {
  require(D >= 3, "invalid_argument", "ambient dimension D must be >= 3");
  require(n >= 1, "invalid_argument", "sample count n must be >= 1");
  require(noise_sd >= 0.0, "invalid_argument", "noise_sd must be >= 0");
  g0.validate();
  if (rotation.size() > 0) {
    require(rotation.rows() == D && rotation.cols() == D, "dimension_mismatch", "rotation must be D x D");
    require((rotation.transpose() * rotation - MatrixXd::Identity(D, D)).cwiseAbs().maxCoeff() <= 1e-12,
            "invalid_argument", "rotation must be orthogonal");
  }
}

Eigen::Vector3d curve_point(double t) {
  const double a = 4.0 * std::numbers::pi * t;
  return {t * std::sin(a), t * std::cos(a), t * (1.0 - t)};
}

ManifoldDataset generate_curve_dataset(const CurveSpec& spec) {
  spec.validate();
  const int D = spec.D, n = spec.n;
  ManifoldDataset data;
  data.xs.resize(n, D);
  data.ys.resize(n);
  data.ts.resize(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd latent(D);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    auto rng = make_rng(spec.seed, kStreamSample, static_cast<std::uint64_t>(i));
    latent.head<3>() = curve_point(t);
    for (int j = 3; j < D; ++j) latent(j) = unif(rng);
    const double noise = gauss(rng);
    data.ts(i) = t;
    if (spec.rotation.size() > 0)
      data.xs.row(i) = (spec.rotation.transpose() * latent).transpose();
    else
      data.xs.row(i) = latent.transpose();
    data.ys(i) = spec.g0(t) + spec.noise_sd * noise;
  }
  return data;
}

MatrixXd random_rotation(int D, std::uint64_t seed) {
  require(D >= 1, "invalid_argument", "dimension must be >= 1");
  auto rng = make_rng(seed, kStreamRotation, static_cast<std::uint64_t>(D));
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd G(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) G(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(D, D);
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < D; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  if (Q.determinant() < 0.0) Q.col(0) = -Q.col(0);
  return Q;
}

CurveSpec make_curve_spec(int D, int n, double noise_sd, std::uint64_t seed) {
  CurveSpec spec;
  spec.D = D;
  spec.n = n;
  spec.noise_sd = noise_sd;
  spec.seed = seed;
  spec.rotation = random_rotation(D, seed);
  return spec;
}

ChartCover build_cover(const MatrixXd& points, double r, int d) {
  require(points.rows() >= 1, "invalid_argument", "cannot cover an empty point set");
  require(r > 0.0, "invalid_argument", "cover radius must be positive");
  const int D = static_cast<int>(points.cols());
  require(d >= 1 && d <= D, "invalid_argument", "chart dimension must be in [1, D]");
  const Eigen::Index n = points.rows();
  VectorXd nearest = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  std::vector<Eigen::Index> chosen;
  Eigen::Index next = 0;
  while (true) {
    chosen.push_back(next);
    for (Eigen::Index i = 0; i < n; ++i)
      nearest(i) = std::min(nearest(i), (points.row(i) - points.row(next)).norm());
    Eigen::Index far = 0;
    const double dmax = nearest.maxCoeff(&far);
    if (dmax <= r) break;
    next = far;
  }
  ChartCover cover;
  cover.r = r;
  cover.R_outer = 2.0 * r;
  cover.tau = 4.0 * r;
  cover.delta = 0.0;
  for (Eigen::Index c : chosen) {
    const VectorXd center = points.row(c).transpose();
    std::vector<Eigen::Index> near;
    for (Eigen::Index i = 0; i < n; ++i)
      if ((points.row(i).transpose() - center).norm() <= cover.R_outer) near.push_back(i);
    MatrixXd Z(static_cast<Eigen::Index>(near.size()), D);
    for (std::size_t k = 0; k < near.size(); ++k) Z.row(static_cast<Eigen::Index>(k)) = points.row(near[k]);
    Z.rowwise() -= Z.colwise().mean();
    MatrixXd frame(D, d);
    if (Z.rows() > 1) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Z.transpose() * Z);
      for (int k = 0; k < d; ++k) frame.col(k) = eig.eigenvectors().col(D - 1 - k);
    } else {
      frame = MatrixXd::Identity(D, d);
    }
    cover.centers.push_back(center);
    cover.frames.push_back(frame);
  }
  return cover;
}

std::vector<int> assign_to_cover(const ChartCover& cover, const MatrixXd& points) {
  std::vector<int> out(points.rows(), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < cover.size(); ++c) {
      const double dist = (points.row(i).transpose() - cover.centers[c]).norm();
      if (dist < best) {
        best = dist;
        out[i] = c;
      }
    }
  }
  return out;
}

void write_dataset_csv(const ManifoldDataset& data, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "io", "cannot open " + path);
  os << "t";
  for (Eigen::Index j = 0; j < data.xs.cols(); ++j) os << ",x_" << (j + 1);
  os << ",y\n";
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.xs.rows(); ++i) {
    os << data.ts(i);
    for (Eigen::Index j = 0; j < data.xs.cols(); ++j) os << ',' << data.xs(i, j);
    os << ',' << data.ys(i) << '\n';
  }
}

ManifoldDataset read_dataset_csv(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "io", "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "parse", path + ": empty file");
  const auto cols = std::count(line.begin(), line.end(), ',') + 1;
  require(cols >= 3 && line.rfind("t,", 0) == 0, "parse", path + ": expected header t,x_1..x_D,y");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("parse", path + ": bad number '" + cell + "'");
      }
    }
    require(static_cast<long>(row.size()) == cols, "parse", path + ": ragged row");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "parse", path + ": no data rows");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size()), D = cols - 2;
  ManifoldDataset out{Eigen::MatrixXd(n, D), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.ts(i) = rows[i][0];
    for (Eigen::Index j = 0; j < D; ++j) out.xs(i, j) = rows[i][j + 1];
    out.ys(i) = rows[i][D + 1];
  }
  return out;
}

}  // namespace besovnet
