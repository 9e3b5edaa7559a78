#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "besovnet/error.hpp"
#include "besovnet/rng.hpp"
#include "besovnet/train.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void KRRConfig::validate() const {
  require(bandwidth > 0.0, "invalid_argument", "bandwidth must be > 0");
  require(ridge >= 0.0, "invalid_argument", "ridge must be >= 0");
}

namespace {

MatrixXd rbf(const MatrixXd& a, const MatrixXd& b, double h) {
  const VectorXd na = a.rowwise().squaredNorm();
  const VectorXd nb = b.rowwise().squaredNorm();
  MatrixXd G = -2.0 * a * b.transpose();
  G.colwise() += na;
  G.rowwise() += nb.transpose();
  const double s = -1.0 / (2.0 * h * h);
  return (G.cwiseMax(0.0) * s).array().exp().matrix();
}

}  // namespace

VectorXd krr_fit_predict(const MatrixXd& train_xs, const VectorXd& train_ys, const MatrixXd& test_xs,
                         const KRRConfig& config) {
  config.validate();
  require(train_xs.rows() == train_ys.size() && train_xs.rows() > 0, "dimension_mismatch",
          "need matching nonempty training data");
  require(test_xs.cols() == train_xs.cols(), "dimension_mismatch", "train and test widths differ");
  MatrixXd Kmat = rbf(train_xs, train_xs, config.bandwidth);
  Kmat.diagonal().array() += config.ridge;
  Eigen::LLT<MatrixXd> llt(Kmat);
  require(llt.info() == Eigen::Success, "singular", "kernel system is not positive definite");
  const VectorXd alpha = llt.solve(train_ys);
  require(alpha.allFinite(), "singular", "kernel solve produced non-finite weights");
  return rbf(test_xs, train_xs, config.bandwidth) * alpha;
}

double krr_dof(const MatrixXd& train_xs, const KRRConfig& config) {
  config.validate();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(rbf(train_xs, train_xs, config.bandwidth),
                                               Eigen::EigenvaluesOnly);
  double dof = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double e = std::max(0.0, eig.eigenvalues()(i));
    dof += (e + config.ridge > 0.0) ? e / (e + config.ridge) : 0.0;
  }
  return dof;
}

double median_distance(const MatrixXd& xs) {
  const Eigen::Index n = std::min<Eigen::Index>(xs.rows(), 500);
  std::vector<double> d;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((xs.row(i) - xs.row(j)).norm());
  if (d.empty()) return 1.0;
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return std::max(d[d.size() / 2], 1e-12);
}

KRRTuning krr_tune(const MatrixXd& xs, const VectorXd& ys, const std::vector<double>& bandwidth_scales,
                   const std::vector<double>& ridges, std::uint64_t seed) {
  require(xs.rows() >= 5, "invalid_argument", "need at least 5 samples to tune");
  require(!bandwidth_scales.empty() && !ridges.empty(), "invalid_argument", "empty tuning grid");
  std::vector<Eigen::Index> order(xs.rows());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto rng = make_rng(seed, kStreamSplit, 1);
  std::shuffle(order.begin(), order.end(), rng);
  const Eigen::Index nv = xs.rows() / 5;
  const Eigen::Index nt = xs.rows() - nv;
  MatrixXd tx(nt, xs.cols()), vx(nv, xs.cols());
  VectorXd ty(nt), vy(nv);
  for (Eigen::Index i = 0; i < nt; ++i) {
    tx.row(i) = xs.row(order[i]);
    ty(i) = ys(order[i]);
  }
  for (Eigen::Index i = 0; i < nv; ++i) {
    vx.row(i) = xs.row(order[nt + i]);
    vy(i) = ys(order[nt + i]);
  }
  const double med = median_distance(xs);
  KRRTuning best;
  best.validation_mse = std::numeric_limits<double>::infinity();
  for (double s : bandwidth_scales)
    for (double r : ridges) {
      const KRRConfig cfg{s * med, r};
      double mse;
      try {
        mse = squared_risk(krr_fit_predict(tx, ty, vx, cfg), vy);
      } catch (const Error&) {
        continue;
      }
      if (mse < best.validation_mse) {
        best.validation_mse = mse;
        best.best = cfg;
      }
    }
  require(std::isfinite(best.validation_mse), "singular", "every tuning candidate failed");
  return best;
}

}  // namespace besovnet
