#include "besovnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "besovnet/error.hpp"
#include "besovnet/rng.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using KMap = Eigen::Map<RMat>;
using CKMap = Eigen::Map<const RMat>;

LossKind parse_loss(const std::string& name) {
  if (name == "squared") return LossKind::Squared;
  if (name == "logistic") return LossKind::Logistic;
  throw Error("invalid_argument", "unknown loss '" + name + "' (squared | logistic)");
}

std::string loss_name(LossKind kind) { return kind == LossKind::Squared ? "squared" : "logistic"; }

void TrainConfig::validate() const {
  require(lambda1 >= 0.0 && lambda2 >= 0.0, "invalid_argument", "weight decay must be >= 0");
  require(lr > 0.0, "invalid_argument", "learning rate must be > 0");
  require(epochs >= 0 && batch_size >= 1, "invalid_argument", "epochs >= 0 and batch_size >= 1 required");
  require(validation_fraction >= 0.0 && validation_fraction < 1.0, "invalid_argument",
          "validation fraction must lie in [0, 1)");
}

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_labels(const VectorXd& f, const VectorXd& y) {
  require(f.size() == y.size(), "dimension_mismatch", "prediction and label counts differ");
  require(f.size() > 0, "invalid_argument", "empty sample");
}

// Loss and d loss / d f for the mean over the batch.
double loss_and_slope(LossKind kind, const VectorXd& f, const VectorXd& y, VectorXd* slope) {
  const double n = static_cast<double>(f.size());
  if (slope) slope->resize(f.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (kind == LossKind::Squared) {
      const double r = f(i) - y(i);
      total += r * r;
      if (slope) (*slope)(i) = 2.0 * r / n;
    } else {
      total += y(i) * softplus(-f(i)) + (1.0 - y(i)) * softplus(f(i));
      if (slope) (*slope)(i) = (sigmoid(f(i)) - y(i)) / n;
    }
  }
  return total / n;
}

// Rows b*D + i of a (B*D) x C activation hold position i of sample b.
RMat im2col(const RMat& Z, int D, int K) {
  const Eigen::Index C = Z.cols();
  const Eigen::Index rows = Z.rows();
  RMat X = RMat::Zero(rows, K * C);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int i = static_cast<int>(r % D);
    const int kmax = std::min(K, D - i);
    for (int k = 0; k < kmax; ++k) X.row(r).segment(k * C, C) = Z.row(r + k);
  }
  return X;
}

void col2im_add(const RMat& G, int D, int K, RMat& out) {
  const Eigen::Index C = out.cols();
  for (Eigen::Index r = 0; r < G.rows(); ++r) {
    const int i = static_cast<int>(r % D);
    const int kmax = std::min(K, D - i);
    for (int k = 0; k < kmax; ++k) out.row(r + k) += G.row(r).segment(k * C, C);
  }
}

CKMap kernel_matrix(const ConvKernel& k) {
  return CKMap(k.entries().data(), k.out_channels(), static_cast<Eigen::Index>(k.size()) * k.in_channels());
}

RMat padded_batch(const MatrixXd& xs, int channels) {
  const Eigen::Index B = xs.rows(), D = xs.cols();
  RMat H = RMat::Zero(B * D, channels);
  for (Eigen::Index b = 0; b < B; ++b)
    for (Eigen::Index i = 0; i < D; ++i) {
      H(b * D + i, 0) = xs(b, i);
      if (channels >= 2) H(b * D + i, 1) = 1.0;
    }
  return H;
}

VectorXd readout(const ConvResNeXt& net, const RMat& H, Eigen::Index B) {
  VectorXd f = VectorXd::Zero(B);
  const int D = net.D, C = net.channels;
  for (Eigen::Index b = 0; b < B; ++b) {
    double s = 0.0;
    for (int i = 0; i < D; ++i)
      for (int c = 0; c < C; ++c) s += net.w_out(i * C + c) * H(b * D + i, c);
    f(b) = s;
  }
  return f;
}

struct PathCache {
  std::vector<RMat> cols;  // im2col of each layer input
  std::vector<RMat> pre;   // pre-activations
};

}  // namespace

double logistic_risk(const VectorXd& f, const VectorXd& y) {
  check_labels(f, y);
  for (Eigen::Index i = 0; i < y.size(); ++i)
    require(y(i) == 0.0 || y(i) == 1.0, "invalid_argument", "logistic labels must be 0 or 1");
  return loss_and_slope(LossKind::Logistic, f, y, nullptr);
}

double squared_risk(const VectorXd& f, const VectorXd& y) {
  check_labels(f, y);
  return loss_and_slope(LossKind::Squared, f, y, nullptr);
}

ConvResNeXt init_resnext(int D, int K, int channels, int N, int M, int L, std::uint64_t seed) {
  ConvResNeXt net = ConvResNeXt::zeros(D, K, channels, N, M, L, channels);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uint64_t counter = 0;
  for (auto& block : net.paths)
    for (auto& path : block)
      for (int l = 0; l < L; ++l) {
        auto rng = make_rng(seed, kStreamInit, counter++);
        ConvKernel& k = path[l];
        const double fan_in = static_cast<double>(k.size()) * k.in_channels();
        double sd = std::sqrt(2.0 / fan_in);
        if (l == L - 1) sd *= 0.1;
        for (double& v : k.entries()) v = sd * gauss(rng);
      }
  auto rng = make_rng(seed, kStreamInit, counter);
  const double sd = 1.0 / std::sqrt(static_cast<double>(D) * channels);
  for (Eigen::Index i = 0; i < net.w_out.size(); ++i) net.w_out(i) = sd * gauss(rng);
  return net;
}

VectorXd predict(const ConvResNeXt& net, const MatrixXd& xs) {
  require(xs.cols() == net.D, "dimension_mismatch", "input width differs from D");
  const int D = net.D, K = net.K;
  const Eigen::Index chunk = 512;
  VectorXd out(xs.rows());
  for (Eigen::Index start = 0; start < xs.rows(); start += chunk) {
    const Eigen::Index B = std::min(chunk, xs.rows() - start);
    RMat H = padded_batch(xs.middleRows(start, B), net.channels);
    for (const auto& block : net.paths) {
      RMat delta = RMat::Zero(H.rows(), H.cols());
      for (const auto& path : block) {
        RMat Z = H;
        for (std::size_t l = 0; l < path.size(); ++l) {
          if (l > 0) Z = Z.cwiseMax(0.0);
          RMat A = im2col(Z, D, K) * kernel_matrix(path[l]).transpose();
          Z = std::move(A);
        }
        delta += Z;
      }
      H += delta;
    }
    out.segment(start, B) = readout(net, H, B);
  }
  return out;
}

GradResult grad(const ConvResNeXt& net, const MatrixXd& xs, const VectorXd& ys, const TrainConfig& config) {
  require(xs.rows() > 0, "invalid_argument", "empty batch");
  require(xs.rows() == ys.size(), "dimension_mismatch", "batch inputs and labels differ in count");
  require(xs.cols() == net.D, "dimension_mismatch", "input width differs from D");
  const int D = net.D, K = net.K, C = net.channels;
  const Eigen::Index B = xs.rows();

  std::vector<RMat> H{padded_batch(xs, C)};
  std::vector<std::vector<PathCache>> cache(net.N, std::vector<PathCache>(net.M));
  for (int n = 0; n < net.N; ++n) {
    RMat next = H.back();
    for (int m = 0; m < net.M; ++m) {
      const auto& path = net.paths[n][m];
      PathCache& pc = cache[n][m];
      RMat Z = H.back();
      for (int l = 0; l < net.L; ++l) {
        if (l > 0) Z = Z.cwiseMax(0.0);
        pc.cols.push_back(im2col(Z, D, K));
        pc.pre.push_back(pc.cols.back() * kernel_matrix(path[l]).transpose());
        Z = pc.pre.back();
      }
      next += Z;
    }
    H.push_back(std::move(next));
  }
  const VectorXd f = readout(net, H.back(), B);
  VectorXd slope;
  GradResult out;
  out.loss = loss_and_slope(config.loss, f, ys, &slope);
  const NormReport norms = norm_report(net);
  out.objective = out.loss + config.lambda1 * norms.b_res + config.lambda2 * norms.b_out;

  out.grad = net;
  out.grad.w_out.setZero();
  RMat gH = RMat::Zero(H.back().rows(), C);
  for (Eigen::Index b = 0; b < B; ++b)
    for (int i = 0; i < D; ++i)
      for (int c = 0; c < C; ++c) {
        out.grad.w_out(i * C + c) += slope(b) * H.back()(b * D + i, c);
        gH(b * D + i, c) = slope(b) * net.w_out(i * C + c);
      }
  out.grad.w_out += 2.0 * config.lambda2 * net.w_out;

  for (int n = net.N - 1; n >= 0; --n) {
    RMat gin = gH;
    for (int m = 0; m < net.M; ++m) {
      const auto& path = net.paths[n][m];
      PathCache& pc = cache[n][m];
      RMat gA = gH;
      for (int l = net.L - 1; l >= 0; --l) {
        ConvKernel& gk = out.grad.paths[n][m][l];
        KMap gW(gk.entries().data(), gk.out_channels(), static_cast<Eigen::Index>(K) * gk.in_channels());
        gW.noalias() = gA.transpose() * pc.cols[l];
        gW += 2.0 * config.lambda1 * kernel_matrix(path[l]);
        const RMat gX = gA * kernel_matrix(path[l]);
        RMat gZ = RMat::Zero(gX.rows(), path[l].in_channels());
        col2im_add(gX, D, K, gZ);
        if (l > 0) {
          gA = gZ.cwiseProduct((pc.pre[l - 1].array() > 0.0).cast<double>().matrix());
        } else {
          gin += gZ;
        }
      }
    }
    gH = std::move(gin);
  }
  return out;
}

double objective(const ConvResNeXt& net, const MatrixXd& xs, const VectorXd& ys, const TrainConfig& config) {
  const VectorXd f = predict(net, xs);
  check_labels(f, ys);
  const NormReport norms = norm_report(net);
  return loss_and_slope(config.loss, f, ys, nullptr) + config.lambda1 * norms.b_res +
         config.lambda2 * norms.b_out;
}

FitResult fit(ConvResNeXt net, const MatrixXd& all_xs, const VectorXd& all_ys, const TrainConfig& config) {
  config.validate();
  net.validate();
  require(all_xs.rows() == all_ys.size() && all_xs.rows() > 0, "dimension_mismatch",
          "need matching nonempty data");

  MatrixXd xs = all_xs, vx;
  VectorXd ys = all_ys, vy;
  const Eigen::Index nval = static_cast<Eigen::Index>(config.validation_fraction * all_xs.rows());
  if (nval > 0) {
    require(nval < all_xs.rows(), "invalid_argument", "validation split leaves no training rows");
    std::vector<Eigen::Index> perm(all_xs.rows());
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    auto rng = make_rng(config.seed, kStreamSplit, 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Eigen::Index ntr = all_xs.rows() - nval;
    xs.resize(ntr, all_xs.cols());
    ys.resize(ntr);
    vx.resize(nval, all_xs.cols());
    vy.resize(nval);
    for (Eigen::Index i = 0; i < ntr; ++i) {
      xs.row(i) = all_xs.row(perm[i]);
      ys(i) = all_ys(perm[i]);
    }
    for (Eigen::Index i = 0; i < nval; ++i) {
      vx.row(i) = all_xs.row(perm[ntr + i]);
      vy(i) = all_ys(perm[ntr + i]);
    }
  }

  const Eigen::Index n = xs.rows();
  const Eigen::Index bs = std::min<Eigen::Index>(config.batch_size, n);
  std::vector<Eigen::Index> order(n);
  FitResult out;
  ConvResNeXt best;
  double best_val = std::numeric_limits<double>::infinity();
  MatrixXd bx(bs, xs.cols());
  VectorXd by(bs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto rng = make_rng(config.seed, kStreamBatch, static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += bs) {
      const Eigen::Index len = std::min(bs, n - start);
      bx.resize(len, xs.cols());
      by.resize(len);
      for (Eigen::Index i = 0; i < len; ++i) {
        bx.row(i) = xs.row(order[start + i]);
        by(i) = ys(order[start + i]);
      }
      const GradResult g = grad(net, bx, by, config);
      if (!std::isfinite(g.objective))
        throw Error("divergence", "objective became non-finite in epoch " + std::to_string(epoch));
      if (!config.freeze_residual)
        for (int b = 0; b < net.N; ++b)
          for (int m = 0; m < net.M; ++m)
            for (int l = 0; l < net.L; ++l) {
              auto& w = net.paths[b][m][l].entries();
              const auto& gw = g.grad.paths[b][m][l].entries();
              for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.lr * gw[i];
            }
      net.w_out -= config.lr * g.grad.w_out;
    }
    const double obj = objective(net, xs, ys, config);
    if (!std::isfinite(obj))
      throw Error("divergence", "objective became non-finite in epoch " + std::to_string(epoch));
    out.trace.push_back(obj);
    if (nval > 0) {
      const double v = loss_and_slope(config.loss, predict(net, vx), vy, nullptr);
      out.validation.push_back(v);
      if (v < best_val) {
        best_val = v;
        best = net;
        out.best_epoch = epoch;
      }
    }
  }
  if (out.best_epoch >= 0) net = std::move(best);
  out.norms = norm_report(net);
  out.net = std::move(net);
  return out;
}

int parameter_count(const ConvResNeXt& net) {
  std::size_t count = static_cast<std::size_t>(net.w_out.size());
  for (const auto& block : net.paths)
    for (const auto& path : block)
      for (const auto& k : path) count += k.entries().size();
  return static_cast<int>(count);
}

}  // namespace besovnet
