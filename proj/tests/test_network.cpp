#include <algorithm>
#include <cmath>
#include <random>

#include "besovnet/dense_ops.hpp"
#include "besovnet/error.hpp"
#include "besovnet/network.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace besovnet;

namespace {

ConvKernel random_kernel(std::mt19937_64& rng, int out, int K, int in) {
  std::normal_distribution<double> g;
  ConvKernel W(out, K, in);
  for (auto& e : W.entries()) e = g(rng);
  return W;
}

DenseNet random_dense(std::mt19937_64& rng, std::vector<int> sizes, bool bias) {
  std::normal_distribution<double> g;
  DenseNet net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer{Eigen::MatrixXd(sizes[l + 1], sizes[l]), Eigen::VectorXd::Zero(sizes[l + 1])};
    for (Eigen::Index i = 0; i < layer.W.size(); ++i) layer.W.data()[i] = g(rng);
    if (bias)
      for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b(i) = g(rng);
    net.layers.push_back(layer);
  }
  return net;
}

ConvResNeXt random_resnext(std::mt19937_64& rng, int D, int K, int ch, int N, int M, int L) {
  std::normal_distribution<double> g;
  ConvResNeXt net = ConvResNeXt::zeros(D, K, ch, N, M, L, ch);
  for (auto& blk : net.paths)
    for (auto& path : blk)
      for (auto& W : path)
        for (auto& e : W.entries()) e = 0.3 * g(rng);
  for (Eigen::Index i = 0; i < net.w_out.size(); ++i) net.w_out(i) = g(rng);
  return net;
}

}  // namespace

TEST_CASE("conv1d examples") {
  ConvKernel W(1, 2, 1);
  W.at(0, 0, 0) = 1.0;
  W.at(0, 1, 0) = 2.0;
  Eigen::MatrixXd z(3, 1);
  z << 1, 2, 3;
  const Eigen::MatrixXd y = conv1d(W, z);
  CHECK(y(0, 0) == 5.0);
  CHECK(y(1, 0) == 8.0);
  CHECK(y(2, 0) == 3.0);

  ConvKernel bad(1, 2, 2);
  CHECK_THROWS_AS(conv1d(bad, z), Error);
}

TEST_CASE("conv1d equals the naive sum on random instances") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> Dd(1, 16), Kd(1, 6), wd(1, 8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const int D = Dd(rng), K = Kd(rng), in = wd(rng), out = wd(rng);
    const ConvKernel W = random_kernel(rng, out, K, in);
    Eigen::MatrixXd z(D, in);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
    const Eigen::MatrixXd y = conv1d(W, z);
    const Eigen::MatrixXd ref = oracle::naive_conv(W, z);
    CHECK((y.array() == ref.array()).all());
  }
}

TEST_CASE("conv1d norm inequality") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> Dd(1, 16), Kd(1, 6), wd(1, 5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const int D = Dd(rng), K = Kd(rng), in = wd(rng), out = wd(rng);
    const ConvKernel W = random_kernel(rng, out, K, in);
    Eigen::MatrixXd z(D, in);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
    const double lhs = conv1d(W, z).norm();
    CHECK(lhs <= std::sqrt(K * W.sq_norm()) * z.norm() * (1 + 1e-12));
  }
}

TEST_CASE("dense forward") {
  DenseNet net;
  net.layers.push_back({(Eigen::MatrixXd(2, 1) << 1, -1).finished(), Eigen::Vector2d(0, 0)});
  net.layers.push_back({(Eigen::MatrixXd(1, 2) << 1, 1).finished(), Eigen::VectorXd::Zero(1)});
  CHECK(dense_forward(net, Eigen::VectorXd::Constant(1, -3.0))(0) == 3.0);
  CHECK(dense_forward(net, Eigen::VectorXd::Constant(1, 2.5))(0) == 2.5);
  CHECK_THROWS_AS(dense_forward(net, Eigen::VectorXd::Zero(2)), Error);
  CHECK_THROWS_AS(dense_forward(DenseNet{}, Eigen::VectorXd::Zero(1)), Error);
  CHECK(net.width() == 2);
  CHECK(net.sq_norm() == 4.0);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const DenseNet r = random_dense(rng, {3, 5, 4, 2}, true);
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x(i) = g(rng);
    CHECK((dense_forward(r, x) - oracle::dense_eval(r, x)).norm() <= 1e-12 * (1 + x.norm()) * 10);
  }
}

TEST_CASE("dense algebra") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  const DenseNet a = random_dense(rng, {2, 4, 3}, true);
  const DenseNet b = random_dense(rng, {3, 5, 1}, true);
  const DenseNet c = random_dense(rng, {2, 3, 2}, true);
  const DenseNet ab = compose(a, b);
  CHECK(ab.depth() == 3);
  const DenseNet ac = parallel(a, c);
  const DenseNet padded = pad_depth(a, 5);
  CHECK(padded.depth() == 5);
  const DenseNet carry = carry_signed(2, 4);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd x(2);
    x << g(rng), g(rng);
    CHECK(std::abs(dense_forward(ab, x)(0) - dense_forward(b, dense_forward(a, x))(0)) <= 1e-10);
    const Eigen::VectorXd pv = dense_forward(ac, x);
    CHECK((pv.head(3) - dense_forward(a, x)).norm() <= 1e-12);
    CHECK((pv.tail(2) - dense_forward(c, x)).norm() <= 1e-12);
    CHECK((dense_forward(padded, x) - dense_forward(a, x)).norm() <= 1e-12);
    CHECK((dense_forward(carry, x) - x).norm() <= 1e-15);
    const Eigen::VectorXd s = dense_forward(stack(a, c), (Eigen::VectorXd(4) << x, -x).finished());
    CHECK((s.head(3) - dense_forward(a, x)).norm() <= 1e-12);
    CHECK((s.tail(2) - dense_forward(c, -x)).norm() <= 1e-12);
  }
  CHECK_THROWS_AS(parallel(a, padded), Error);
}

TEST_CASE("residual forward") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;

  // Zero paths leave the padded input; w_out on the ones channel reads 1.
  ConvResNeXt zero = ConvResNeXt::zeros(5, 3, 3, 2, 2, 3, 3);
  zero.w_out.setZero();
  zero.w_out(1) = 1.0;
  Eigen::VectorXd x(5);
  for (int i = 0; i < 5; ++i) x(i) = g(rng);
  CHECK(resnext_forward(zero, x) == 1.0);
  zero.w_out.setZero();
  for (int i = 0; i < 5; ++i) zero.w_out(i * 3) = 1.0;
  CHECK(std::abs(resnext_forward(zero, x) - x.sum()) <= 1e-12);

  // A duplicated path doubles its residual contribution.
  ConvResNeXt one = random_resnext(rng, 6, 3, 3, 1, 1, 3);
  ConvResNeXt two = one;
  two.M = 2;
  two.paths[0].push_back(one.paths[0][0]);
  ConvResNeXt none = one;
  for (auto& W : none.paths[0][0]) std::fill(W.entries().begin(), W.entries().end(), 0.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(6);
    for (int i = 0; i < 6; ++i) v(i) = g(rng);
    const double base = resnext_forward(none, v);
    const double r1 = resnext_forward(one, v) - base;
    const double r2 = resnext_forward(two, v) - base;
    CHECK(std::abs(r2 - 2 * r1) <= 1e-12 * (1 + std::abs(r1)) * 10);
  }

  ConvResNeXt net = random_resnext(rng, 7, 4, 4, 3, 2, 3);
  CHECK_NOTHROW(net.validate());
  Eigen::VectorXd v(7);
  for (int i = 0; i < 7; ++i) v(i) = g(rng);
  CHECK(resnext_forward(net, v) == resnext_forward(net, v));
  CHECK_THROWS_AS(resnext_forward(net, Eigen::VectorXd::Zero(6)), Error);
}

TEST_CASE("rescale keeps the function") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  ConvResNeXt net = random_resnext(rng, 6, 3, 3, 1, 2, 3);
  ConvResNeXt s = net;
  s.rescale(2.0);
  // A single block is positively homogeneous, so the output is unchanged.
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(6);
    for (int i = 0; i < 6; ++i) v(i) = g(rng);
    const Eigen::MatrixXd z = pad_input(v, 3);
    Eigen::MatrixXd r1 = Eigen::MatrixXd::Zero(6, 3), r2 = r1;
    for (int m = 0; m < 2; ++m) {
      r1 += path_forward(net.paths[0][m], z);
      r2 += path_forward(s.paths[0][m], z);
    }
    CHECK((r2 / 8.0 - r1).norm() <= 1e-12 * (1 + r1.norm()));
  }
}

TEST_CASE("norm report") {
  ConvResNeXt zero = ConvResNeXt::zeros(4, 2, 2, 2, 2, 2, 2);
  zero.w_out.setZero();
  const NormReport z = norm_report(zero);
  CHECK(z.b_res == 0.0);
  CHECK(z.b_out == 0.0);

  ConvResNeXt one;
  one.D = 2;
  one.K = 2;
  one.channels = 1;
  one.N = one.M = one.L = 1;
  ConvKernel W(1, 2, 1);
  W.at(0, 0, 0) = 3;
  W.at(0, 1, 0) = 4;
  one.paths = {{{W}}};
  one.w_out = Eigen::VectorXd::Zero(2);
  CHECK(norm_report(one).b_res == 25.0);
  CHECK(norm_report(one).per_path[0][0] == 25.0);

  std::mt19937_64 rng(10);
  ConvResNeXt net = random_resnext(rng, 5, 3, 3, 4, 3, 3);
  const NormReport r = norm_report(net);
  double total = 0;
  for (double b : r.per_block) total += b;
  CHECK(std::abs(total - r.b_res) <= 1e-12 * r.b_res);
  CHECK(std::abs(r.b_out - net.w_out.squaredNorm()) <= 1e-12 * r.b_out);

  ConvResNeXt perm = net;
  std::swap(perm.paths[0], perm.paths[3]);
  const NormReport rp = norm_report(perm);
  CHECK(std::abs(rp.b_res - r.b_res) <= 1e-12 * r.b_res);
  CHECK(rp.per_block[0] == r.per_block[3]);

  NormBudget budget{r.b_res, r.b_out};
  CHECK(budget.admits(r));
  budget.b_res *= 0.5;
  CHECK_FALSE(budget.admits(r));
}
