// Acceptance run: one PASS/FAIL line per headline criterion.

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "besovnet/bspline.hpp"
#include "besovnet/complexity.hpp"
#include "besovnet/construct.hpp"
#include "besovnet/dense_ops.hpp"
#include "besovnet/manifold.hpp"
#include "besovnet/network.hpp"
#include "besovnet/train.hpp"
#include "oracles.hpp"

using namespace besovnet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DenseNet random_dense(std::mt19937_64& rng, const std::vector<int>& sizes, bool bias, double scale = 1.0) {
  std::normal_distribution<double> g;
  DenseNet net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer{Eigen::MatrixXd(sizes[l + 1], sizes[l]), Eigen::VectorXd::Zero(sizes[l + 1])};
    for (Eigen::Index i = 0; i < layer.W.size(); ++i) layer.W.data()[i] = scale * g(rng);
    if (bias)
      for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b(i) = scale * g(rng);
    net.layers.push_back(layer);
  }
  return net;
}

Eigen::VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// Scales every path kernel so that K b_res / L equals `level`.
void normalize_residual(ConvResNeXt& net, double level) {
  const double c = std::sqrt(level * net.L / (net.K * norm_report(net).b_res));
  for (auto& blk : net.paths)
    for (auto& path : blk)
      for (auto& W : path)
        for (auto& e : W.entries()) e *= c;
}

// 1. conv1d against the naive double sum.
Outcome conv_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> Dd(1, 16), Kd(1, 6), wd(1, 8);
  std::normal_distribution<double> g;
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const int D = Dd(rng), K = Kd(rng), in = wd(rng), out = wd(rng);
    ConvKernel W(out, K, in);
    for (auto& e : W.entries()) e = g(rng);
    Eigen::MatrixXd z(D, in);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
    if (!(conv1d(W, z).array() == oracle::naive_conv(W, z).array()).all()) ++mismatches;
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && s < 5.0, std::to_string(mismatches) + " of 1000 instances differ"};
}

// 2. Cardinal B-spline against Cox-de Boor and the partition of unity.
Outcome bspline_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m)
    for (int i = 0; i <= 20000; ++i) {
      const double z = -1.0 + (m + 3.0) * i / 20000.0;
      worst = std::max(worst, std::abs(eval_cardinal(m, z) - oracle::cox_de_boor(m, z)));
    }
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> z(-100.0, 100.0);
  std::uniform_int_distribution<int> md(1, 5);
  double pou = 0.0;
  for (int i = 0; i < 10000; ++i) pou = std::max(pou, std::abs(partition_check(md(rng), z(rng)) - 1.0));
  const double s = seconds_since(t0);
  return {worst <= 1e-12 && pou <= 1e-10 && s < 10.0,
          "max |M - CdB| " + fmt("%.2e", worst) + ", partition deviation " + fmt("%.2e", pou)};
}

// 3. Gadget contracts.
Outcome gadget_contracts() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(103);
  bool ok = true;
  std::ostringstream msg;

  const double C = 2.0;
  const DenseNet gate = build_multiply_gate(C);
  std::uniform_real_distribution<double> ux(0.0, C);
  int gate_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const double x = ux(rng), y = (rng() & 1) ? 1.0 : 0.0;
    const double h0 = std::max(0.0 + (-1.0 / C) * x + 1.0 * y + 0.0, 0.0);
    const double h1 = std::max(0.0 + 0.0 * x + 1.0 * y + 0.0, 0.0);
    const double ref = 0.0 + (-C) * h0 + C * h1 + 0.0;
    const double out = dense_forward(gate, Eigen::Vector2d(x, y))(0);
    if (out != ref || (y == 0.0 && out != 0.0) || std::abs(out - x * y) > 4 * 1e-16 * C) ++gate_bad;
  }
  ok &= gate_bad == 0;
  msg << "gate " << gate_bad << " bad";

  const double tau = 2.0;
  const Eigen::VectorXd c = gaussian(rng, 5) * 0.2;
  const GadgetReport dist = build_distance_sq(c, 9, tau / 2, tau);
  std::uniform_real_distribution<double> far(tau, 5 * tau);
  int clip_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const Eigen::VectorXd v = gaussian(rng, 5);
    if (dense_forward(dist.net, c + far(rng) * v / v.norm())(0) != tau * tau) ++clip_bad;
  }
  ok &= clip_bad == 0;
  msg << "; clip " << clip_bad << " bad";

  ChartCover cover;
  cover.centers = {c};
  cover.frames = {Eigen::MatrixXd::Identity(5, 1)};
  cover.r = 0.5;
  cover.R_outer = 1.0;
  cover.tau = tau;
  cover.delta = indicator_slack(cover, 11);
  const DenseNet ind = build_indicator(cover, 0, 11);
  std::uniform_real_distribution<double> inner(0.0, cover.r), outer(cover.R_outer, 10.0);
  int ind_bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const Eigen::VectorXd v = gaussian(rng, 5);
    if (dense_forward(ind, c + inner(rng) * v / v.norm())(0) != 1.0) ++ind_bad;
    if (dense_forward(ind, c + outer(rng) * v / v.norm())(0) != 0.0) ++ind_bad;
  }
  ok &= ind_bad == 0;
  msg << "; indicator " << ind_bad << " bad";

  const BSplineAtom atom{2, 1, {0.2}, 1.0};
  const double lo = atom.s[0], hi = atom.s[0] + 1.5;
  const int base = bspline_net_min_depth(2, 1);
  std::vector<double> Ls, logs;
  int off_bad = 0;
  double last_err = 0.0;
  std::uniform_real_distribution<double> gap(1e-9, 3.0);
  for (int L = base; L <= base + 16; L += 2) {
    const GadgetReport r = build_bspline_net(atom, L);
    Ls.push_back(L);
    logs.push_back(std::log(r.measured_error));
    last_err = r.measured_error;
    for (int t = 0; t < 1000; ++t) {
      if (dense_forward(r.net, Eigen::VectorXd::Constant(1, lo - gap(rng)))(0) != 0.0) ++off_bad;
      if (dense_forward(r.net, Eigen::VectorXd::Constant(1, hi + gap(rng)))(0) != 0.0) ++off_bad;
    }
  }
  const double slope = oracle::ols_slope(Ls, logs).slope;
  ok &= off_bad == 0 && last_err <= 1e-3 && slope < -0.1;
  msg << "; spline off-support " << off_bad << " nonzero, in-support error " << fmt("%.2e", last_err)
      << ", log-error slope " << fmt("%.3f", slope) << "/layer";
  const double s = seconds_since(t0);
  ok &= s < 60.0;
  return {ok, msg.str()};
}

// 4. Bias removal and dense-to-conv equivalence.
Outcome conversion_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<int> dim(1, 6), depth(1, 4), kd(2, 6);
  double rm_dev = 0.0, cnn_dev = 0.0;
  int norm_bad = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<int> sizes{dim(rng)};
    const int L = depth(rng);
    for (int l = 0; l < L; ++l) sizes.push_back(dim(rng));
    const DenseNet net = random_dense(rng, sizes, true);
    const DenseNet nb = remove_bias(net);
    const int K = kd(rng);
    const ConvPath path = fnn_to_cnn(nb, K);
    const int L0 = gather_depth(nb.in_dim() - 1, K);
    double conv_norm = 0.0;
    for (const auto& W : path.kernels) conv_norm += W.sq_norm();
    if (!(conv_norm <= 4.0 * nb.sq_norm() + 4.0 * nb.width() * L0)) ++norm_bad;
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd x = gaussian(rng, sizes[0]);
      Eigen::VectorXd x1(sizes[0] + 1);
      x1 << x, 1.0;
      const Eigen::VectorXd f = dense_forward(net, x);
      rm_dev = std::max(rm_dev, (dense_forward(nb, x1) - f).cwiseAbs().maxCoeff());
      Eigen::MatrixXd z = x1;
      for (std::size_t l = 0; l < path.kernels.size(); ++l) {
        if (l > 0) z = z.cwiseMax(0.0);
        z = conv1d(path.kernels[l], z);
      }
      for (Eigen::Index j = 0; j < f.size(); ++j) cnn_dev = std::max(cnn_dev, std::abs(z(0, j) - f(j)));
    }
  }
  const double s = seconds_since(t0);
  return {rm_dev <= 1e-9 && cnn_dev <= 1e-9 && norm_bad == 0 && s < 60.0,
          "bias-removed dev " + fmt("%.2e", rm_dev) + ", conv dev " + fmt("%.2e", cnn_dev) + ", norm violations " +
              std::to_string(norm_bad)};
}

// 5. Residual x c, w_out x c^{-L}.
Outcome scaling_invariance() {
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> Dd(3, 6), Pd(1, 6), kd(0, 3), Ld(3, 7);
  std::uniform_real_distribution<double> sd(-0.5, 1.0), ad(-2.0, 2.0), cd(0.5, 3.0), ud(-1.2, 1.2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int D = Dd(rng);
    ChartCover cover;
    cover.centers = {gaussian(rng, D) * 0.1};
    cover.frames = {random_rotation(D, 500 + t).leftCols(1)};
    cover.r = 0.5;
    cover.R_outer = 1.0;
    cover.tau = 2.0;
    SparseSeries s;
    const int P = Pd(rng);
    for (int j = 0; j < P; ++j) s.atoms.push_back({2, kd(rng), {sd(rng)}, ad(rng)});
    AssembleOptions opt;
    opt.L = Ld(rng);
    opt.paths_per_block = 2;
    const Assembly a = assemble_resnext({s}, cover, opt);
    const ConvResNeXt conv = to_conv(a.net, 3);
    const double c = cd(rng);
    DenseResNeXt ds = a.net;
    ds.rescale(c);
    ConvResNeXt cs = conv;
    cs.rescale(c);
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd x(D);
      for (int j = 0; j < D; ++j) x(j) = ud(rng);
      const double f = resnext_forward(a.net, x), fc = resnext_forward(conv, x);
      const double gd = resnext_forward(ds, x), gc = resnext_forward(cs, x);
      auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::abs(a); };
      worst = std::max({worst, rel(f, gd), rel(fc, gc)});
    }
  }
  return {worst <= 1e-9, "max relative change " + fmt("%.2e", worst)};
}

// 6. Error trend of the assembled network in P and L.
Outcome approximation_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  auto target = [](const std::vector<double>& u) {
    return std::sin(2.0 * std::numbers::pi * u[0]) + 0.5 * u[0] * u[0];
  };
  BesovParams params;
  std::map<int, SparseSeries> series;
  for (int P : {4, 8, 16, 32}) series[P] = sparse_approximate(target, params, P, 4);

  auto grid_error = [&](int P, int L, std::uint64_t seed) {
    ChartCover cover;
    cover.centers = {Eigen::VectorXd::Zero(3)};
    cover.frames = {random_rotation(3, seed).leftCols(1)};
    cover.r = 0.5;
    cover.R_outer = 1.0;
    cover.tau = 2.0;
    AssembleOptions opt;
    opt.L = L;
    const Assembly a = assemble_resnext({series[P]}, cover, opt);
    std::mt19937_64 rng(seed);
    const double shift = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double err = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const double u = (i + shift) / n;
      const Eigen::VectorXd x = cover.centers[0] + 2.0 * cover.r * (u - 0.5) * cover.frames[0].col(0);
      err = std::max(err, std::abs(resnext_forward(a.net, x) - target({u})));
    }
    return err;
  };

  const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  bool monotone = true;
  std::ostringstream msg;
  msg << "L=10 error over P {4,8,16,32}:";
  for (auto seed : seeds) {
    double prev = INFINITY;
    for (int P : {4, 8, 16, 32}) {
      const double e = grid_error(P, 10, seed);
      if (seed == 0) msg << ' ' << fmt("%.2e", e);
      monotone &= e <= prev;
      prev = e;
    }
  }
  std::vector<double> Ls, logs;
  msg << "; P=32 error over L {4,6,8,10}:";
  for (auto seed : seeds)
    for (int L : {4, 6, 8, 10}) {
      const double e = grid_error(32, L, seed);
      if (seed == 0) msg << ' ' << fmt("%.2e", e);
      Ls.push_back(L);
      logs.push_back(std::log(e));
    }
  const auto fit = oracle::ols_slope(Ls, logs);
  const boost::math::students_t dist(fit.df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(fit.t)));
  msg << "; log-slope " << fmt("%.3f", fit.slope) << "/layer, p=" << fmt("%.1e", p);
  const double s = seconds_since(t0);
  return {monotone && fit.slope < 0.0 && p < 0.05 && s < 600.0, msg.str()};
}

// 7. Monte-Carlo validation of the Lipschitz and perturbation bounds.
Outcome capacity_validation() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g;
  double worst_dense = 0.0, worst_conv = 0.0, worst_res = 0.0, worst_rm = 0.0;
  const int pairs = 10000;

  // Half of the dense nets are rank-one chains with positive vectors, which
  // make the bound tight; the other half are Gaussian.
  for (int t = 0; t < 50; ++t) {
    const int L = 2 + t % 4, w = 5;
    DenseNet net;
    std::vector<Eigen::VectorXd> u;
    for (int l = 0; l <= L; ++l) {
      Eigen::VectorXd v = gaussian(rng, l == L ? 1 : w).cwiseAbs();
      u.push_back(v / v.norm());
    }
    for (int l = 0; l < L; ++l) {
      const int out = l == L - 1 ? 1 : w;
      DenseLayer layer;
      if (t % 2 == 0) {
        layer.W = (0.5 + unit(rng)) * u[l + 1] * u[l].transpose();
      } else {
        layer.W = Eigen::MatrixXd(out, w);
        for (Eigen::Index i = 0; i < layer.W.size(); ++i) layer.W.data()[i] = 0.4 * g(rng);
      }
      layer.b = Eigen::VectorXd::Zero(out);
      net.layers.push_back(layer);
    }
    const double bound = lipschitz_dense(net.sq_norm(), L);
    for (int i = 0; i < pairs; ++i) {
      const Eigen::VectorXd x = gaussian(rng, w);
      const Eigen::VectorXd y = (i % 2) ? Eigen::VectorXd(x + 1e-3 * gaussian(rng, w))
                                        : Eigen::VectorXd(x + unit(rng) * u[0]);
      const double q = (dense_forward(net, x) - dense_forward(net, y)).norm() / (x - y).norm();
      worst_dense = std::max(worst_dense, q / bound);
    }
  }

  for (int t = 0; t < 50; ++t) {
    const int L = 2 + t % 3, K = 2 + t % 4, ch = 3, D = 8;
    std::vector<ConvKernel> path;
    double B = 0.0;
    for (int l = 0; l < L; ++l) {
      ConvKernel W(ch, K, ch);
      for (auto& e : W.entries()) e = 0.3 * g(rng);
      B += W.sq_norm();
      path.push_back(W);
    }
    const double bound = lipschitz_conv(B, L, K);
    for (int i = 0; i < pairs; ++i) {
      Eigen::MatrixXd z(D, ch), y(D, ch);
      for (Eigen::Index j = 0; j < z.size(); ++j) z.data()[j] = g(rng);
      for (Eigen::Index j = 0; j < y.size(); ++j) y.data()[j] = z.data()[j] + ((i % 2) ? 1e-3 : 1.0) * g(rng);
      const double q = (path_forward(path, z) - path_forward(path, y)).norm() / (z - y).norm();
      worst_conv = std::max(worst_conv, q / bound);
    }
  }

  for (int t = 0; t < 50; ++t) {
    const int D = 6, K = 3, L = 3;
    ConvResNeXt net = init_resnext(D, K, 3, 2, 2, L, 700 + t);
    normalize_residual(net, 0.5 + unit(rng));
    const NormReport r = norm_report(net);
    const double bound = lipschitz_resnext(r.b_res, L, K) * std::sqrt(r.b_out);
    for (int i = 0; i < pairs; ++i) {
      const Eigen::VectorXd x = gaussian(rng, D);
      const Eigen::VectorXd y = x + ((i % 2) ? 1e-3 : 1.0) * gaussian(rng, D);
      const double q = std::abs(resnext_forward(net, x) - resnext_forward(net, y)) / (x - y).norm();
      worst_res = std::max(worst_res, q / bound);
    }
  }

  for (int t = 0; t < 100; ++t) {
    const int D = 6, K = 3, L = 3, N = 3, M = 2;
    ConvResNeXt net = init_resnext(D, K, 3, N, M, L, 900 + t);
    normalize_residual(net, 0.5 + unit(rng));
    const NormReport r = norm_report(net);
    const int n = t % N, m = (t / N) % M;
    ConvResNeXt cut = net;
    for (auto& W : cut.paths[n][m]) std::fill(W.entries().begin(), W.entries().end(), 0.0);
    const double bound = block_removal_perturbation(r.per_path[n][m], r.b_res, r.b_out, L, K);
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = gaussian(rng, D) * unit(rng);
      const double scale = pad_input(x, 3).norm();
      const double diff = std::abs(resnext_forward(net, x) - resnext_forward(cut, x));
      worst_rm = std::max(worst_rm, diff / (bound * scale));
    }
  }
  const double s = seconds_since(t0);
  const bool ok = worst_dense <= 1.0 && worst_conv <= 1.0 && worst_res <= 1.0 && worst_rm <= 1.0 && s < 300.0;
  return {ok, "max quotient/bound: dense " + fmt("%.3f", worst_dense) + ", conv " + fmt("%.3f", worst_conv) +
                  ", resnext " + fmt("%.2e", worst_res) + ", block removal " + fmt("%.2e", worst_rm)};
}

// 8. Reverse-mode gradient against central differences.
Outcome gradient_check() {
  const ConvResNeXt net = init_resnext(8, 3, 4, 2, 2, 3, 108);
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd xs(32, 8);
  Eigen::VectorXd ys(32);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 8; ++j) xs(i, j) = u(rng);
    ys(i) = std::sin(3 * xs(i, 0)) + xs(i, 1);
  }
  TrainConfig cfg;
  cfg.lambda1 = 1e-3;
  cfg.lambda2 = 1e-3;
  const double gap = oracle::gradient_gap(net, xs, ys, cfg, 50, 109);
  return {gap <= 1e-4, "max relative error " + fmt("%.2e", gap) + " over 50 coordinates"};
}

// 9. MSE against ambient dimension, ConvResNeXt versus kernel ridge.
Outcome dimension_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  BenchConfig c;
  c.sweep = "D";
  c.values = {4, 8, 16};
  c.seeds = {0, 1, 2, 3, 4};
  c.n = 2000;
  const auto rows = run_benchmark(c);
  std::map<std::string, std::map<double, double>> mean;
  for (const auto& r : rows) mean[r.estimator][r.sweep_value] += r.mse / c.seeds.size();
  auto slope = [&](const std::string& est) {
    std::vector<double> x, y;
    for (const auto& [D, m] : mean[est]) {
      x.push_back(D);
      y.push_back(m);
    }
    return oracle::ols_slope(x, y).slope;
  };
  const double sn = slope("convresnext"), sk = slope("krr");
  const double n16 = mean["convresnext"][16], k16 = mean["krr"][16];
  std::ostringstream msg;
  msg << "mean MSE net/krr:";
  for (double D : c.values) msg << " D=" << D << ' ' << fmt("%.4f", mean["convresnext"][D]) << '/' << fmt("%.4f", mean["krr"][D]);
  msg << "; slopes " << fmt("%.2e", sn) << " vs " << fmt("%.2e", sk);
  const double s = seconds_since(t0);
  return {sn < sk && n16 < k16 && s < 1800.0, msg.str()};
}

// 10. Weight decay switches off building blocks.
Outcome weight_decay_sparsity() {
  const int N = 4, M = 4, D = 8;
  std::ostringstream msg;
  auto sparse_fraction = [&](const ConvResNeXt& net) {
    const NormReport r = norm_report(net);
    double top = 0.0;
    for (const auto& row : r.per_path)
      for (double v : row) top = std::max(top, std::sqrt(v));
    int small = 0;
    for (const auto& row : r.per_path)
      for (double v : row) small += std::sqrt(v) < 0.01 * top ? 1 : 0;
    return static_cast<double>(small) / (N * M);
  };
  bool each = true;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    // y = 2|x_0| - 1 on the cube; two ReLU units suffice.
    std::mt19937_64 rng(1000 + rep);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd xs(200, D);
    Eigen::VectorXd ys(200);
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < D; ++j) xs(i, j) = u(rng);
      ys(i) = 2.0 * std::abs(xs(i, 0)) - 1.0;
    }
    const ConvResNeXt net = init_resnext(D, 3, 4, N, M, 3, rep);
    TrainConfig cfg;
    cfg.lr = 0.01;
    cfg.batch_size = 20;
    cfg.epochs = 2500;
    cfg.seed = rep;
    const double plain = sparse_fraction(fit(net, xs, ys, cfg).net);
    cfg.lambda1 = 0.015;
    const double decay = sparse_fraction(fit(net, xs, ys, cfg).net);
    each &= decay >= 0.25 && plain < 0.25;
    msg << (rep ? ", " : "sparse path fraction decay/plain: ") << fmt("%.2f", decay) << '/' << fmt("%.2f", plain);
  }
  return {each, msg.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"conv_oracle_equivalence", conv_oracle},
      {"bspline_correctness", bspline_correctness},
      {"gadget_contracts", gadget_contracts},
      {"bias_removal_and_conv_conversion", conversion_equivalence},
      {"scaling_invariance", scaling_invariance},
      {"approximation_trend", approximation_trend},
      {"capacity_validation", capacity_validation},
      {"gradient_check", gradient_check},
      {"dimension_sweep_vs_krr", dimension_sweep},
      {"weight_decay_sparsity", weight_decay_sparsity},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& [name, run] : criteria) {
    if (name.find(only) == std::string::npos) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
