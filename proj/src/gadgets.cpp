#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "besovnet/construct.hpp"
#include "besovnet/dense_ops.hpp"
#include "besovnet/error.hpp"
#include "gadgets_internal.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd row(std::initializer_list<double> v) {
  MatrixXd m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(0, i++) = x;
  return m;
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

GadgetReport finish(DenseNet net, std::string contract, double measured, double certified) {
  GadgetReport rep;
  rep.depth = net.depth();
  rep.width = net.width();
  rep.sq_norm = net.sq_norm();
  rep.net = std::move(net);
  rep.contract = std::move(contract);
  rep.measured_error = measured;
  rep.certified_error = certified;
  return rep;
}

// Products x*y on [0,1]^2 via 2 sq((x+y)/2) - sq(x)/2 - sq(y)/2.
DenseNet product_net(int stages) {
  const DenseNet sq = detail::square_net(stages, 0.5);
  MatrixXd pre(3, 2);
  pre << 0.5, 0.5, 1.0, 0.0, 0.0, 1.0;
  DenseNet net = compose(affine(pre), stack({sq, sq, sq}));
  return compose(net, affine(row({2.0, -0.5, -0.5})));
}

// rho -> rho^m for rho in [0,1].
DenseNet power_net(int m, int stages) {
  if (m == 1) return affine(MatrixXd::Identity(1, 1));
  const DenseNet sq = detail::square_net(stages, 0.5);
  if (m == 2) return sq;
  const int depth = stages + 1;
  DenseNet q = parallel(sq, carry_nonneg(1, depth));
  for (int k = 3; k <= m; ++k) {
    DenseNet keep = compose(affine(row({0.0, 1.0})), carry_nonneg(1, depth));
    q = compose(q, parallel(product_net(stages), keep));
  }
  return compose(q, affine(row({1.0, 0.0})));
}

// u -> (v, tau) where tau = max(0, min(t, m+1-t)), t = 2^k (u - s) and
// v ~ M_m(t) on the support.
DenseNet coordinate_net(int m, int k, double s, int stages) {
  const double sc = std::ldexp(1.0, k);
  const double Y = 0.5 * (m + 1);
  DenseNet fold;
  fold.layers.push_back({MatrixXd(vec({sc, -sc, 2.0 * sc})),
                         vec({-sc * s, sc * s, -2.0 * sc * s - (m + 1)})});
  fold.layers.push_back({row({1.0, -1.0, -1.0}), vec({0.0})});
  fold.layers.push_back({MatrixXd::Identity(1, 1), vec({0.0})});

  const int J = m / 2 + 1;  // shifts j < (m+1)/2
  DenseNet rho;
  VectorXd shifts(J);
  for (int j = 0; j < J; ++j) shifts(j) = -j;
  rho.layers.push_back({MatrixXd::Ones(J, 1), shifts});
  MatrixXd split = MatrixXd::Zero(J + 1, J);
  for (int j = 0; j < J; ++j) split(j, j) = 1.0 / Y;
  split(J, 0) = 1.0;
  rho.layers.push_back({split, VectorXd::Zero(J + 1)});

  std::vector<DenseNet> parts(J, power_net(m, stages));
  int depth = parts.front().depth();
  parts.push_back(carry_nonneg(1, depth));
  for (auto& p : parts) p = pad_depth(p, depth);
  DenseNet powers = stack(parts);

  MatrixXd combine = MatrixXd::Zero(2, J + 1);
  const double lead = std::pow(Y, m) / factorial(m);
  for (int j = 0; j < J; ++j) combine(0, j) = lead * ((j % 2 == 0) ? 1.0 : -1.0) * binomial(m + 1, j);
  combine(1, J) = 1.0;

  DenseNet net = compose(fold, rho);
  net = compose(net, powers);
  return compose(net, affine(combine));
}

}  // namespace

namespace detail {

DenseNet square_net(int stages, double B) {
  require(stages >= 1, "invalid_argument", "square gadget needs at least one stage");
  require(B > 0.0, "invalid_argument", "square gadget bound B must be positive");
  const double inv = 1.0 / (2.0 * B);
  DenseNet net;
  net.layers.push_back({MatrixXd::Constant(4, 1, inv), vec({0.0, 0.0, -0.5, -1.0})});
  double w = 0.25;
  for (int s = 1; s < stages; ++s) {
    MatrixXd W(4, 4);
    W << 1.0, -2.0 * w, 4.0 * w, -2.0 * w,
         0.0, 2.0, -4.0, 2.0,
         0.0, 2.0, -4.0, 2.0,
         0.0, 2.0, -4.0, 2.0;
    net.layers.push_back({W, vec({0.0, 0.0, -0.5, -1.0})});
    w *= 0.25;
  }
  const double out = 4.0 * B * B;
  net.layers.push_back({row({out, -2.0 * w * out, 4.0 * w * out, -2.0 * w * out}), vec({0.0})});
  return net;
}

DenseNet distance_net(const VectorXd& c, int stages, double B, double tau) {
  const int D = static_cast<int>(c.size());
  require(D >= 1, "invalid_argument", "empty center");
  require(tau > 0.0, "invalid_argument", "tau must be positive");
  DenseNet absnet;
  MatrixXd split(2 * D, D);
  split << MatrixXd::Identity(D, D), -MatrixXd::Identity(D, D);
  VectorXd shift(2 * D);
  shift << -c, c;
  absnet.layers.push_back({split, shift});
  MatrixXd join(D, 2 * D);
  join << MatrixXd::Identity(D, D), MatrixXd::Identity(D, D);
  absnet.layers.push_back({join, VectorXd::Zero(D)});

  std::vector<DenseNet> squares(D, square_net(stages, B));
  DenseNet net = compose(absnet, stack(squares));

  const double margin = clip_margin(D, stages, B, tau);
  DenseNet clip;
  clip.layers.push_back({MatrixXd::Constant(1, D, -1.0), vec({tau * tau - margin})});
  clip.layers.push_back({row({-1.0}), vec({tau * tau})});
  return compose(net, clip);
}

double clip_margin(int D, int stages, double B, double tau) {
  const double eps = B * B * std::pow(0.25, stages);
  return D * eps + 64.0 * DBL_EPSILON * (tau * tau + 4.0 * D * B * B);
}

DenseNet indicator_tail(double lo, double hi) {
  const double eta = 1e-9;
  const double w = (1.0 + eta) / (hi - lo);
  DenseNet tail;
  tail.layers.push_back({row({1.0}), vec({-lo})});
  tail.layers.push_back({row({-w}), vec({1.0})});
  tail.layers.push_back({row({1.0}), vec({0.0})});
  return tail;
}

DenseNet spline_core(int m, int k, const std::vector<double>& s, int stages) {
  const int d = static_cast<int>(s.size());
  require(d >= 1, "invalid_argument", "atom has no coordinates");
  std::vector<DenseNet> coords;
  for (int i = 0; i < d; ++i) coords.push_back(coordinate_net(m, k, s[i], stages));
  const int cd = std::max_element(coords.begin(), coords.end(),
                                  [](const DenseNet& a, const DenseNet& b) { return a.depth() < b.depth(); })
                     ->depth();
  for (auto& c : coords) c = pad_depth(c, cd);
  DenseNet net = stack(coords);

  // Reorder (v1, tau1, ..., vd, taud) -> (v1, ..., vd, tau1, ..., taud).
  MatrixXd perm = MatrixXd::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    perm(i, 2 * i) = 1.0;
    perm(d + i, 2 * i + 1) = 1.0;
  }
  net = compose(net, affine(perm));

  // Chain of products: (p, v_i..v_d, taus) -> (p v_i, v_{i+1}..v_d, taus).
  const int depth = stages + 1;
  for (int i = 1; i < d; ++i) {
    const int width = 2 * d - i + 1;
    MatrixXd pick = MatrixXd::Zero(2, width);
    pick(0, 0) = 1.0;
    pick(1, 1) = 1.0;
    MatrixXd rest = MatrixXd::Zero(width - 2, width);
    for (int r = 0; r < width - 2; ++r) rest(r, r + 2) = 1.0;
    DenseNet step = parallel(compose(affine(pick), product_net(stages)),
                             compose(affine(rest), carry_nonneg(width - 2, depth)));
    net = compose(net, step);
  }

  // sigma(v - sum_i sigma(v - tau_i)) is exactly 0 whenever some tau_i is 0.
  DenseNet gate;
  MatrixXd g1 = MatrixXd::Zero(2 + d, 1 + d);
  g1(0, 0) = 1.0;
  g1(1, 0) = -1.0;
  for (int i = 0; i < d; ++i) {
    g1(2 + i, 0) = 1.0;
    g1(2 + i, 1 + i) = -1.0;
  }
  gate.layers.push_back({g1, VectorXd::Zero(2 + d)});
  MatrixXd g2 = MatrixXd::Constant(1, 2 + d, -1.0);
  g2(0, 0) = 1.0;
  gate.layers.push_back({g2, vec({0.0})});
  gate.layers.push_back({MatrixXd::Identity(1, 1), vec({0.0})});
  return compose(net, gate);
}

}  // namespace detail

double square_error_bound(int L, double B) { return B * B * std::pow(0.25, L - 1); }

GadgetReport build_square(int L, double B) {
  require(L >= 2, "invalid_argument", "square gadget needs depth L >= 2");
  DenseNet net = detail::square_net(L - 1, B);
  const int n = 8193;
  double err = 0.0;
  VectorXd x(1);
  for (int i = 0; i < n; ++i) {
    x(0) = 2.0 * B * i / (n - 1);
    err = std::max(err, std::abs(dense_forward(net, x)(0) - x(0) * x(0)));
  }
  return finish(std::move(net), "x^2 on [0,2B]", err, square_error_bound(L, B));
}

DenseNet build_multiply_gate(double C) {
  require(C > 0.0, "invalid_argument", "multiply gate cap C must be positive");
  DenseNet net;
  MatrixXd W(2, 2);
  W << -1.0 / C, 1.0, 0.0, 1.0;
  net.layers.push_back({W, VectorXd::Zero(2)});
  net.layers.push_back({row({-C, C}), vec({0.0})});
  return net;
}

double distance_error_bound(int D, int L, double B) {
  const int stages = L - 2;
  return 2.0 * D * B * B * std::pow(0.25, stages);
}

GadgetReport build_distance_sq(const VectorXd& c, int L, double B, double tau) {
  require(L >= 3, "invalid_argument", "distance gadget needs depth L >= 3");
  DenseNet net = detail::distance_net(c, L - 2, B, tau);
  const int D = static_cast<int>(c.size());
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-2.0 * B, 2.0 * B);
  double err = 0.0;
  VectorXd x(D);
  for (int t = 0; t < 4000; ++t) {
    for (int i = 0; i < D; ++i) x(i) = c(i) + unif(rng);
    const double d2 = (x - c).squaredNorm();
    const double target = std::min(d2, tau * tau);
    err = std::max(err, std::abs(dense_forward(net, x)(0) - target));
  }
  const double certified = 2.0 * detail::clip_margin(D, L - 2, B, tau);
  return finish(std::move(net), "min(|x-c|^2, tau^2)", err, certified);
}

double cover_coordinate_bound(const ChartCover& cover) { return 0.5 * cover.tau; }

double indicator_slack(const ChartCover& cover, int L) {
  const int D = cover.ambient_dim();
  const double B = cover_coordinate_bound(cover);
  const int stages = L - 4;
  require(stages >= 1, "invalid_argument", "indicator needs depth L >= 5");
  return 2.0 * detail::clip_margin(D, stages, B, cover.tau) + 1e-12 * (1.0 + cover.tau * cover.tau);
}

DenseNet build_indicator(const ChartCover& cover, int i, int L) {
  cover.validate();
  require(i >= 0 && i < cover.size(), "invalid_argument", "chart index out of range");
  const double need = indicator_slack(cover, L);
  require(cover.delta >= need, "infeasible",
          "indicator slack " + std::to_string(cover.delta) + " below distance error bound " +
              std::to_string(need));
  const double lo = cover.r * cover.r + cover.delta;
  const double hi = cover.R_outer * cover.R_outer - cover.delta;
  require(lo < hi, "infeasible", "indicator transition band is empty");
  DenseNet dist = detail::distance_net(cover.centers[i], L - 4, cover_coordinate_bound(cover), cover.tau);
  return compose(dist, detail::indicator_tail(lo, hi));
}

int bspline_net_min_depth(int m, int d) {
  return detail::spline_core(m, 0, std::vector<double>(d, 0.0), 1).depth();
}

GadgetReport build_bspline_net(const BSplineAtom& atom, int L) {
  require(atom.m >= 1, "invalid_argument", "spline order must be >= 1");
  require(atom.k >= 0, "invalid_argument", "level must be >= 0");
  const int d = atom.dim();
  const int base = bspline_net_min_depth(atom.m, d);
  require(L >= base, "invalid_argument",
          "B-spline net needs depth >= " + std::to_string(base) + ", got " + std::to_string(L));
  const int slope = detail::spline_core(atom.m, 0, std::vector<double>(d, 0.0), 2).depth() - base;
  const int stages = slope == 0 ? 1 : 1 + (L - base) / slope;
  DenseNet net = detail::spline_core(atom.m, atom.k, atom.s, stages);
  net = pad_depth(scale_output(net, atom.a), L);

  // Error over a tensor grid of the support box.
  const int per_axis = d == 1 ? 4097 : (d == 2 ? 129 : 17);
  const double side = (atom.m + 1) * std::ldexp(1.0, -atom.k);
  double err = 0.0;
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  VectorXd xv(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      x[i] = atom.s[i] + side * idx[i] / (per_axis - 1);
      xv(i) = x[i];
    }
    err = std::max(err, std::abs(dense_forward(net, xv)(0) - eval_atom(atom, x)));
    int i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) break;
  }
  return finish(std::move(net), "a prod M_m(2^k (x - s))", err,
                std::numeric_limits<double>::quiet_NaN());
}

DenseNet remove_bias(const DenseNet& net) {
  net.validate();
  DenseNet out;
  const int depth = net.depth();
  for (int l = 0; l < depth; ++l) {
    const auto& layer = net.layers[l];
    const Eigen::Index rows = layer.W.rows(), cols = layer.W.cols();
    DenseLayer nl;
    if (l + 1 < depth) {
      nl.W = MatrixXd::Zero(rows + 1, cols + 1);
      nl.W(rows, cols) = 1.0;
    } else {
      nl.W = MatrixXd::Zero(rows, cols + 1);
    }
    nl.W.topLeftCorner(rows, cols) = layer.W;
    nl.W.block(0, cols, rows, 1) = layer.b;
    nl.b = VectorXd::Zero(nl.W.rows());
    out.layers.push_back(std::move(nl));
  }
  return out;
}

}  // namespace besovnet
