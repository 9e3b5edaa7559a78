#include "besovnet/bspline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "besovnet/error.hpp"

namespace besovnet {

namespace {

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

}  // namespace

bool BesovParams::order_condition() const {
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return alpha > 0.0 && alpha < std::min<double>(m, m - 1 + inv_p);
}

bool BesovParams::embedding_condition() const {
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return alpha - d * inv_p > 1.0;
}

void BesovParams::validate() const {
  require(m >= 1, "invalid_argument", "spline order m must be >= 1");
  require(d >= 1, "invalid_argument", "intrinsic dimension d must be >= 1");
  require(p > 0.0 && q > 0.0, "invalid_argument", "p and q must be positive");
  require(order_condition(), "invalid_argument",
          "need 0 < alpha < min(m, m - 1 + 1/p)");
}

double eval_cardinal(int m, double z) {
  require(m >= 1, "invalid_argument", "cardinal B-spline order must be >= 1");
  const double right = m + 1.0;
  if (!(z > 0.0) || !(z < right)) return 0.0;
  // Fold onto [0, (m+1)/2]; the truncated powers with j > y vanish.
  const double y = std::min(z, right - z);
  double sum = 0.0;
  const int jmax = static_cast<int>(std::floor(y));
  for (int j = 0; j <= jmax; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(m + 1, j) * std::pow(y - j, m);
  }
  return std::max(0.0, sum / factorial(m));
}

double eval_atom(const BSplineAtom& atom, const std::vector<double>& x) {
  require(x.size() == atom.s.size(), "dimension_mismatch",
          "point dimension does not match atom shift dimension");
  if (atom.a == 0.0) return 0.0;
  const double scale = std::ldexp(1.0, atom.k);
  double prod = atom.a;
  for (std::size_t i = 0; i < x.size(); ++i) {
    prod *= eval_cardinal(atom.m, scale * (x[i] - atom.s[i]));
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double partition_check(int m, double z) {
  require(m >= 1, "invalid_argument", "cardinal B-spline order must be >= 1");
  // M_m(z - s) is nonzero only for z - m - 1 < s < z.
  const long lo = static_cast<long>(std::floor(z)) - m - 1;
  const long hi = static_cast<long>(std::ceil(z));
  double sum = 0.0;
  for (long s = lo; s <= hi; ++s) sum += eval_cardinal(m, z - static_cast<double>(s));
  return sum;
}

double weighted_p_norm(const std::vector<BSplineAtom>& atoms, double p) {
  require(p > 0.0, "invalid_argument", "p must be positive");
  if (atoms.empty()) return 0.0;
  if (std::isinf(p)) {
    double mx = 0.0;
    for (const auto& at : atoms) mx = std::max(mx, std::fabs(std::ldexp(at.a, at.k)));
    return mx;
  }
  double sum = 0.0;
  for (const auto& at : atoms) sum += std::pow(std::fabs(std::ldexp(at.a, at.k)), p);
  return std::pow(sum, 1.0 / p);
}

double weighted_p_norm(const SparseSeries& series) {
  return weighted_p_norm(series.atoms, series.params.p);
}

double SparseSeries::operator()(const std::vector<double>& x) const {
  double sum = 0.0;
  for (const auto& at : atoms) sum += eval_atom(at, x);
  return sum;
}

std::vector<std::vector<double>> unit_grid(int d, int n) {
  require(d >= 1 && n >= 2, "invalid_argument", "grid needs d >= 1 and n >= 2");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<int> idx(d, 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = static_cast<double>(idx[i]) / (n - 1);
    pts.push_back(std::move(x));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  return pts;
}

namespace {

// All atoms of levels 0..k_max whose support meets the open unit cube.
std::vector<BSplineAtom> build_dictionary(int m, int d, int k_max) {
  std::vector<BSplineAtom> dict;
  for (int k = 0; k <= k_max; ++k) {
    const int lo = -m;
    const int hi = (1 << k) - 1;
    const int per_axis = hi - lo + 1;
    std::vector<int> idx(d, 0);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
    for (std::size_t c = 0; c < total; ++c) {
      BSplineAtom at;
      at.m = m;
      at.k = k;
      at.a = 1.0;
      at.s.resize(d);
      for (int i = 0; i < d; ++i) at.s[i] = std::ldexp(static_cast<double>(lo + idx[i]), -k);
      dict.push_back(std::move(at));
      for (int i = d - 1; i >= 0; --i) {
        if (++idx[i] < per_axis) break;
        idx[i] = 0;
      }
    }
  }
  return dict;
}

}  // namespace

SparseSeries sparse_approximate(const ScalarField& f, const BesovParams& params,
                                int P, int k_max) {
  require(static_cast<bool>(f), "invalid_argument", "empty function");
  require(P >= 1, "invalid_argument", "sparsity budget P must be >= 1");
  require(k_max >= 0, "invalid_argument", "k_max must be >= 0");
  params.validate();

  const int d = params.d;
  const auto fit_pts = unit_grid(d, 1 << (k_max + 2));
  const auto dict = build_dictionary(params.m, d, k_max);
  const Eigen::Index n = static_cast<Eigen::Index>(fit_pts.size());
  const Eigen::Index na = static_cast<Eigen::Index>(dict.size());

  Eigen::MatrixXd phi(n, na);
  for (Eigen::Index j = 0; j < na; ++j)
    for (Eigen::Index i = 0; i < n; ++i) phi(i, j) = eval_atom(dict[j], fit_pts[i]);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = f(fit_pts[i]);
  const Eigen::VectorXd col_norm = phi.colwise().norm().transpose();

  std::vector<Eigen::Index> chosen;
  std::vector<char> used(static_cast<std::size_t>(na), 0);
  Eigen::VectorXd coef;
  Eigen::VectorXd resid = target;
  const double stop = 1e-14 * std::max(1.0, target.norm());
  // Squared norm of each column's component orthogonal to the chosen span.
  // Columns almost inside the span are skipped: the multilevel dictionary is
  // linearly dependent and picking them only produces cancelling coefficients.
  Eigen::VectorXd remainder = col_norm.array().square().matrix();
  const double min_remainder = 1e-2;

  while (static_cast<int>(chosen.size()) < P && resid.norm() > stop) {
    const Eigen::VectorXd corr = phi.transpose() * resid;
    Eigen::Index best = -1;
    double best_val = 0.0;
    for (Eigen::Index j = 0; j < na; ++j) {
      if (used[j] || col_norm(j) == 0.0) continue;
      if (remainder(j) < min_remainder * col_norm(j) * col_norm(j)) continue;
      const double v = std::fabs(corr(j)) / std::sqrt(remainder(j));
      if (v > best_val * (1.0 + 1e-12)) {
        best_val = v;
        best = j;
      }
    }
    if (best < 0 || best_val <= stop * 1e-3) break;
    chosen.push_back(best);
    used[best] = 1;

    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c) sub.col(c) = phi.col(chosen[c]);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
    coef = qr.solve(target);
    resid = target - sub * coef;

    const Eigen::Index c = static_cast<Eigen::Index>(chosen.size()) - 1;
    const Eigen::VectorXd q = (qr.householderQ() * Eigen::VectorXd::Unit(n, c));
    const Eigen::VectorXd proj = phi.transpose() * q;
    remainder -= proj.array().square().matrix();
  }

  SparseSeries out;
  out.params = params;
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    BSplineAtom at = dict[chosen[c]];
    at.a = coef(static_cast<Eigen::Index>(c));
    out.atoms.push_back(std::move(at));
  }
  out.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));

  double sup = 0.0;
  for (const auto& x : unit_grid(d, 1 << (k_max + 3)))
    sup = std::max(sup, std::fabs(f(x) - out(x)));
  out.residual_sup = sup;
  out.weighted_norm = weighted_p_norm(out);
  return out;
}

}  // namespace besovnet
