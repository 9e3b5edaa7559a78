#include "besovnet/complexity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "besovnet/error.hpp"

namespace besovnet {

namespace {

// log of b_out^{1/2} exp((K b_res/L)^{L/2})
double log_E(const CapacityQuery& q) {
  return 0.5 * std::log(q.b_out) + std::pow(q.K * q.b_res / q.L, 0.5 * q.L);
}

}  // namespace

void CapacityQuery::validate() const {
  require(L > 2, "invalid_argument", "capacity bounds need L > 2, got L = " + std::to_string(L));
  require(w > 0 && K >= 1, "invalid_argument", "width and kernel size must be positive");
  require(b_res >= 0.0 && b_out >= 0.0, "invalid_argument", "norm budgets must be nonnegative");
  require(n >= 1, "invalid_argument", "sample count must be >= 1");
  require(sigma > 0.0 && b_uniform > 0.0, "invalid_argument", "sigma and b must be positive");
}

double lipschitz_dense(double B, int L) {
  require(B >= 0.0 && L >= 1, "invalid_argument", "need B >= 0 and L >= 1");
  return std::pow(B / L, 0.5 * L);
}

double lipschitz_conv(double B, int L, int K) {
  require(K >= 1, "invalid_argument", "kernel size must be >= 1");
  return lipschitz_dense(K * B, L);
}

double lipschitz_resnext(double b_res, int L, int K) {
  require(L >= 1 && K >= 1 && b_res >= 0.0, "invalid_argument", "need L, K >= 1 and b_res >= 0");
  return std::exp(std::pow(K * b_res / L, 0.5 * L));
}

double block_removal_perturbation(double b_m, double b_res, double b_out, int L, int K) {
  require(b_m >= 0.0 && b_out >= 0.0, "invalid_argument", "norms must be nonnegative");
  return lipschitz_conv(b_m, L, K) * std::sqrt(b_out) * lipschitz_resnext(b_res, L, K);
}

double log_covering_bound(const CapacityQuery& q) { return log_covering_bound(q, q.delta); }

double log_covering_bound(const CapacityQuery& q, double delta) {
  q.validate();
  require(delta > 0.0, "invalid_argument", "delta must be positive");
  const double L = q.L;
  const double a = 1.0 - 2.0 / L;
  const double e = (2.0 / L) / a;
  double lg = 2.0 * std::log(q.w) + std::log(L);
  lg += std::log(q.b_res) / a;
  lg += (2.0 - 2.0 / L) / a * std::log(static_cast<double>(q.K));
  lg += e * log_E(q);
  lg -= e * std::log(delta);
  return std::exp(lg);
}

double dudley_integral(const CapacityQuery& q, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  // mu = e^s keeps the integrand smooth near a small lower limit.
  auto f = [&](double s) {
    const double mu = std::exp(s);
    return std::sqrt(log_covering_bound(q, mu)) * mu;
  };
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, std::log(lo), std::log(hi), 15, 1e-12, &err);
  require(std::isfinite(val) && err <= 1e-6 * std::abs(val) + 1e-300, "nonconvergent",
          "Dudley quadrature did not converge");
  return 64.0 / std::sqrt(q.n) * val;
}

CriticalRadius critical_radius(const CapacityQuery& q) {
  q.validate();
  const double L = q.L;
  CriticalRadius out;
  double lg = std::log(static_cast<double>(q.K));
  lg += (1.0 - 2.0 / L) / (2.0 - 2.0 / L) * std::log(q.w * q.w * L);
  lg += std::log(q.b_res) / (2.0 - 2.0 / L);
  lg += (1.0 / L) / (1.0 - 1.0 / L) * log_E(q);
  lg -= (1.0 - 2.0 / L) / (2.0 - 2.0 / L) * std::log(q.n);
  out.closed_form = std::exp(lg);

  const double a = 1.0 - 2.0 / L;
  double lhs = -0.5 * std::log(q.n) + std::log(q.w) + 0.5 * std::log(L);
  lhs += std::log(q.b_res) / (2.0 - 4.0 / L);
  lhs += (1.0 - 1.0 / L) / a * std::log(static_cast<double>(q.K));
  lhs += (1.0 / L) / a * log_E(q);
  lhs += (1.0 - 3.0 / L) / a * std::log(out.closed_form);
  out.fixed_point_ratio = std::exp(lhs - 2.0 * std::log(out.closed_form));

  const double b = q.b_uniform;
  auto residual = [&](double d) { return dudley_integral(q, d * d / (8.0 * b * q.sigma), d) - d * d / b; };
  out.residual_at_closed_form = residual(out.closed_form);

  // The condition holds trivially at delta = 8 b sigma (empty integral).
  double hi = 8.0 * b * q.sigma;
  double lo = hi;
  const int steps = 400;
  for (int i = 1; i <= steps; ++i) {
    const double cand = hi * std::pow(1e-12, static_cast<double>(i) / steps);
    if (residual(cand) > 0.0) {
      lo = cand;
      break;
    }
    hi = cand;
  }
  if (lo == hi) {
    out.certified = hi;
  } else {
    for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-12; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (residual(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    out.certified = hi;
  }
  out.residual = residual(out.certified);
  return out;
}

double rate_exponent(int L, double alpha, int d, double p) {
  require(L > 2, "invalid_argument", "rate exponent needs L > 2");
  require(alpha > 0.0 && d >= 1 && p > 0.0, "invalid_argument", "need alpha > 0, d >= 1, p > 0");
  const double s = alpha / d;
  const double inv_pL = std::isinf(p) ? 0.0 : 2.0 / (p * L);
  return s * (1.0 - 2.0 / L) / (2.0 * s * (1.0 - 1.0 / L) + 1.0 - inv_pL);
}

double generalization_bound(const CapacityQuery& q, double alpha, int d, double p, double c1, double c2,
                            double c3, std::optional<int> D) {
  q.validate();
  const double L = q.L;
  double lg = -2.0 / (L - 2.0) * std::log(static_cast<double>(q.K));
  lg += (3.0 * L - 4.0) / (L - 2.0) * std::log(q.w);
  lg += (3.0 * L - 2.0) / (L - 2.0) * std::log(L);
  lg -= std::log(q.n);
  const double first = c1 * std::exp(rate_exponent(q.L, alpha, d, p) * lg);
  double Lp = L;
  if (D) {
    require(q.K > 1, "invalid_argument", "L' needs K > 1");
    Lp = L - std::ceil(static_cast<double>(*D) / (q.K - 1)) + 1.0;
  }
  return first + c2 * std::exp(-c3 * Lp);
}

}  // namespace besovnet
