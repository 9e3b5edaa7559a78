#pragma once

#include <optional>

namespace besovnet {

/// Architecture and sample description fed to the capacity evaluators.
/// All "<~" relations are evaluated with constant 1 and no log factors, so
/// the outputs are indices rather than certified counts.
struct CapacityQuery {
  double w = 8;
  int L = 6;
  int K = 6;
  double b_res = 1.0;
  double b_out = 1.0;
  double n = 1000;
  double delta = 0.1;
  double sigma = 1.0;
  double b_uniform = 1.0;

  void validate() const;  // requires L > 2
};

/// (B/L)^{L/2}
double lipschitz_dense(double B, int L);
/// (K B/L)^{L/2}
double lipschitz_conv(double B, int L, int K);
/// exp((K b_res/L)^{L/2})
double lipschitz_resnext(double b_res, int L, int K);
/// (K b_m/L)^{L/2} b_out^{1/2} exp((K b_res/L)^{L/2}); assumes |x| <= 1.
double block_removal_perturbation(double b_m, double b_res, double b_out, int L, int K);

/// w^2 L b_res^{1/(1-2/L)} K^{(2-2/L)/(1-2/L)} E^{(2/L)/(1-2/L)} delta^{-(2/L)/(1-2/L)}
/// with E = b_out^{1/2} exp((K b_res/L)^{L/2}). Evaluated in log space.
double log_covering_bound(const CapacityQuery& q);
double log_covering_bound(const CapacityQuery& q, double delta);

struct CriticalRadius {
  /// K (w^2 L)^{(1-2/L)/(2-2/L)} b_res^{1/(2-2/L)} E^{(1/L)/(1-1/L)} n^{-(1-2/L)/(2-2/L)}
  double closed_form = 0.0;
  /// Left side of the fixed-point display divided by delta^2, at closed_form.
  /// Equals 1 up to rounding.
  double fixed_point_ratio = 0.0;
  /// Smallest delta (to bisection tolerance) satisfying the Dudley condition
  ///   64/sqrt(n) int_{delta^2/(8 b sigma)}^{delta} sqrt(log N(mu)) dmu <= delta^2 / b.
  double certified = 0.0;
  /// Left minus right side of the Dudley condition at `certified` (<= 0).
  double residual = 0.0;
  /// Same residual at closed_form.
  double residual_at_closed_form = 0.0;
};

CriticalRadius critical_radius(const CapacityQuery& q);

/// 64/sqrt(n) int_lo^hi sqrt(log N(mu)) dmu by adaptive Gauss-Kronrod.
double dudley_integral(const CapacityQuery& q, double lo, double hi);

/// (alpha/d)(1-2/L) / (2 (alpha/d)(1-1/L) + 1 - 2/(p L)); p may be infinite.
double rate_exponent(int L, double alpha, int d, double p);

/// c1 (K^{-2/(L-2)} w^{(3L-4)/(L-2)} L^{(3L-2)/(L-2)} / n)^{rate} + c2 exp(-c3 L').
/// L' = L - ceil(D/(K-1)) + 1 when the ambient dimension D is given, else L.
double generalization_bound(const CapacityQuery& q, double alpha, int d, double p, double c1,
                            double c2, double c3, std::optional<int> D = std::nullopt);

}  // namespace besovnet
