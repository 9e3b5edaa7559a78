#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace besovnet {

/// Smoothness description of a Besov-class target together with the
/// B-spline order used to expand it. p or q may be +infinity.
struct BesovParams {
  double alpha = 1.25;
  double p = 2.0;
  double q = 2.0;
  int d = 1;
  int m = 2;
  std::optional<double> cf_bound;

  /// 0 < alpha < min(m, m - 1 + 1/p).
  bool order_condition() const;
  /// alpha - d/p > 1, needed by the approximation-theorem constructions.
  bool embedding_condition() const;
  void validate() const;
};

/// One scaled and shifted tensor-product cardinal B-spline:
///   a * prod_i M_m(2^k (x_i - s_i)).
struct BSplineAtom {
  int m = 2;
  int k = 0;
  std::vector<double> s;
  double a = 1.0;

  int dim() const { return static_cast<int>(s.size()); }
};

struct SparseSeries {
  std::vector<BSplineAtom> atoms;
  BesovParams params;
  // Diagnostics attached by sparse_approximate.
  double residual_sup = std::numeric_limits<double>::quiet_NaN();
  double residual_rms = std::numeric_limits<double>::quiet_NaN();
  double weighted_norm = std::numeric_limits<double>::quiet_NaN();

  double operator()(const std::vector<double>& x) const;
};

/// Cardinal B-spline M_m(z) of order m (degree m, support (0, m+1)).
///
/// Uses the truncated-power form with the j = 0 term included,
///   M_m(z) = 1/m! sum_{j=0}^{m+1} (-1)^j C(m+1, j) (z - j)_+^m,
/// evaluated on the half of the support nearest to z (M_m is symmetric about
/// (m+1)/2) so the alternating sum never cancels catastrophically.
double eval_cardinal(int m, double z);

double eval_atom(const BSplineAtom& atom, const std::vector<double>& x);

/// sum over integer shifts s of M_m(z - s); equals 1 for every z.
double partition_check(int m, double z);

/// (sum_j |2^{k_j} a_j|^p)^{1/p}, or max_j |2^{k_j} a_j| when p is infinite.
double weighted_p_norm(const SparseSeries& series);
double weighted_p_norm(const std::vector<BSplineAtom>& atoms, double p);

using ScalarField = std::function<double(const std::vector<double>&)>;

/// Greedy P-sparse B-spline approximation of f on [0,1]^d.
///
/// The dictionary holds every atom of order params.m on levels 0..k_max whose
/// support meets (0,1)^d. Atoms are chosen greedily on a uniform grid of
/// 2^{k_max+2} points per axis: each pick is the atom whose addition most
/// reduces the least-squares residual (orthogonal least squares), and all
/// selected coefficients are refit after each pick. The sup-norm residual is
/// measured on a finer grid of 2^{k_max+3} points per axis.
SparseSeries sparse_approximate(const ScalarField& f, const BesovParams& params,
                                int P, int k_max);

/// Uniform tensor grid on [0,1]^d with n points per axis (endpoints included).
std::vector<std::vector<double>> unit_grid(int d, int n);

}  // namespace besovnet
