#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <string>

#include "besovnet/error.hpp"
#include "besovnet/rng.hpp"
#include "besovnet/train.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void BenchConfig::validate() const {
  require(sweep == "D" || sweep == "n" || sweep == "dof", "invalid_argument",
          "sweep must be one of D, n, dof");
  require(!values.empty(), "invalid_argument", "sweep values are empty");
  require(!seeds.empty(), "invalid_argument", "need at least one seed");
  require(with_net || with_krr, "invalid_argument", "no estimator selected");
  train.validate();
}

TrainConfig default_bench_training() {
  TrainConfig c;
  c.lr = 0.02;
  c.batch_size = 32;
  c.epochs = 100;
  c.lambda1 = 3e-4;
  c.lambda2 = 3e-4;
  c.validation_fraction = 0.2;
  return c;
}

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<BenchRow> rows;
  for (double v : config.values) {
    int D = config.D, n = config.n, w = config.w;
    double ridge_override = -1.0;
    if (config.sweep == "D") D = static_cast<int>(v);
    if (config.sweep == "n") n = static_cast<int>(v);
    if (config.sweep == "dof") {
      // Capacity level: net width v, KRR ridge 1/v.
      w = static_cast<int>(v);
      ridge_override = 1.0 / v;
    }
    require(D >= 3 && n >= 10 && w >= 2, "invalid_argument", "sweep value out of range");
    for (std::uint64_t seed : config.seeds) {
      const CurveSpec spec = make_curve_spec(D, n, config.noise_sd, seed);
      const ManifoldDataset data = generate_curve_dataset(spec);
      std::vector<Eigen::Index> order(n);
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      auto rng = make_rng(seed, kStreamSplit, 0);
      std::shuffle(order.begin(), order.end(), rng);
      const Eigen::Index ntest = n / 5, ntrain = n - ntest;
      MatrixXd trx(ntrain, D), tex(ntest, D);
      VectorXd try_(ntrain), truth(ntest);
      for (Eigen::Index i = 0; i < ntrain; ++i) {
        trx.row(i) = data.xs.row(order[i]);
        try_(i) = data.ys(order[i]);
      }
      for (Eigen::Index i = 0; i < ntest; ++i) {
        tex.row(i) = data.xs.row(order[ntrain + i]);
        truth(i) = spec.g0(data.ts(order[ntrain + i]));
      }
      if (config.with_net) {
        const auto t0 = std::chrono::steady_clock::now();
        TrainConfig tc = config.train;
        tc.seed = seed;
        ConvResNeXt net = init_resnext(D, config.K, w, config.N, config.M, config.L, seed);
        FitResult fitted = fit(std::move(net), trx, try_, tc);
        const double mse = squared_risk(predict(fitted.net, tex), truth);
        rows.push_back({v, "convresnext", static_cast<double>(parameter_count(fitted.net)), mse, elapsed(t0), seed});
      }
      if (config.with_krr) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> ridges = config.ridges;
        if (ridge_override > 0.0) ridges = {ridge_override};
        const KRRTuning tuned = krr_tune(trx, try_, config.bandwidth_scales, ridges, seed);
        const double mse = squared_risk(krr_fit_predict(trx, try_, tex, tuned.best), truth);
        rows.push_back({v, "krr", krr_dof(trx, tuned.best), mse, elapsed(t0), seed});
      }
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "io", "cannot open " + path);
  os << "sweep_var,estimator,dof,mse,seconds,seed\n";
  os << std::setprecision(12);
  for (const auto& r : rows)
    os << r.sweep_value << ',' << r.estimator << ',' << r.dof << ',' << r.mse << ',' << r.seconds << ','
       << r.seed << '\n';
}

}  // namespace besovnet
