// besovnet-cli: command-line front end for the besovnet library.

#include <Eigen/Core>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "besovnet/bspline.hpp"
#include "besovnet/complexity.hpp"
#include "besovnet/construct.hpp"
#include "besovnet/error.hpp"
#include "besovnet/manifold.hpp"
#include "besovnet/network.hpp"
#include "besovnet/serialize.hpp"
#include "besovnet/train.hpp"

using namespace besovnet;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Global {
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> argv;
};

void write_manifest(const Global& g, const std::string& command, const Json& inputs,
                    const std::vector<std::string>& outputs, const std::string& anchor) {
  Json m;
  m["tool"] = "besovnet-cli";
  m["version"] = kVersion;
  m["command"] = command;
  m["argv"] = g.argv;
  m["seed"] = g.seed;
  m["threads"] = g.threads;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  write_json_file(m, anchor + ".manifest.json");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error("invalid_argument", "bad list entry '" + cell + "'");
    }
  }
  require(!out.empty(), "invalid_argument", "empty list '" + s + "'");
  return out;
}

ScalarField named_target(const std::string& name) {
  if (name == "sin")
    return [](const std::vector<double>& x) {
      double v = 1.0;
      for (double u : x) v *= std::sin(2.0 * std::numbers::pi * u) + 0.5 * u * u;
      return v;
    };
  if (name == "bump")
    return [](const std::vector<double>& x) {
      double r2 = 0.0;
      for (double u : x) r2 += (u - 0.5) * (u - 0.5);
      return std::exp(-r2 / 0.02);
    };
  if (name == "kink")
    return [](const std::vector<double>& x) {
      double v = 0.0;
      for (double u : x) v += std::abs(u - 0.3);
      return v;
    };
  throw Error("invalid_argument", "unknown target '" + name + "' (sin | bump | kink)");
}

ChartCover default_cover(int D, int d) {
  ChartCover c;
  c.centers = {Eigen::VectorXd::Zero(D)};
  c.frames = {Eigen::MatrixXd::Identity(D, d)};
  c.r = 0.5;
  c.R_outer = 1.0;
  c.tau = 2.0;
  return c;
}

struct Check {
  std::string name;
  bool passed;
  double value;
  double threshold;
};

std::vector<Check> verify_gadgets() {
  std::vector<Check> out;
  for (int L : {4, 8}) {
    const GadgetReport sq = build_square(L, 1.0);
    out.push_back({"square_L" + std::to_string(L), sq.measured_error <= sq.certified_error, sq.measured_error,
                   sq.certified_error});
  }
  const DenseNet gate = build_multiply_gate(2.0);
  double gate_err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 2.0 * i / 1000.0;
    gate_err = std::max(gate_err, std::abs(dense_forward(gate, Eigen::Vector2d(x, 1.0))(0) - x));
    gate_err = std::max(gate_err, std::abs(dense_forward(gate, Eigen::Vector2d(x, 0.0))(0)));
  }
  out.push_back({"multiply_gate", gate_err <= 1e-15, gate_err, 1e-15});

  const Eigen::Vector3d c(0.1, -0.2, 0.3);
  const GadgetReport dist = build_distance_sq(c, 8, 1.0, 2.0);
  out.push_back({"distance_sq", dist.measured_error <= dist.certified_error, dist.measured_error,
                 dist.certified_error});
  double clip = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d x = c + Eigen::Vector3d(std::cos(i), std::sin(i), std::cos(3.0 * i)).normalized() * (2.0 + i * 0.01);
    clip = std::max(clip, std::abs(dense_forward(dist.net, x)(0) - 4.0));
  }
  out.push_back({"distance_clip", clip == 0.0, clip, 0.0});

  ChartCover cover = default_cover(3, 1);
  cover.delta = indicator_slack(cover, 10);
  const DenseNet ind = build_indicator(cover, 0, 10);
  double ind_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d dir = Eigen::Vector3d(std::sin(i), std::cos(2.0 * i), 0.3).normalized();
    ind_err = std::max(ind_err, std::abs(dense_forward(ind, dir * (0.5 * i / 200.0))(0) - 1.0));
    ind_err = std::max(ind_err, std::abs(dense_forward(ind, dir * (1.0 + i / 50.0))(0)));
  }
  out.push_back({"indicator_outside_annulus", ind_err == 0.0, ind_err, 0.0});

  const BSplineAtom atom{2, 1, {0.2}, 1.0};
  const int base = bspline_net_min_depth(2, 1);
  const GadgetReport s1 = build_bspline_net(atom, base + 4);
  const GadgetReport s2 = build_bspline_net(atom, 2 * (base + 4));
  out.push_back({"bspline_depth_halving", s2.measured_error <= s1.measured_error / 2, s2.measured_error,
                 s1.measured_error / 2});
  double off = 0.0;
  for (int i = 1; i <= 100; ++i) {
    off = std::max(off, std::abs(dense_forward(s2.net, Eigen::VectorXd::Constant(1, 0.2 - i * 0.01))(0)));
    off = std::max(off, std::abs(dense_forward(s2.net, Eigen::VectorXd::Constant(1, 1.7 + i * 0.01))(0)));
  }
  out.push_back({"bspline_zero_off_support", off == 0.0, off, 0.0});
  return out;
}

std::vector<Check> verify_bspline() {
  std::vector<Check> out;
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m)
    for (int i = 0; i <= 2000; ++i) worst = std::max(worst, std::abs(partition_check(m, -10.0 + 20.0 * i / 2000.0) - 1.0));
  out.push_back({"partition_of_unity", worst <= 1e-10, worst, 1e-10});
  double sym = 0.0;
  for (int m = 1; m <= 5; ++m)
    for (int i = 0; i <= 200; ++i) {
      const double z = (m + 1.0) * i / 200.0;
      sym = std::max(sym, std::abs(eval_cardinal(m, z) - eval_cardinal(m, m + 1.0 - z)));
    }
  out.push_back({"symmetry", sym <= 1e-12, sym, 1e-12});
  return out;
}

std::vector<Check> verify_conv() {
  std::vector<Check> out;
  ChartCover cover = default_cover(4, 1);
  SparseSeries s;
  s.atoms = {{2, 0, {-0.5}, 0.7}, {2, 1, {0.0}, -1.3}};
  AssembleOptions opt;
  const Assembly a = assemble_resnext({s}, cover, opt);
  const ConvResNeXt c = to_conv(a.net, 3);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x(j) = std::sin(1.3 * i + j);
    worst = std::max(worst, std::abs(resnext_forward(c, x) - resnext_forward(a.net, x)));
  }
  out.push_back({"dense_to_conv", worst <= 1e-9, worst, 1e-9});
  DenseResNeXt scaled = a.net;
  scaled.rescale(2.0);
  double rel = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x(j) = std::cos(0.7 * i + j);
    const double f = resnext_forward(a.net, x);
    rel = std::max(rel, std::abs(resnext_forward(scaled, x) - f) / std::max(1.0, std::abs(f)));
  }
  out.push_back({"rescale_invariance", rel <= 1e-9, rel, 1e-9});
  return out;
}

std::vector<Check> verify_capacity() {
  std::vector<Check> out;
  CapacityQuery q;
  q.n = 1e4;
  const CriticalRadius r = critical_radius(q);
  out.push_back({"dudley_residual", r.residual <= 0.0, r.residual, 0.0});
  out.push_back({"fixed_point_ratio", std::abs(r.fixed_point_ratio - 1.0) <= 1e-9, r.fixed_point_ratio, 1.0});
  return out;
}

void write_checks(const std::vector<Check>& checks, std::ostream& os) {
  os << "check,passed,value,threshold\n" << std::setprecision(12);
  for (const auto& c : checks) os << c.name << ',' << (c.passed ? 1 : 0) << ',' << c.value << ',' << c.threshold << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Global g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Constructive approximation, capacity bounds and training for ConvResNeXt networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.add_option("--seed", g.seed, "Root seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Upper bound on worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.fallthrough();

  // approximate
  auto* ap = app.add_subcommand("approximate", "Greedy sparse B-spline series of a built-in target");
  std::string ap_target = "sin", ap_out;
  BesovParams ap_params;
  int ap_P = 16, ap_kmax = 4;
  ap->add_option("--target", ap_target, "sin | bump | kink")->capture_default_str();
  ap->add_option("--d", ap_params.d, "Input dimension")->capture_default_str();
  ap->add_option("--m", ap_params.m, "B-spline order")->capture_default_str();
  ap->add_option("--alpha", ap_params.alpha, "Smoothness")->capture_default_str();
  ap->add_option("--p", ap_params.p, "Integrability p (inf allowed)")->capture_default_str();
  ap->add_option("--q", ap_params.q, "Fine index q (inf allowed)")->capture_default_str();
  ap->add_option("--P", ap_P, "Sparsity budget")->capture_default_str();
  ap->add_option("--kmax", ap_kmax, "Finest dyadic level")->capture_default_str();
  ap->add_option("--out", ap_out, "Series JSON")->required();

  // construct
  auto* co = app.add_subcommand("construct", "Assemble a ResNeXt from sparse series and a chart cover");
  std::string co_series, co_cover, co_out, co_gadgets, co_conv;
  int co_D = 3, co_K = 3;
  AssembleOptions co_opt;
  co->add_option("--series", co_series, "Series JSON (object or one per chart)")->required();
  co->add_option("--cover", co_cover, "ChartCover JSON; default is one chart at the origin");
  co->add_option("--D", co_D, "Ambient dimension of the default cover")->capture_default_str();
  co->add_option("--L", co_opt.L, "Square-gadget depth")->capture_default_str();
  co->add_flag("--budget", co_opt.budget_mode, "Rescale so b_res equals the block depth");
  co->add_option("--paths", co_opt.paths_per_block, "Paths per residual block (M)")->capture_default_str();
  co->add_option("--K", co_K, "Kernel size for the convolutional form")->capture_default_str();
  co->add_option("--out", co_out, "Dense-block network JSON")->required();
  co->add_option("--conv-out", co_conv, "Convolutional network JSON");
  co->add_option("--gadgets", co_gadgets, "Gadget report CSV");

  // verify
  auto* ve = app.add_subcommand("verify", "Run contract checks");
  std::string ve_suite = "gadgets", ve_out;
  ve->add_option("--suite", ve_suite, "gadgets | bspline | conv | capacity | all")->capture_default_str();
  ve->add_option("--out", ve_out, "Report CSV (stdout when omitted)");

  // bounds
  auto* bo = app.add_subcommand("bounds", "Evaluate capacity and generalization indices");
  CapacityQuery bq;
  double bo_alpha = 1.25, bo_p = 2.0, bo_c1 = 1.0, bo_c2 = 1.0, bo_c3 = 1.0;
  int bo_d = 1, bo_D = 0;
  std::string bo_out;
  bo->add_option("--w", bq.w, "Width")->capture_default_str();
  bo->add_option("--L", bq.L, "Block depth (> 2)")->capture_default_str();
  bo->add_option("--K", bq.K, "Kernel size")->capture_default_str();
  bo->add_option("--bres", bq.b_res, "Residual norm budget")->capture_default_str();
  bo->add_option("--bout", bq.b_out, "Output norm budget")->capture_default_str();
  bo->add_option("--n", bq.n, "Sample size")->capture_default_str();
  bo->add_option("--delta", bq.delta, "Covering accuracy")->capture_default_str();
  bo->add_option("--sigma", bq.sigma, "Noise scale")->capture_default_str();
  bo->add_option("--b", bq.b_uniform, "Uniform bound b")->capture_default_str();
  bo->add_option("--alpha", bo_alpha, "Smoothness")->capture_default_str();
  bo->add_option("--d", bo_d, "Intrinsic dimension")->capture_default_str();
  bo->add_option("--p", bo_p, "Integrability p")->capture_default_str();
  bo->add_option("--c1", bo_c1, "Constant of the rate term")->capture_default_str();
  bo->add_option("--c2", bo_c2, "Constant of the depth term")->capture_default_str();
  bo->add_option("--c3", bo_c3, "Exponent constant of the depth term")->capture_default_str();
  bo->add_option("--D", bo_D, "Ambient dimension for L' (0 = use L)")->capture_default_str();
  bo->add_option("--out", bo_out, "CSV file (stdout when omitted)");

  // gen-data
  auto* gd = app.add_subcommand("gen-data", "Sample the rotated-curve regression dataset");
  int gd_D = 8, gd_n = 2000;
  double gd_noise = 1.0;
  std::string gd_out;
  gd->add_option("--D", gd_D, "Ambient dimension (>= 3)")->capture_default_str();
  gd->add_option("--n", gd_n, "Sample size")->capture_default_str();
  gd->add_option("--noise", gd_noise, "Label noise standard deviation")->capture_default_str();
  gd->add_option("--out", gd_out, "Dataset CSV")->required();

  // train
  auto* tr = app.add_subcommand("train", "Fit a ConvResNeXt by mini-batch gradient descent");
  std::string tr_data, tr_out, tr_trace, tr_loss = "squared";
  int tr_D = 8, tr_n = 2000, tr_w = 8, tr_L = 6, tr_K = 6, tr_M = 2, tr_N = 2;
  double tr_noise = 1.0;
  TrainConfig tc;
  tr->add_option("--data", tr_data, "Dataset CSV; generated from --D/--n/--noise when omitted");
  tr->add_option("--D", tr_D, "Ambient dimension for generated data")->capture_default_str();
  tr->add_option("--n", tr_n, "Sample size for generated data")->capture_default_str();
  tr->add_option("--noise", tr_noise, "Noise for generated data")->capture_default_str();
  tr->add_option("--w", tr_w, "Channels")->capture_default_str();
  tr->add_option("--L", tr_L, "Path depth")->capture_default_str();
  tr->add_option("--K", tr_K, "Kernel size")->capture_default_str();
  tr->add_option("--M", tr_M, "Paths per block")->capture_default_str();
  tr->add_option("--N", tr_N, "Blocks")->capture_default_str();
  tr->add_option("--lr", tc.lr, "Step size")->capture_default_str();
  tr->add_option("--epochs", tc.epochs, "Epochs")->capture_default_str();
  tr->add_option("--batch", tc.batch_size, "Batch size")->capture_default_str();
  tr->add_option("--lambda1", tc.lambda1, "Residual weight decay")->capture_default_str();
  tr->add_option("--lambda2", tc.lambda2, "Output weight decay")->capture_default_str();
  tr->add_option("--val-frac", tc.validation_fraction, "Early-stopping holdout share")->capture_default_str();
  tr->add_option("--loss", tr_loss, "squared | logistic")->capture_default_str();
  tr->add_option("--out", tr_out, "Network JSON")->required();
  tr->add_option("--trace", tr_trace, "Per-epoch objective CSV");

  // bench
  auto* be = app.add_subcommand("bench", "ConvResNeXt versus kernel ridge regression sweep");
  BenchConfig bc;
  std::string be_values, be_seeds, be_out;
  bool be_no_net = false, be_no_krr = false;
  be->add_option("--sweep", bc.sweep, "D | n | dof")->capture_default_str();
  be->add_option("--values", be_values, "Comma-separated sweep values")->required();
  be->add_option("--seeds", be_seeds, "Comma-separated seeds (default: --seed)");
  be->add_option("--D", bc.D, "Ambient dimension when not swept")->capture_default_str();
  be->add_option("--n", bc.n, "Sample size when not swept")->capture_default_str();
  be->add_option("--noise", bc.noise_sd, "Label noise standard deviation")->capture_default_str();
  be->add_option("--w", bc.w, "Channels")->capture_default_str();
  be->add_option("--L", bc.L, "Path depth")->capture_default_str();
  be->add_option("--K", bc.K, "Kernel size")->capture_default_str();
  be->add_option("--M", bc.M, "Paths per block")->capture_default_str();
  be->add_option("--N", bc.N, "Blocks")->capture_default_str();
  be->add_option("--lr", bc.train.lr, "Step size")->capture_default_str();
  be->add_option("--epochs", bc.train.epochs, "Epochs")->capture_default_str();
  be->add_option("--batch", bc.train.batch_size, "Batch size")->capture_default_str();
  be->add_option("--lambda1", bc.train.lambda1, "Residual weight decay")->capture_default_str();
  be->add_option("--lambda2", bc.train.lambda2, "Output weight decay")->capture_default_str();
  be->add_option("--val-frac", bc.train.validation_fraction, "Early-stopping holdout share")->capture_default_str();
  be->add_flag("--no-net", be_no_net, "Skip the ConvResNeXt estimator");
  be->add_flag("--no-krr", be_no_krr, "Skip kernel ridge regression");
  be->add_option("--out", be_out, "Results CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help() << '\n';
    std::cerr << Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }

  try {
    Eigen::setNbThreads(g.threads);
    if (ap->parsed()) {
      const SparseSeries s = sparse_approximate(named_target(ap_target), ap_params, ap_P, ap_kmax);
      write_json_file(to_json(s), ap_out);
      write_manifest(g, "approximate",
                     {{"target", ap_target}, {"params", to_json(ap_params)}, {"P", ap_P}, {"kmax", ap_kmax}},
                     {ap_out}, ap_out);
      std::cout << "atoms=" << s.atoms.size() << " residual_sup=" << s.residual_sup
                << " weighted_norm=" << s.weighted_norm << '\n';
    } else if (co->parsed()) {
      const Json sj = read_json_file(co_series);
      std::vector<SparseSeries> series;
      if (sj.is_array())
        for (const auto& e : sj) series.push_back(series_from_json(e));
      else
        series.push_back(series_from_json(sj));
      require(!series.empty() && !series.front().atoms.empty(), "invalid_argument", "series file has no atoms");
      const int d = series.front().atoms.front().dim();
      const ChartCover cover = co_cover.empty() ? default_cover(co_D, d) : cover_from_json(read_json_file(co_cover));
      const Assembly a = assemble_resnext(series, cover, co_opt);
      write_json_file(to_json(a.net), co_out);
      std::vector<std::string> outputs{co_out};
      if (!co_conv.empty()) {
        write_json_file(to_json(to_conv(a.net, co_K)), co_conv);
        outputs.push_back(co_conv);
      }
      if (!co_gadgets.empty()) {
        std::vector<std::pair<std::string, GadgetReport>> rows;
        rows.emplace_back("square", build_square(co_opt.L, cover_coordinate_bound(cover)));
        rows.emplace_back("distance_sq", build_distance_sq(cover.centers.front(), co_opt.L + 1,
                                                           cover_coordinate_bound(cover), cover.tau));
        GadgetReport gate;
        gate.net = build_multiply_gate(co_opt.gate_cap);
        gate.depth = 2;
        gate.width = 2;
        gate.sq_norm = gate.net.sq_norm();
        rows.emplace_back("multiply_gate", gate);
        const int base = bspline_net_min_depth(series.front().atoms.front().m, d);
        for (std::size_t j = 0; j < series.front().atoms.size(); ++j)
          rows.emplace_back("bspline_" + std::to_string(j),
                            build_bspline_net(series.front().atoms[j], base + co_opt.L - 2));
        write_gadget_csv(rows, co_gadgets);
        outputs.push_back(co_gadgets);
      }
      write_manifest(g, "construct",
                     {{"series", co_series}, {"cover", co_cover.empty() ? Json(to_json(cover)) : Json(co_cover)},
                      {"L", co_opt.L}, {"budget", co_opt.budget_mode}, {"paths", co_opt.paths_per_block}, {"K", co_K}},
                     outputs, co_out);
      std::cout << "blocks=" << a.n_atoms << " N=" << a.net.N << " M=" << a.net.M << " depth=" << a.block_depth
                << " b_res=" << a.norms.b_res << " b_out=" << a.norms.b_out << '\n';
    } else if (ve->parsed()) {
      std::vector<Check> checks;
      auto add = [&](const std::vector<Check>& c) { checks.insert(checks.end(), c.begin(), c.end()); };
      if (ve_suite == "gadgets" || ve_suite == "all") add(verify_gadgets());
      if (ve_suite == "bspline" || ve_suite == "all") add(verify_bspline());
      if (ve_suite == "conv" || ve_suite == "all") add(verify_conv());
      if (ve_suite == "capacity" || ve_suite == "all") add(verify_capacity());
      require(!checks.empty(), "invalid_argument", "unknown suite '" + ve_suite + "'");
      if (ve_out.empty()) {
        write_checks(checks, std::cout);
      } else {
        std::ofstream os(ve_out, std::ios::binary);
        require(static_cast<bool>(os), "io", "cannot open " + ve_out);
        write_checks(checks, os);
        write_manifest(g, "verify", {{"suite", ve_suite}}, {ve_out}, ve_out);
      }
      int failed = 0;
      for (const auto& c : checks) failed += c.passed ? 0 : 1;
      if (failed > 0) throw Error("verification_failed", std::to_string(failed) + " check(s) failed");
    } else if (bo->parsed()) {
      bq.validate();
      const CriticalRadius cr = critical_radius(bq);
      const double gen = bo_D > 0 ? generalization_bound(bq, bo_alpha, bo_d, bo_p, bo_c1, bo_c2, bo_c3, bo_D)
                                  : generalization_bound(bq, bo_alpha, bo_d, bo_p, bo_c1, bo_c2, bo_c3);
      std::ostringstream os;
      os << std::setprecision(12);
      os << "w,L,K,b_res,b_out,n,delta,lipschitz_resnext,log_covering,critical_radius,certified_radius,"
            "dudley_residual,rate_exponent,generalization_bound\n";
      os << bq.w << ',' << bq.L << ',' << bq.K << ',' << bq.b_res << ',' << bq.b_out << ',' << bq.n << ','
         << bq.delta << ',' << lipschitz_resnext(bq.b_res, bq.L, bq.K) << ',' << log_covering_bound(bq) << ','
         << cr.closed_form << ',' << cr.certified << ',' << cr.residual << ','
         << rate_exponent(bq.L, bo_alpha, bo_d, bo_p) << ',' << gen << '\n';
      if (bo_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(bo_out, std::ios::binary);
        require(static_cast<bool>(f), "io", "cannot open " + bo_out);
        f << os.str();
        write_manifest(g, "bounds", {{"w", bq.w}, {"L", bq.L}, {"K", bq.K}, {"b_res", bq.b_res}, {"b_out", bq.b_out},
                                     {"n", bq.n}, {"delta", bq.delta}, {"alpha", bo_alpha}, {"d", bo_d}, {"p", bo_p}},
                       {bo_out}, bo_out);
      }
    } else if (gd->parsed()) {
      const CurveSpec spec = make_curve_spec(gd_D, gd_n, gd_noise, g.seed);
      write_dataset_csv(generate_curve_dataset(spec), gd_out);
      write_json_file(to_json(spec), gd_out + ".spec.json");
      write_manifest(g, "gen-data", {{"D", gd_D}, {"n", gd_n}, {"noise", gd_noise}}, {gd_out, gd_out + ".spec.json"},
                     gd_out);
    } else if (tr->parsed()) {
      const ManifoldDataset data = tr_data.empty()
                                       ? generate_curve_dataset(make_curve_spec(tr_D, tr_n, tr_noise, g.seed))
                                       : read_dataset_csv(tr_data);
      tc.loss = parse_loss(tr_loss);
      tc.seed = g.seed;
      const int D = static_cast<int>(data.xs.cols());
      ConvResNeXt net = init_resnext(D, tr_K, tr_w, tr_N, tr_M, tr_L, g.seed);
      const FitResult r = fit(std::move(net), data.xs, data.ys, tc);
      write_json_file(to_json(r.net), tr_out);
      std::vector<std::string> outputs{tr_out};
      if (!tr_trace.empty()) {
        std::ofstream os(tr_trace, std::ios::binary);
        require(static_cast<bool>(os), "io", "cannot open " + tr_trace);
        os << "epoch,objective,validation\n" << std::setprecision(12);
        for (std::size_t e = 0; e < r.trace.size(); ++e) {
          os << e << ',' << r.trace[e] << ',';
          if (e < r.validation.size()) os << r.validation[e];
          os << '\n';
        }
        outputs.push_back(tr_trace);
      }
      write_manifest(g, "train",
                     {{"data", tr_data.empty() ? Json{{"D", tr_D}, {"n", tr_n}, {"noise", tr_noise}} : Json(tr_data)},
                      {"arch", {{"w", tr_w}, {"L", tr_L}, {"K", tr_K}, {"M", tr_M}, {"N", tr_N}}},
                      {"lr", tc.lr}, {"epochs", tc.epochs}, {"batch", tc.batch_size}, {"lambda1", tc.lambda1},
                      {"lambda2", tc.lambda2}, {"val_frac", tc.validation_fraction}, {"loss", tr_loss}},
                     outputs, tr_out);
      std::cout << "final_objective=" << (r.trace.empty() ? NAN : r.trace.back()) << " best_epoch=" << r.best_epoch
                << " b_res=" << r.norms.b_res << " b_out=" << r.norms.b_out << '\n';
    } else if (be->parsed()) {
      bc.values = parse_list(be_values);
      bc.seeds.clear();
      if (be_seeds.empty()) {
        bc.seeds.push_back(g.seed);
      } else {
        for (double s : parse_list(be_seeds)) {
          require(s >= 0 && s == std::floor(s), "invalid_argument", "seeds must be nonnegative integers");
          bc.seeds.push_back(static_cast<std::uint64_t>(s));
        }
      }
      bc.with_net = !be_no_net;
      bc.with_krr = !be_no_krr;
      const auto rows = run_benchmark(bc);
      write_bench_csv(rows, be_out);
      Json cfg{{"sweep", bc.sweep}, {"values", bc.values}, {"seeds", bc.seeds}, {"D", bc.D}, {"n", bc.n},
               {"noise_sd", bc.noise_sd}, {"arch", {{"w", bc.w}, {"L", bc.L}, {"K", bc.K}, {"M", bc.M}, {"N", bc.N}}},
               {"train", {{"lr", bc.train.lr}, {"epochs", bc.train.epochs}, {"batch", bc.train.batch_size},
                          {"lambda1", bc.train.lambda1}, {"lambda2", bc.train.lambda2},
                          {"val_frac", bc.train.validation_fraction}}},
               {"krr", {{"bandwidth_scales", bc.bandwidth_scales}, {"ridges", bc.ridges}}},
               {"estimators", {{"convresnext", bc.with_net}, {"krr", bc.with_krr}}}};
      write_json_file(cfg, be_out + ".config.json");
      write_manifest(g, "bench", cfg, {be_out, be_out + ".config.json"}, be_out);
      std::cout << "rows=" << rows.size() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << Json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}
