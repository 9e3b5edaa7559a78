#include "besovnet/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "besovnet/error.hpp"

namespace besovnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double as_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error("parse", "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

Json vec_json(const VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VectorXd vec_from(const Json& j) {
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json mat_json(const MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

MatrixXd mat_from(const Json& j, Eigen::Index cols_if_empty = 0) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    require(static_cast<Eigen::Index>(j[i].size()) == cols, "parse", "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

Json to_json(const BesovParams& p) {
  Json j{{"alpha", p.alpha}, {"p", number(p.p)}, {"q", number(p.q)}, {"d", p.d}, {"m", p.m}};
  if (p.cf_bound) j["cf_bound"] = *p.cf_bound;
  return j;
}

BesovParams params_from_json(const Json& j) {
  BesovParams p;
  p.alpha = j.value("alpha", p.alpha);
  if (j.contains("p")) p.p = as_number(j["p"]);
  if (j.contains("q")) p.q = as_number(j["q"]);
  p.d = j.value("d", p.d);
  p.m = j.value("m", p.m);
  if (j.contains("cf_bound") && !j["cf_bound"].is_null()) p.cf_bound = j["cf_bound"].get<double>();
  return p;
}

Json to_json(const SparseSeries& s) {
  Json atoms = Json::array();
  for (const auto& a : s.atoms) atoms.push_back({{"k", a.k}, {"s", a.s}, {"a", a.a}});
  Json j{{"m", s.params.m}, {"atoms", atoms}, {"params", to_json(s.params)}};
  j["residual_sup"] = number(s.residual_sup);
  j["residual_rms"] = number(s.residual_rms);
  j["weighted_norm"] = number(s.weighted_norm);
  return j;
}

SparseSeries series_from_json(const Json& j) {
  SparseSeries s;
  if (j.contains("params")) s.params = params_from_json(j["params"]);
  const int m = j.value("m", s.params.m);
  s.params.m = m;
  for (const auto& a : j.at("atoms")) {
    BSplineAtom atom;
    atom.m = m;
    atom.k = a.at("k").get<int>();
    atom.s = a.at("s").get<std::vector<double>>();
    atom.a = a.at("a").get<double>();
    s.atoms.push_back(std::move(atom));
  }
  if (j.contains("residual_sup")) s.residual_sup = as_number(j["residual_sup"]);
  if (j.contains("residual_rms")) s.residual_rms = as_number(j["residual_rms"]);
  if (j.contains("weighted_norm")) s.weighted_norm = as_number(j["weighted_norm"]);
  return s;
}

Json to_json(const DenseNet& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers) layers.push_back({{"W", mat_json(l.W)}, {"b", vec_json(l.b)}});
  return {{"layers", layers}};
}

DenseNet dense_from_json(const Json& j) {
  DenseNet net;
  for (const auto& l : j.at("layers")) net.layers.push_back({mat_from(l.at("W")), vec_from(l.at("b"))});
  net.validate();
  return net;
}

Json to_json(const ConvResNeXt& net) {
  Json paths = Json::array();
  for (const auto& block : net.paths) {
    Json jb = Json::array();
    for (const auto& path : block) {
      Json jp = Json::array();
      for (const auto& k : path)
        jp.push_back({{"out", k.out_channels()}, {"K", k.size()}, {"in", k.in_channels()}, {"entries", k.entries()}});
      jb.push_back(jp);
    }
    paths.push_back(jb);
  }
  return {{"arch", {{"N", net.N}, {"M", net.M}, {"L", net.L}, {"K", net.K}, {"w", net.channels}, {"D", net.D}}},
          {"paths", paths},
          {"w_out", vec_json(net.w_out)},
          {"meta", {{"readout_indices", net.readout}}}};
}

ConvResNeXt conv_from_json(const Json& j) {
  ConvResNeXt net;
  const Json& a = j.at("arch");
  net.N = a.at("N");
  net.M = a.at("M");
  net.L = a.at("L");
  net.K = a.at("K");
  net.channels = a.at("w");
  net.D = a.at("D");
  for (const auto& jb : j.at("paths")) {
    std::vector<std::vector<ConvKernel>> block;
    for (const auto& jp : jb) {
      std::vector<ConvKernel> path;
      for (const auto& jk : jp) {
        ConvKernel k(jk.at("out"), jk.at("K"), jk.at("in"));
        const auto e = jk.at("entries").get<std::vector<double>>();
        require(e.size() == k.entries().size(), "parse", "kernel entry count mismatch");
        k.entries() = e;
        path.push_back(std::move(k));
      }
      block.push_back(std::move(path));
    }
    net.paths.push_back(std::move(block));
  }
  net.w_out = vec_from(j.at("w_out"));
  if (j.contains("meta")) net.readout = j["meta"].value("readout_indices", std::vector<int>{});
  net.validate();
  return net;
}

Json to_json(const DenseResNeXt& net) {
  Json blocks = Json::array();
  for (const auto& row : net.blocks) {
    Json r = Json::array();
    for (const auto& b : row) r.push_back(to_json(b));
    blocks.push_back(r);
  }
  return {{"N", net.N}, {"M", net.M}, {"L", net.L}, {"D", net.D}, {"stream", net.stream},
          {"blocks", blocks}, {"w_out", vec_json(net.w_out)}, {"readout", net.readout}};
}

DenseResNeXt dense_resnext_from_json(const Json& j) {
  try {
    DenseResNeXt net;
    net.N = j.at("N").get<int>();
    net.M = j.at("M").get<int>();
    net.L = j.at("L").get<int>();
    net.D = j.at("D").get<int>();
    net.stream = j.at("stream").get<int>();
    for (const auto& row : j.at("blocks")) {
      net.blocks.emplace_back();
      for (const auto& b : row) net.blocks.back().push_back(dense_from_json(b));
    }
    net.w_out = vec_from(j.at("w_out"));
    net.readout = j.at("readout").get<std::vector<int>>();
    net.validate();
    return net;
  } catch (const Json::exception& e) {
    throw Error("parse", std::string("dense ResNeXt: ") + e.what());
  }
}

Json to_json(const ChartCover& c) {
  Json centers = Json::array(), frames = Json::array();
  for (const auto& v : c.centers) centers.push_back(vec_json(v));
  for (const auto& f : c.frames) frames.push_back(mat_json(f));
  return {{"centers", centers}, {"frames", frames}, {"r", c.r},
          {"R_outer", c.R_outer}, {"tau", c.tau}, {"delta", c.delta}};
}

ChartCover cover_from_json(const Json& j) {
  ChartCover c;
  for (const auto& v : j.at("centers")) c.centers.push_back(vec_from(v));
  if (j.contains("frames")) {
    for (const auto& f : j["frames"]) c.frames.push_back(mat_from(f));
  } else {
    for (const auto& v : c.centers) c.frames.push_back(MatrixXd::Identity(v.size(), 1));
  }
  c.r = j.at("r");
  c.R_outer = j.at("R_outer");
  c.tau = j.at("tau");
  c.delta = j.value("delta", 0.0);
  c.validate();
  return c;
}

Json to_json(const CurveSpec& s) {
  return {{"D", s.D},
          {"n", s.n},
          {"noise_sd", s.noise_sd},
          {"seed", s.seed},
          {"g0", {{"knots", s.g0.knots}, {"values", s.g0.values}}},
          {"rotation", mat_json(s.rotation)}};
}

void write_gadget_csv(const std::vector<std::pair<std::string, GadgetReport>>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "io", "cannot open " + path);
  os << "gadget,L,width,sq_norm,measured_error\n" << std::setprecision(12);
  for (const auto& [name, r] : rows)
    os << name << ',' << r.depth << ',' << r.width << ',' << r.sq_norm << ',' << r.measured_error << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "io", "cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    throw Error("parse", path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "io", "cannot open " + path);
  os << std::setprecision(17) << j.dump(2) << '\n';
}

}  // namespace besovnet
