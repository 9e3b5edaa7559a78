#include <cmath>
#include <cstdio>
#include <filesystem>

#include "besovnet/serialize.hpp"
#include "besovnet/train.hpp"
#include "doctest.h"

using namespace besovnet;

TEST_CASE("series round trip") {
  SparseSeries s;
  s.params.p = INFINITY;
  s.atoms = {{2, 1, {0.25}, -1.5}, {2, 3, {0.125}, 0.1}};
  s.residual_sup = 0.01;
  const Json j = to_json(s);
  const SparseSeries t = series_from_json(Json::parse(j.dump()));
  REQUIRE(t.atoms.size() == 2);
  CHECK(t.atoms[1].k == 3);
  CHECK(t.atoms[0].s == s.atoms[0].s);
  CHECK(t.atoms[0].a == s.atoms[0].a);
  CHECK(std::isinf(t.params.p));
  for (double x : {0.1, 0.4, 0.9}) CHECK(t({x}) == s({x}));
}

TEST_CASE("network round trip") {
  const ConvResNeXt net = init_resnext(6, 3, 4, 2, 2, 3, 5);
  const Json j = to_json(net);
  CHECK(j["arch"]["w"] == 4);
  const ConvResNeXt back = conv_from_json(Json::parse(j.dump()));
  Eigen::MatrixXd xs = Eigen::MatrixXd::Random(30, 6);
  const Eigen::VectorXd a = predict(net, xs), b = predict(back, xs);
  for (int i = 0; i < 30; ++i) CHECK(std::abs(a(i) - b(i)) <= 1e-15 * std::max(1.0, std::abs(a(i))));

  DenseNet d;
  d.layers.push_back({Eigen::MatrixXd::Random(3, 2), Eigen::VectorXd::Random(3)});
  d.layers.push_back({Eigen::MatrixXd::Random(1, 3), Eigen::VectorXd::Random(1)});
  const DenseNet e = dense_from_json(Json::parse(to_json(d).dump()));
  CHECK(e.layers[0].W == d.layers[0].W);
  CHECK(e.layers[1].b == d.layers[1].b);
}

TEST_CASE("cover round trip and files") {
  ChartCover c;
  c.centers = {Eigen::Vector3d(0.1, 0.2, 0.3)};
  c.frames = {Eigen::MatrixXd::Identity(3, 1)};
  c.r = 0.5;
  c.R_outer = 1.0;
  c.tau = 2.0;
  const auto path = (std::filesystem::temp_directory_path() / "besovnet_cover_test.json").string();
  write_json_file(to_json(c), path);
  const ChartCover back = cover_from_json(read_json_file(path));
  CHECK(back.centers[0] == c.centers[0]);
  CHECK(back.frames[0] == c.frames[0]);
  CHECK(back.tau == 2.0);
  std::remove(path.c_str());
  CHECK_THROWS(read_json_file(path));
}
