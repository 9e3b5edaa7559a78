#pragma once

#include <string>
#include <vector>

#include "besovnet/bspline.hpp"
#include "besovnet/construct.hpp"
#include "besovnet/manifold.hpp"
#include "besovnet/network.hpp"
#include "json.hpp"

namespace besovnet {

using Json = nlohmann::json;

Json to_json(const BesovParams& p);
BesovParams params_from_json(const Json& j);

/// {m, atoms: [{k, s: [...], a}], params}
Json to_json(const SparseSeries& s);
SparseSeries series_from_json(const Json& j);

/// {layers: [{W: [[...]], b: [...]}]}
Json to_json(const DenseNet& net);
DenseNet dense_from_json(const Json& j);

/// {arch: {N, M, L, K, w, D}, paths: [[[{out, K, in, entries}]]], w_out, meta: {readout_indices}}
Json to_json(const ConvResNeXt& net);
ConvResNeXt conv_from_json(const Json& j);

/// {N, M, L, D, stream, blocks: [[dense]], w_out, readout}
Json to_json(const DenseResNeXt& net);
DenseResNeXt dense_resnext_from_json(const Json& j);

Json to_json(const ChartCover& c);
ChartCover cover_from_json(const Json& j);

Json to_json(const CurveSpec& s);

/// Gadget table with columns gadget, L, width, sq_norm, measured_error.
void write_gadget_csv(const std::vector<std::pair<std::string, GadgetReport>>& rows, const std::string& path);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace besovnet
