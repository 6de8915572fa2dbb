// Copyright (c) 2026 The asrwb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asrwb/net/model_io.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>
#include <string>

#include "asrwb/error.hpp"

namespace asrwb::net {
namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "asrwb-model";
constexpr const char* kPriorFormat = "asrwb-prior";

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"data", std::vector<double>(m.flat().begin(), m.flat().end())}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.flat().size())
    throw Error(Errc::kMalformedContainer, "matrix payload has the wrong size");
  std::copy(data.begin(), data.end(), m.flat().begin());
  return m;
}

json prior_to_json(const CoactPrior& prior) {
  json layers = json::array();
  for (const LayerPrior& lp : prior.layers)
    layers.push_back({{"layer", lp.layer},
                      {"mean", lp.mean},
                      {"precision", matrix_to_json(lp.precision)},
                      {"ridge", lp.ridge}});
  return layers;
}

CoactPrior prior_from_json(const json& j) {
  CoactPrior prior;
  for (const json& l : j)
    prior.layers.push_back({l.at("layer").get<std::size_t>(), l.at("mean").get<Vector>(),
                            matrix_from_json(l.at("precision")), l.at("ridge").get<double>()});
  return prior;
}

json parse_container(std::span<const std::uint8_t> bytes, const char* format) {
  json j;
  try {
    j = json::from_cbor(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(Errc::kMalformedContainer, std::string("not a CBOR container: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format)
    throw Error(Errc::kMalformedContainer, std::string("expected a ") + format + " file");
  if (j.value("version", 0u) != kModelFormatVersion)
    throw Error(Errc::kUnsupportedEncoding,
                "unsupported " + std::string(format) + " version " +
                    std::to_string(j.value("version", 0u)));
  return j;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::kMalformedContainer, std::string("bad container field: ") + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> encode_model(const Model& model) {
  json layers = json::array();
  for (const Layer& l : model.net.layers)
    layers.push_back({{"weights", matrix_to_json(l.weights)}, {"bias", l.bias}});
  json trainable = json::array();
  for (bool t : model.net.spec.trainable) trainable.push_back(t);
  json j = {{"format", kModelFormat},
            {"version", kModelFormatVersion},
            {"layer_dims", model.net.spec.layer_dims},
            {"trainable", trainable},
            {"layers", layers},
            {"features",
             {{"window_samples", model.features.window_samples},
              {"shift_samples", model.features.shift_samples},
              {"num_bands", model.features.num_bands},
              {"log_floor", model.features.log_floor}}}};
  if (model.topology) j["phones"] = model.topology->phones;
  if (model.prior) j["prior"] = prior_to_json(*model.prior);
  return json::to_cbor(j);
}

Model decode_model(std::span<const std::uint8_t> bytes) {
  const json j = parse_container(bytes, kModelFormat);
  return guarded([&] {
    Model m;
    m.net.spec.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    for (const json& t : j.at("trainable")) m.net.spec.trainable.push_back(t.get<bool>());
    m.net.spec.validate();
    const json& layers = j.at("layers");
    if (layers.size() != m.net.spec.num_layers())
      throw Error(Errc::kMalformedContainer, "layer count disagrees with layer_dims");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      Layer layer{matrix_from_json(layers[l].at("weights")), layers[l].at("bias").get<Vector>(),
                  m.net.spec.trainable[l]};
      if (layer.weights.rows() != m.net.spec.layer_dims[l + 1] ||
          layer.weights.cols() != m.net.spec.layer_dims[l] ||
          layer.bias.size() != layer.weights.rows())
        throw Error(Errc::kMalformedContainer, "layer " + std::to_string(l) + " shape mismatch");
      m.net.layers.push_back(std::move(layer));
    }
    const json& f = j.at("features");
    m.features.window_samples = f.at("window_samples").get<std::size_t>();
    m.features.shift_samples = f.at("shift_samples").get<std::size_t>();
    m.features.num_bands = f.at("num_bands").get<std::size_t>();
    m.features.log_floor = f.at("log_floor").get<double>();
    if (j.contains("phones"))
      m.topology = HmmTopology{j.at("phones").get<std::vector<std::string>>()};
    if (j.contains("prior")) m.prior = prior_from_json(j.at("prior"));
    return m;
  });
}

std::vector<std::uint8_t> encode_prior(const CoactPrior& prior) {
  return json::to_cbor(json{{"format", kPriorFormat},
                            {"version", kModelFormatVersion},
                            {"layers", prior_to_json(prior)}});
}

CoactPrior decode_prior(std::span<const std::uint8_t> bytes) {
  const json j = parse_container(bytes, kPriorFormat);
  return guarded([&] { return prior_from_json(j.at("layers")); });
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(Errc::kIo, "file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "short write to " + path.string());
}

}  // namespace asrwb::net
