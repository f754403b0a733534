#include "synth/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace synth {

namespace {

MlpLayer::Act act_from_name(const std::string& name, std::size_t layer) {
  if (name == "relu") return MlpLayer::Act::Relu;
  if (name == "tanh") return MlpLayer::Act::Tanh;
  if (name == "linear") return MlpLayer::Act::Linear;
  throw std::invalid_argument("mlp layer " + std::to_string(layer) +
                              ": unknown activation '" + name + "'");
}

const char* act_name(MlpLayer::Act a) {
  switch (a) {
    case MlpLayer::Act::Relu: return "relu";
    case MlpLayer::Act::Tanh: return "tanh";
    case MlpLayer::Act::Linear: return "linear";
  }
  return "linear";
}

}  // namespace

MlpPolicy load_mlp_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
    throw std::invalid_argument("mlp file: missing non-empty \"layers\" array");
  }
  MlpPolicy p;
  if (j.contains("scale")) p.scale = j["scale"].get<double>();
  std::size_t index = 0;
  for (const auto& jl : j["layers"]) {
    MlpLayer layer;
    layer.weights = jl.at("w").get<std::vector<std::vector<double>>>();
    layer.bias = jl.at("b").get<std::vector<double>>();
    layer.act = act_from_name(jl.value("act", "linear"), index);
    if (layer.weights.empty()) {
      throw std::invalid_argument("mlp layer " + std::to_string(index) + ": empty weights");
    }
    std::size_t in = layer.weights[0].size();
    for (const auto& row : layer.weights) {
      if (row.size() != in) {
        throw std::invalid_argument("mlp layer " + std::to_string(index) +
                                    ": ragged weight matrix");
      }
    }
    if (layer.bias.size() != layer.weights.size()) {
      throw std::invalid_argument("mlp layer " + std::to_string(index) +
                                  ": bias length does not match rows");
    }
    if (!p.layers.empty() &&
        layer.in_dim() != p.layers.back().out_dim()) {
      throw std::invalid_argument("mlp layer " + std::to_string(index) +
                                  ": input dim " + std::to_string(layer.in_dim()) +
                                  " does not chain from previous output dim " +
                                  std::to_string(p.layers.back().out_dim()));
    }
    p.layers.push_back(std::move(layer));
    ++index;
  }
  return p;
}

MlpPolicy load_mlp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mlp weight file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_mlp_json_text(ss.str());
}

std::string mlp_to_json_text(const MlpPolicy& p) {
  nlohmann::json j;
  j["scale"] = p.scale;
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : p.layers) {
    nlohmann::json jl;
    jl["w"] = layer.weights;
    jl["b"] = layer.bias;
    jl["act"] = act_name(layer.act);
    j["layers"].push_back(std::move(jl));
  }
  return j.dump();
}

void save_mlp(const MlpPolicy& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mlp weight file: " + path);
  out << mlp_to_json_text(p);
}

std::vector<double> forward_vec(const MlpPolicy& p, const std::vector<double>& in) {
  if (static_cast<int>(in.size()) != p.in_dim()) {
    throw std::invalid_argument("mlp forward: input size " + std::to_string(in.size()) +
                                " != network input dim " + std::to_string(p.in_dim()));
  }
  std::vector<double> cur = in;
  std::vector<double> next;
  for (const auto& layer : p.layers) {
    next.assign(layer.out_dim(), 0.0);
    for (int r = 0; r < layer.out_dim(); ++r) {
      double acc = layer.bias[r];
      const auto& row = layer.weights[r];
      for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * cur[c];
      switch (layer.act) {
        case MlpLayer::Act::Relu: acc = acc > 0 ? acc : 0.0; break;
        case MlpLayer::Act::Tanh: acc = std::tanh(acc); break;
        case MlpLayer::Act::Linear: break;
      }
      next[r] = acc;
    }
    cur.swap(next);
  }
  return cur;
}

double forward(const MlpPolicy& p, const Obs& obs) {
  if (p.out_dim() != 1) {
    throw std::invalid_argument("mlp forward: policy network must have one output");
  }
  return forward_vec(p, obs)[0] * p.scale;
}

Oracle make_mlp_oracle(MlpPolicy p) {
  auto shared = std::make_shared<MlpPolicy>(std::move(p));
  return [shared](const Obs& obs) { return forward(*shared, obs); };
}

}  // namespace synth
