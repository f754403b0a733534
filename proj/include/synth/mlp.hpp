#pragma once

#include <string>
#include <vector>

#include "synth/eval.hpp"
#include "synth/pendulum.hpp"

namespace synth {

// Feed-forward policy network: affine layers with per-layer activations.
// Immutable after load; only the forward pass is supported.
struct MlpLayer {
  enum class Act { Relu, Tanh, Linear };

  std::vector<std::vector<double>> weights;  // out x in, row-major
  std::vector<double> bias;                  // out
  Act act = Act::Linear;

  int in_dim() const { return weights.empty() ? 0 : static_cast<int>(weights[0].size()); }
  int out_dim() const { return static_cast<int>(weights.size()); }
};

struct MlpPolicy {
  std::vector<MlpLayer> layers;
  double scale = 1.0;

  int in_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
  int out_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }
};

// JSON weight file: {"layers":[{"w":[[...]],"b":[...],"act":"relu"},...],"scale":1.0}
// Throws on malformed files and on dimension mismatches (naming the layer).
MlpPolicy load_mlp_json_text(const std::string& text);
MlpPolicy load_mlp(const std::string& path);
std::string mlp_to_json_text(const MlpPolicy& p);
void save_mlp(const MlpPolicy& p, const std::string& path);

// Single forward pass; for a policy net the scalar output is scaled by
// p.scale after the final activation.
std::vector<double> forward_vec(const MlpPolicy& p, const std::vector<double>& in);
double forward(const MlpPolicy& p, const Obs& obs);

Oracle make_mlp_oracle(MlpPolicy p);

}  // namespace synth
