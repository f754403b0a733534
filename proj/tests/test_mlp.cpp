#include <cmath>

#include "doctest.h"
#include "synth/mlp.hpp"
#include "synth/rng.hpp"

using namespace synth;

namespace {

MlpPolicy tiny_tanh() {
  // single layer: action = tanh(x1)
  MlpPolicy p;
  MlpLayer layer;
  layer.weights = {{1.0, 0.0, 0.0}};
  layer.bias = {0.0};
  layer.act = MlpLayer::Act::Tanh;
  p.layers.push_back(layer);
  return p;
}

MlpPolicy random_policy(Rng& rng) {
  MlpPolicy p;
  std::vector<int> dims{3, 24, 24, 1};
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    MlpLayer layer;
    layer.weights.assign(dims[i + 1], std::vector<double>(dims[i]));
    layer.bias.assign(dims[i + 1], 0.0);
    for (auto& row : layer.weights) {
      for (double& w : row) w = rng.uniform(-0.7, 0.7);
    }
    for (double& b : layer.bias) b = rng.uniform(-0.2, 0.2);
    layer.act = i + 2 == dims.size() ? MlpLayer::Act::Tanh : MlpLayer::Act::Relu;
    p.layers.push_back(std::move(layer));
  }
  return p;
}

}  // namespace

TEST_CASE("forward matches hand computation") {
  MlpPolicy p = tiny_tanh();
  CHECK(forward(p, {0.5, 2.0, -9.0}) == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
  CHECK(forward(p, {0.0, 1.0, 1.0}) == 0.0);

  // all-zero weights give action 0 regardless of input
  MlpPolicy zero = p;
  zero.layers[0].weights = {{0, 0, 0}};
  CHECK(forward(zero, {3.0, -2.0, 1.0}) == 0.0);
}

TEST_CASE("relu hidden layer") {
  MlpPolicy p;
  MlpLayer h;
  h.weights = {{1, 0, 0}, {-1, 0, 0}};
  h.bias = {0, 0};
  h.act = MlpLayer::Act::Relu;
  MlpLayer out;
  out.weights = {{1, 1}};
  out.bias = {0};
  out.act = MlpLayer::Act::Linear;
  p.layers = {h, out};
  // relu(x) + relu(-x) = |x|
  CHECK(forward(p, {2.5, 0, 0}) == 2.5);
  CHECK(forward(p, {-1.25, 0, 0}) == 1.25);
}

TEST_CASE("json round trip") {
  Rng rng(5);
  MlpPolicy p = random_policy(rng);
  MlpPolicy q = load_mlp_json_text(mlp_to_json_text(p));
  REQUIRE(q.layers.size() == p.layers.size());
  for (int i = 0; i < 50; ++i) {
    Obs obs{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(forward(p, obs) == forward(q, obs));
  }
}

TEST_CASE("dimension mismatch is rejected with the layer index") {
  // 3 -> 24 -> 23 -> 1 file: layer 2 cannot chain
  std::string text = R"({"layers":[)";
  auto matrix = [](int rows, int cols) {
    std::string s = "[";
    for (int r = 0; r < rows; ++r) {
      s += "[";
      for (int c = 0; c < cols; ++c) s += c + 1 < cols ? "0," : "0";
      s += r + 1 < rows ? "]," : "]";
    }
    return s + "]";
  };
  auto vec = [](int n) {
    std::string s = "[";
    for (int i = 0; i < n; ++i) s += i + 1 < n ? "0," : "0";
    return s + "]";
  };
  text += R"({"w":)" + matrix(24, 3) + R"(,"b":)" + vec(24) + R"(,"act":"relu"},)";
  text += R"({"w":)" + matrix(23, 24) + R"(,"b":)" + vec(23) + R"(,"act":"relu"},)";
  text += R"({"w":)" + matrix(1, 24) + R"(,"b":)" + vec(1) + R"(,"act":"tanh"}]})";
  try {
    load_mlp_json_text(text);
    FAIL("expected a dimension error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("layer 2") != std::string::npos);
  }
}

TEST_CASE("malformed files are rejected") {
  CHECK_THROWS(load_mlp_json_text("{}"));
  CHECK_THROWS(load_mlp_json_text(R"({"layers":[]})"));
  CHECK_THROWS(load_mlp_json_text(R"({"layers":[{"w":[[1],[1,2]],"b":[0,0]}]})"));
  CHECK_THROWS(load_mlp_json_text(R"({"layers":[{"w":[[1]],"b":[0,0]}]})"));
  CHECK_THROWS(load_mlp_json_text(R"({"layers":[{"w":[[1]],"b":[0],"act":"gelu"}]})"));
}

TEST_CASE("tanh output stays in range") {
  Rng rng(11);
  MlpPolicy p = random_policy(rng);
  for (int i = 0; i < 10000; ++i) {
    Obs obs{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    double a = forward(p, obs);
    CHECK(a >= -1.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("forward is lipschitz against the layer norm product") {
  Rng rng(13);
  MlpPolicy p = random_policy(rng);
  // crude operator-norm bound: product of max absolute row sums
  double bound = 1.0;
  for (const auto& layer : p.layers) {
    double max_row = 0;
    for (const auto& row : layer.weights) {
      double sum = 0;
      for (double w : row) sum += std::abs(w);
      max_row = std::max(max_row, sum);
    }
    bound *= max_row;
  }
  for (int i = 0; i < 500; ++i) {
    Obs a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Obs b = a;
    int j = static_cast<int>(rng.integer(3));
    double eps = rng.uniform(-1e-3, 1e-3);
    b[j] += eps;
    double diff = std::abs(forward(p, a) - forward(p, b));
    CHECK(diff <= bound * std::abs(eps) + 1e-12);
  }
}
