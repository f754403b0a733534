#pragma once

#include <cstdint>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/enumerate.hpp"
#include "synth/eval.hpp"
#include "synth/neighborhood.hpp"
#include "synth/rng.hpp"
#include "synth/term.hpp"

namespace synth {

struct PbeConfig {
  int num_inputs = 10;   // example rows per instance
  int input_arity = 3;
  int num_programs = 100;
  int min_tokens = 8;
  int reject_depth = 4;  // equivalence-rejection search depth
  int equivalence_probes = 16;
  double input_lo = -5.0, input_hi = 5.0;
  double input_weight = 3.0;   // sampling weight of each input variable
  int sample_depth = 5;        // tree-depth limiter for top-down sampling
  int resample_budget = 2000;  // attempts before giving up (pathological weights)
  DepthMetric metric = DepthMetric::Insertions;
  TypeRef target;  // sampled program type; Float when null
  std::uint64_t seed = 0;
};

// Weighted top-down typed sampling with the three rejection filters:
// too short (< min_tokens), constant output on the sampled inputs, or an
// observationally equivalent program within reject_depth.
TermPtr sample_ground_truth(const Dsl& dsl, const PbeConfig& cfg,
                            const std::vector<Obs>& inputs,
                            const std::vector<Obs>& probes, Rng& rng);

// Example inputs for one instance, uniform on [input_lo, input_hi]^arity.
std::vector<Obs> sample_inputs(const PbeConfig& cfg, Rng& rng);

struct PbeSeries {
  int program_id = 0;
  TermPtr ground_truth;
  std::vector<int> iter;
  std::vector<long> evaluated;     // cumulative programs evaluated
  std::vector<double> error;      // absolute error per iteration
  std::vector<double> norm_error; // error / error at iteration 0
};

struct PbeReport {
  std::vector<PbeSeries> series;
  // per-iteration aggregates over programs, last value carried forward
  std::vector<double> mean, median, stddev;
};

PbeReport run_pbe(const Dsl& dsl, const PbeConfig& cfg, const SearchConfig& search);

}  // namespace synth
