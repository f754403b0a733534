#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/enumerate.hpp"
#include "synth/eval.hpp"
#include "synth/term.hpp"

namespace synth {

enum class LossKind { ImitationMse, PbeAbs };

struct SearchConfig {
  int depth = 4;
  int max_edits = 1;       // max simultaneous edits n
  int max_iterations = 20;
  LossKind loss = LossKind::ImitationMse;
  DepthMetric metric = DepthMetric::Tree;
  int jobs = 1;
  TypeRef target;  // top-level program type; defaults to Float when null

  // observational-equivalence deduplication of candidates (off by default)
  bool dedup_signatures = false;
  int probe_count = 16;
  double probe_lo = -5.0, probe_hi = 5.0;
  std::uint64_t probe_seed = 0;
};

struct SearchIteration {
  int iter = 0;
  TermPtr best;
  double loss = 0.0;
  long evaluated = 0;  // unique candidates scored this iteration
  double wall_seconds = 0.0;
};

struct SearchTrace {
  std::vector<SearchIteration> iterations;

  const SearchIteration& back() const { return iterations.back(); }
  long total_evaluated() const {
    long n = 0;
    for (const auto& it : iterations) n += it.evaluated;
    return n;
  }
};

// Candidates at one location: replacements enumerated from the DSL extended
// with the expression currently at each edited path (reuse costs one level).
// Yields edited whole programs; structural duplicates are possible.
class NeighborhoodStream {
public:
  NeighborhoodStream(const Dsl& dsl, TermPtr subject, Location location, int d,
                     DepthMetric metric, const std::vector<TypeRef>& input_types);
  std::optional<TermPtr> next();

private:
  bool open_slot(std::size_t i);

  TermPtr subject_;
  Location location_;
  int depth_;
  DepthMetric metric_;
  std::vector<std::vector<EnumCandidate>> tables_;  // per slot
  std::vector<TypeRef> slot_types_;
  std::vector<std::optional<ProgramStream>> streams_;
  std::vector<EnumResult> current_;
  int fresh0_ = 0;
  bool primed_ = false;
  bool done_ = false;
};

// Convenience wrappers (materializing; tests and small cases).
std::vector<TermPtr> neighborhood_at(const Dsl& dsl, const TermPtr& subject,
                                     const Location& location, int d,
                                     const std::vector<TypeRef>& input_types,
                                     DepthMetric metric = DepthMetric::Tree);

// Union over locations(P, n), location-major order. Visitor returns false to
// stop. Programs may repeat across locations; the scorer deduplicates.
void for_each_neighbor(const Dsl& dsl, const TermPtr& subject, const SearchConfig& cfg,
                       const std::vector<TypeRef>& input_types,
                       const std::function<bool(const TermPtr&)>& visit);

double candidate_loss(const TermPtr& t, const Dataset& data, const Dsl& dsl,
                      LossKind kind);

// Minimum-loss member of the full neighborhood; ties broken by fewer tokens,
// then earlier stream position. evaluated (if set) receives the number of
// unique candidates scored. Result is independent of cfg.jobs.
std::pair<TermPtr, double> local_search_step(const Dsl& dsl, const TermPtr& subject,
                                             const Dataset& data, const SearchConfig& cfg,
                                             long* evaluated = nullptr);

// Iterated best-improvement descent. A null initial program makes iteration 0
// a plain depth-d enumeration of the target type. Stops at max_iterations, on
// an iteration with no strict loss improvement, or at loss 0.
SearchTrace iterate_search(const Dsl& dsl, TermPtr initial, const Dataset& data,
                           const SearchConfig& cfg);

}  // namespace synth
