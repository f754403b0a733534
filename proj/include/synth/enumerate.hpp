#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/eval.hpp"
#include "synth/term.hpp"
#include "synth/types.hpp"

namespace synth {

// How the depth bound d is accounted during candidate generation.
//   Tree:       d bounds the tree depth of the generated expression, with a
//               fully applied curried spine counting as one level.
//   Insertions: d bounds the number of candidate insertions (equivalently,
//               the token count of the generated expression), the literal
//               reading of the recursive neighborhood definition.
// Reused expressions count as a single level / single insertion either way.
enum class DepthMetric { Tree, Insertions };

// One selectable candidate: a DSL primitive, an input variable, or a whole
// expression dynamically added for reuse during neighborhood generation.
struct EnumCandidate {
  TermPtr atom;
  TypeRef type;
};

// Primitives in declaration order, then input variables.
std::vector<EnumCandidate> candidate_table(const Dsl& dsl,
                                           const std::vector<TypeRef>& input_types);

struct EnumResult {
  TermPtr term;
  Subst subst;  // accumulated episode substitution (for chaining slots)
  int fresh;
};

// Depth-limited type-directed enumeration of complete terms unifying with a
// target type. Deterministic: candidates in table order, argument counts
// ascending, holes filled left to right. Pull-based; each next() resumes the
// depth-first traversal of the search tree.
class ProgramStream {
public:
  ProgramStream(std::vector<EnumCandidate> table, TypeRef target, int d,
                DepthMetric metric, Subst initial = {}, int fresh = 0);

  std::optional<EnumResult> next();

private:
  struct HoleInfo {
    Path path;
    TypeRef type;  // symbolic; effective type is subst-applied
    int budget;    // Tree metric: remaining levels below this hole
  };
  struct Frame {
    TermPtr term;
    std::vector<HoleInfo> holes;  // holes[0] is expanded next
    Subst subst;
    int fresh;
    int budget;        // Insertions metric: remaining insertions
    std::size_t cand;  // resume cursor: candidate index
    int k;             // resume cursor: argument count to try next
  };

  std::vector<EnumCandidate> table_;
  DepthMetric metric_;
  std::vector<Frame> stack_;
};

// Exactly the complete, well-typed terms of the target type within the depth
// bound, in stream order.
std::vector<TermPtr> enumerate_programs(const Dsl& dsl, const TypeRef& target, int d,
                                        const std::vector<TypeRef>& input_types,
                                        DepthMetric metric = DepthMetric::Tree);

long count_programs(const Dsl& dsl, const TypeRef& target, int d,
                    const std::vector<TypeRef>& input_types,
                    DepthMetric metric = DepthMetric::Tree);

// Streaming visit; the visitor returns false to stop early.
void for_each_program(const Dsl& dsl, const TypeRef& target, int d,
                      const std::vector<TypeRef>& input_types, DepthMetric metric,
                      const std::function<bool(const TermPtr&)>& visit);

// Evaluation outcome tuple used for observational comparison; non-finite
// results map to a distinguished symbol.
struct Outcome {
  enum class Kind { F, B, Nonfinite };
  Kind kind = Kind::Nonfinite;
  double f = 0.0;
  bool b = false;

  bool operator==(const Outcome& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::F) return f == o.f;
    if (kind == Kind::B) return b == o.b;
    return true;
  }
};

std::vector<Outcome> observational_signature(const TermPtr& t,
                                             const std::vector<Obs>& probes,
                                             const Dsl& dsl);

// True iff some program within the depth bound at t's type shares t's
// signature on the probes.
bool has_equivalent_within_depth(const TermPtr& t, const Dsl& dsl, int d,
                                 const std::vector<Obs>& probes,
                                 const std::vector<TypeRef>& input_types,
                                 DepthMetric metric = DepthMetric::Tree);

// Probe observation vectors, uniform per component on [lo, hi].
std::vector<Obs> make_probes(int count, int arity, double lo, double hi,
                             std::uint64_t seed);

}  // namespace synth
