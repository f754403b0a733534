#pragma once

#include <stdexcept>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/term.hpp"
#include "synth/types.hpp"

namespace synth {

// Type error with the path of the offending node.
class InferError : public std::runtime_error {
public:
  InferError(std::string msg, Path path)
      : std::runtime_error(std::move(msg)), path(std::move(path)) {}
  Path path;
};

struct InferResult {
  TypeRef type;  // fully substituted principal type
  Subst subst;
  int fresh;  // next unused variable id
};

// Principal type of t (complete or partial; holes contribute their
// annotation). Polymorphic primitives are freshened per occurrence.
// Throws InferError on a mismatch or unknown primitive.
InferResult infer_full(const TermPtr& t, const Dsl& dsl,
                       const std::vector<TypeRef>& input_types);
TypeRef infer(const TermPtr& t, const Dsl& dsl, const std::vector<TypeRef>& input_types);

// For each path in l, the most general type a replacement at that path must
// unify with, computed by substituting fresh holes simultaneously and
// re-inferring with the program's top-level type pinned to infer(t).
std::vector<TypeRef> type_at(const TermPtr& t, const Location& l, const Dsl& dsl,
                             const std::vector<TypeRef>& input_types);

}  // namespace synth
