#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "synth/types.hpp"

namespace synth {

class Dsl;

// Applicative AST over DSL primitives, input variables, and typed holes.
// Application is binary (curried); a k-ary call is a left-nested spine of
// k Apps. Terms are immutable and structurally shared.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Prim, Input, App, Hole };

  Kind kind;
  std::string name;   // Prim: DSL entry name
  int input_index = -1;  // Input: 0-based index
  TermPtr func, arg;  // App
  TypeRef hole_type;  // Hole

  static TermPtr prim(std::string name);
  static TermPtr input(int index);
  static TermPtr app(TermPtr func, TermPtr arg);
  static TermPtr hole(TypeRef ty);
};

// Root-to-node path; 0 descends into the function child, 1 into the argument.
using Path = std::vector<int>;

// One or more pairwise-disjoint paths designating simultaneous edit sites.
struct Location {
  std::vector<Path> paths;

  Location() = default;
  explicit Location(Path p) { paths.push_back(std::move(p)); }
  explicit Location(std::vector<Path> ps) : paths(std::move(ps)) {}
};

bool term_equal(const TermPtr& a, const TermPtr& b);
bool is_complete(const TermPtr& t);

// Subterm at p; throws std::invalid_argument on an invalid path.
TermPtr expr_at(const TermPtr& t, const Path& p);

// Simultaneously replaces the subterm at each of l's paths with the matching
// replacement. Paths must be valid and pairwise disjoint; counts must match.
TermPtr edit(const TermPtr& t, const Location& l, const std::vector<TermPtr>& replacements);

// Tree depth with a fully-applied curried spine counted as one level:
// leaves are 1, a call f a1..ak is 1 + max depth of the arguments.
int depth(const TermPtr& t);

// Number of Prim + Input nodes (function calls plus arguments).
int token_count(const TermPtr& t);

// All paths of t in deterministic preorder (func before arg).
std::vector<Path> all_paths(const TermPtr& t);

// For n = 1: every path as a singleton, in preorder. For n > 1: additionally
// every set of up to n pairwise-disjoint paths, enumerated by backtracking
// over the preorder list.
std::vector<Location> locations(const TermPtr& t, int n);

// Canonical fully parenthesized text. Holes print as ?:<type> only when
// allow_holes is set; otherwise a hole is an error.
std::string print_program(const TermPtr& t, bool allow_holes = false);

// Parses the canonical curried S-expression format. Identifiers resolve to
// DSL names or x1..xN input variables. Adjacent expressions fold into
// applications, so the outermost parens may be omitted.
TermPtr parse_program(std::string_view text, const Dsl& dsl, int input_arity);

}  // namespace synth
