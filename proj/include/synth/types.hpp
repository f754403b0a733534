#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synth {

// Hindley-Milner monotypes: base constructors (Float, Bool), type variables
// t0, t1, ..., and right-associative arrows.
class Type;
using TypeRef = std::shared_ptr<const Type>;

class Type {
public:
  enum class Kind { Con, Var, Arrow };

  Kind kind;
  std::string con;        // Kind::Con
  int var = -1;           // Kind::Var
  TypeRef param, result;  // Kind::Arrow

  static TypeRef make_con(std::string name);
  static TypeRef make_var(int id);
  static TypeRef make_arrow(TypeRef param, TypeRef result);
};

// Interned common bases.
const TypeRef& type_float();
const TypeRef& type_bool();

bool type_equal(const TypeRef& a, const TypeRef& b);
bool occurs_in(int var, const TypeRef& t);
bool contains_var(const TypeRef& t);
int max_var_id(const TypeRef& t);  // -1 when t is ground

std::string type_to_string(const TypeRef& t);
// Accepts `Float`, `Bool`, `t0`, and right-associative `A -> B -> C` with parens.
TypeRef parse_type(std::string_view text);

// Idempotent substitution from type variables to types. Bindings never map a
// variable to a type containing it (occurs check at construction).
class Subst {
public:
  TypeRef apply(const TypeRef& t) const;
  // false on occurs-check violation; leaves the substitution untouched then
  bool extend(int var, const TypeRef& t);
  bool empty() const { return bind_.empty(); }
  std::size_t size() const { return bind_.size(); }
  const std::map<int, TypeRef>& bindings() const { return bind_; }

private:
  std::map<int, TypeRef> bind_;
};

// Most general unifier of a and b, or nullopt on constructor clash / occurs check.
std::optional<Subst> unify(const TypeRef& a, const TypeRef& b);
// Unify under an existing substitution, extending it in place. On failure the
// substitution may hold partial extensions, so callers keep their own copy.
bool unify_into(Subst& s, const TypeRef& a, const TypeRef& b);

// [(0, t), (1, t after one arg), ..., (A, yield)] for an arrow chain of length A.
std::vector<std::pair<int, TypeRef>> arg_suffixes(const TypeRef& t);

// Renames every variable in t to a fresh id drawn from counter.
TypeRef freshen(const TypeRef& t, int& counter);

}  // namespace synth
