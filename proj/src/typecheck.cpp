#include "synth/typecheck.hpp"

#include <algorithm>

namespace synth {

namespace {

int max_hole_var(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Hole: return max_var_id(t->hole_type);
    case Term::Kind::App:
      return std::max(max_hole_var(t->func), max_hole_var(t->arg));
    default: return -1;
  }
}

struct InferCtx {
  const Dsl& dsl;
  const std::vector<TypeRef>& input_types;
  Subst subst;
  int fresh;

  TypeRef visit(const TermPtr& t, Path& path) {
    switch (t->kind) {
      case Term::Kind::Prim: {
        const DslEntry* e = dsl.find(t->name);
        if (!e) throw InferError("unknown primitive '" + t->name + "'", path);
        return freshen(e->type, fresh);
      }
      case Term::Kind::Input:
        if (t->input_index < 0 || t->input_index >= static_cast<int>(input_types.size())) {
          throw InferError("input index out of range", path);
        }
        return input_types[t->input_index];
      case Term::Kind::Hole:
        return t->hole_type;
      case Term::Kind::App: {
        path.push_back(0);
        TypeRef fn = visit(t->func, path);
        path.back() = 1;
        TypeRef arg = visit(t->arg, path);
        path.pop_back();
        TypeRef res = Type::make_var(fresh++);
        if (!unify_into(subst, fn, Type::make_arrow(arg, res))) {
          Path at = path;
          at.push_back(1);
          throw InferError("type mismatch applying '" +
                               print_program(t->func, /*allow_holes=*/true) + "' to '" +
                               print_program(t->arg, /*allow_holes=*/true) + "'",
                           at);
        }
        return res;
      }
    }
    throw InferError("malformed term", path);
  }
};

}  // namespace

InferResult infer_full(const TermPtr& t, const Dsl& dsl,
                       const std::vector<TypeRef>& input_types) {
  InferCtx ctx{dsl, input_types, Subst{}, max_hole_var(t) + 1};
  Path path;
  TypeRef ty = ctx.visit(t, path);
  return InferResult{ctx.subst.apply(ty), std::move(ctx.subst), ctx.fresh};
}

TypeRef infer(const TermPtr& t, const Dsl& dsl, const std::vector<TypeRef>& input_types) {
  return infer_full(t, dsl, input_types).type;
}

std::vector<TypeRef> type_at(const TermPtr& t, const Location& l, const Dsl& dsl,
                             const std::vector<TypeRef>& input_types) {
  TypeRef top = infer(t, dsl, input_types);
  int fresh = max_hole_var(t) + 1;
  std::vector<TermPtr> holes;
  std::vector<int> hole_vars;
  holes.reserve(l.paths.size());
  for (std::size_t i = 0; i < l.paths.size(); ++i) {
    expr_at(t, l.paths[i]);  // validates the path
    hole_vars.push_back(fresh);
    holes.push_back(Term::hole(Type::make_var(fresh++)));
  }
  TermPtr punched = edit(t, l, holes);
  InferResult r = infer_full(punched, dsl, input_types);
  // Pin the whole program's type: a replacement must keep it unchanged.
  if (!unify_into(r.subst, r.type, top)) {
    throw InferError("type_at: cannot preserve top-level type", Path{});
  }
  std::vector<TypeRef> out;
  out.reserve(hole_vars.size());
  for (int v : hole_vars) out.push_back(r.subst.apply(Type::make_var(v)));
  return out;
}

}  // namespace synth
