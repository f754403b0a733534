#include "synth/types.hpp"

#include <cctype>
#include <map>
#include <stdexcept>

namespace synth {

TypeRef Type::make_con(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Con;
  t->con = std::move(name);
  return t;
}

TypeRef Type::make_var(int id) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Var;
  t->var = id;
  return t;
}

TypeRef Type::make_arrow(TypeRef param, TypeRef result) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Arrow;
  t->param = std::move(param);
  t->result = std::move(result);
  return t;
}

const TypeRef& type_float() {
  static const TypeRef t = Type::make_con("Float");
  return t;
}

const TypeRef& type_bool() {
  static const TypeRef t = Type::make_con("Bool");
  return t;
}

bool type_equal(const TypeRef& a, const TypeRef& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Con: return a->con == b->con;
    case Type::Kind::Var: return a->var == b->var;
    case Type::Kind::Arrow:
      return type_equal(a->param, b->param) && type_equal(a->result, b->result);
  }
  return false;
}

bool occurs_in(int var, const TypeRef& t) {
  switch (t->kind) {
    case Type::Kind::Con: return false;
    case Type::Kind::Var: return t->var == var;
    case Type::Kind::Arrow: return occurs_in(var, t->param) || occurs_in(var, t->result);
  }
  return false;
}

bool contains_var(const TypeRef& t) {
  switch (t->kind) {
    case Type::Kind::Con: return false;
    case Type::Kind::Var: return true;
    case Type::Kind::Arrow: return contains_var(t->param) || contains_var(t->result);
  }
  return false;
}

int max_var_id(const TypeRef& t) {
  switch (t->kind) {
    case Type::Kind::Con: return -1;
    case Type::Kind::Var: return t->var;
    case Type::Kind::Arrow: return std::max(max_var_id(t->param), max_var_id(t->result));
  }
  return -1;
}

std::string type_to_string(const TypeRef& t) {
  switch (t->kind) {
    case Type::Kind::Con: return t->con;
    case Type::Kind::Var: return "t" + std::to_string(t->var);
    case Type::Kind::Arrow: {
      std::string lhs = type_to_string(t->param);
      if (t->param->kind == Type::Kind::Arrow) lhs = "(" + lhs + ")";
      return lhs + " -> " + type_to_string(t->result);
    }
  }
  return "?";
}

namespace {

struct TypeTextParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  bool consume_arrow() {
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
      pos += 2;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      pos++;
    }
    return std::string(text.substr(start, pos - start));
  }

  TypeRef parse() {
    TypeRef lhs = parse_atom();
    if (consume_arrow()) return Type::make_arrow(std::move(lhs), parse());
    return lhs;
  }

  TypeRef parse_atom() {
    skip_ws();
    if (consume('(')) {
      TypeRef inner = parse();
      if (!consume(')')) throw std::invalid_argument("type syntax: missing ')'");
      return inner;
    }
    std::string name = ident();
    if (name.empty()) throw std::invalid_argument("type syntax: expected type name");
    if (name.size() >= 2 && name[0] == 't' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      return Type::make_var(std::stoi(name.substr(1)));
    }
    return Type::make_con(std::move(name));
  }
};

}  // namespace

TypeRef parse_type(std::string_view text) {
  TypeTextParser p{text};
  TypeRef t = p.parse();
  if (!p.eof()) throw std::invalid_argument("type syntax: trailing characters");
  return t;
}

TypeRef Subst::apply(const TypeRef& t) const {
  if (bind_.empty()) return t;
  switch (t->kind) {
    case Type::Kind::Con: return t;
    case Type::Kind::Var: {
      auto it = bind_.find(t->var);
      return it == bind_.end() ? t : it->second;
    }
    case Type::Kind::Arrow: {
      TypeRef p = apply(t->param);
      TypeRef r = apply(t->result);
      if (p.get() == t->param.get() && r.get() == t->result.get()) return t;
      return Type::make_arrow(std::move(p), std::move(r));
    }
  }
  return t;
}

namespace {

TypeRef substitute_one(int var, const TypeRef& value, const TypeRef& t) {
  switch (t->kind) {
    case Type::Kind::Con: return t;
    case Type::Kind::Var: return t->var == var ? value : t;
    case Type::Kind::Arrow: {
      TypeRef p = substitute_one(var, value, t->param);
      TypeRef r = substitute_one(var, value, t->result);
      if (p.get() == t->param.get() && r.get() == t->result.get()) return t;
      return Type::make_arrow(std::move(p), std::move(r));
    }
  }
  return t;
}

}  // namespace

bool Subst::extend(int var, const TypeRef& t) {
  TypeRef value = apply(t);
  if (value->kind == Type::Kind::Var && value->var == var) return true;  // trivial binding
  if (occurs_in(var, value)) return false;
  for (auto& [v, bound] : bind_) bound = substitute_one(var, value, bound);
  bind_[var] = std::move(value);
  return true;
}

bool unify_into(Subst& s, const TypeRef& a, const TypeRef& b) {
  TypeRef x = s.apply(a);
  TypeRef y = s.apply(b);
  if (x->kind == Type::Kind::Var) return s.extend(x->var, y);
  if (y->kind == Type::Kind::Var) return s.extend(y->var, x);
  if (x->kind != y->kind) return false;
  if (x->kind == Type::Kind::Con) return x->con == y->con;
  // both arrows
  return unify_into(s, x->param, y->param) && unify_into(s, x->result, y->result);
}

std::optional<Subst> unify(const TypeRef& a, const TypeRef& b) {
  Subst s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return s;
}

std::vector<std::pair<int, TypeRef>> arg_suffixes(const TypeRef& t) {
  std::vector<std::pair<int, TypeRef>> out;
  TypeRef cur = t;
  int k = 0;
  out.emplace_back(k, cur);
  while (cur->kind == Type::Kind::Arrow) {
    cur = cur->result;
    out.emplace_back(++k, cur);
  }
  return out;
}

namespace {

TypeRef freshen_rec(const TypeRef& t, std::map<int, TypeRef>& renaming, int& counter) {
  switch (t->kind) {
    case Type::Kind::Con: return t;
    case Type::Kind::Var: {
      auto it = renaming.find(t->var);
      if (it != renaming.end()) return it->second;
      TypeRef fresh = Type::make_var(counter++);
      renaming.emplace(t->var, fresh);
      return fresh;
    }
    case Type::Kind::Arrow: {
      TypeRef p = freshen_rec(t->param, renaming, counter);
      TypeRef r = freshen_rec(t->result, renaming, counter);
      if (p.get() == t->param.get() && r.get() == t->result.get()) return t;
      return Type::make_arrow(std::move(p), std::move(r));
    }
  }
  return t;
}

}  // namespace

TypeRef freshen(const TypeRef& t, int& counter) {
  std::map<int, TypeRef> renaming;
  return freshen_rec(t, renaming, counter);
}

}  // namespace synth
