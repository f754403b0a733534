#include "synth/term.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "synth/dsl.hpp"

namespace synth {

TermPtr Term::prim(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Prim;
  t->name = std::move(name);
  return t;
}

TermPtr Term::input(int index) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Input;
  t->input_index = index;
  return t;
}

TermPtr Term::app(TermPtr func, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::App;
  t->func = std::move(func);
  t->arg = std::move(arg);
  return t;
}

TermPtr Term::hole(TypeRef ty) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Hole;
  t->hole_type = std::move(ty);
  return t;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Prim: return a->name == b->name;
    case Term::Kind::Input: return a->input_index == b->input_index;
    case Term::Kind::App:
      return term_equal(a->func, b->func) && term_equal(a->arg, b->arg);
    case Term::Kind::Hole: return type_equal(a->hole_type, b->hole_type);
  }
  return false;
}

bool is_complete(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Hole: return false;
    case Term::Kind::App: return is_complete(t->func) && is_complete(t->arg);
    default: return true;
  }
}

TermPtr expr_at(const TermPtr& t, const Path& p) {
  TermPtr cur = t;
  for (int step : p) {
    if (cur->kind != Term::Kind::App || (step != 0 && step != 1)) {
      throw std::invalid_argument("expr_at: invalid path");
    }
    cur = step == 0 ? cur->func : cur->arg;
  }
  return cur;
}

namespace {

bool is_prefix(const Path& a, const Path& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

TermPtr replace_at(const TermPtr& t, const Path& p, std::size_t i, const TermPtr& r) {
  if (i == p.size()) return r;
  if (t->kind != Term::Kind::App || (p[i] != 0 && p[i] != 1)) {
    throw std::invalid_argument("edit: invalid path");
  }
  if (p[i] == 0) return Term::app(replace_at(t->func, p, i + 1, r), t->arg);
  return Term::app(t->func, replace_at(t->arg, p, i + 1, r));
}

}  // namespace

TermPtr edit(const TermPtr& t, const Location& l, const std::vector<TermPtr>& replacements) {
  if (l.paths.size() != replacements.size()) {
    throw std::invalid_argument("edit: replacement count mismatch");
  }
  for (std::size_t i = 0; i < l.paths.size(); ++i) {
    for (std::size_t j = i + 1; j < l.paths.size(); ++j) {
      if (is_prefix(l.paths[i], l.paths[j]) || is_prefix(l.paths[j], l.paths[i])) {
        throw std::invalid_argument("edit: paths not disjoint");
      }
    }
  }
  TermPtr out = t;
  for (std::size_t i = 0; i < l.paths.size(); ++i) {
    out = replace_at(out, l.paths[i], 0, replacements[i]);
  }
  return out;
}

int depth(const TermPtr& t) {
  if (t->kind != Term::Kind::App) return 1;
  // unroll the application spine: head applied to args left-to-right
  int best = 1;
  TermPtr cur = t;
  while (cur->kind == Term::Kind::App) {
    best = std::max(best, depth(cur->arg));
    cur = cur->func;
  }
  return 1 + best;
}

int token_count(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::App: return token_count(t->func) + token_count(t->arg);
    case Term::Kind::Hole: return 0;
    default: return 1;
  }
}

namespace {

void collect_paths(const TermPtr& t, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  if (t->kind == Term::Kind::App) {
    cur.push_back(0);
    collect_paths(t->func, cur, out);
    cur.back() = 1;
    collect_paths(t->arg, cur, out);
    cur.pop_back();
  }
}

void combos(const std::vector<Path>& paths, std::size_t start, int room,
            std::vector<Path>& chosen, std::vector<Location>& out) {
  for (std::size_t i = start; i < paths.size(); ++i) {
    bool ok = true;
    for (const Path& c : chosen) {
      if (is_prefix(c, paths[i]) || is_prefix(paths[i], c)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(paths[i]);
    out.emplace_back(chosen);
    if (room > 1) combos(paths, i + 1, room - 1, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<Path> all_paths(const TermPtr& t) {
  std::vector<Path> out;
  Path cur;
  collect_paths(t, cur, out);
  return out;
}

std::vector<Location> locations(const TermPtr& t, int n) {
  if (n < 1) throw std::invalid_argument("locations: n must be >= 1");
  std::vector<Path> paths = all_paths(t);
  std::vector<Location> out;
  if (n == 1) {
    out.reserve(paths.size());
    for (auto& p : paths) out.emplace_back(std::move(p));
    return out;
  }
  std::vector<Path> chosen;
  combos(paths, 0, n, chosen, out);
  return out;
}

std::string print_program(const TermPtr& t, bool allow_holes) {
  switch (t->kind) {
    case Term::Kind::Prim: return t->name;
    case Term::Kind::Input: return "x" + std::to_string(t->input_index + 1);
    case Term::Kind::App:
      return "(" + print_program(t->func, allow_holes) + " " +
             print_program(t->arg, allow_holes) + ")";
    case Term::Kind::Hole:
      if (!allow_holes) throw std::invalid_argument("print_program: term has a hole");
      return "?:" + type_to_string(t->hole_type);
  }
  return "";
}

namespace {

struct ProgramParser {
  std::string_view text;
  std::size_t pos = 0;
  const Dsl& dsl;
  int input_arity;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos) + ": " + msg);
  }

  TermPtr atom(const std::string& ident) {
    // x1..xN are input variables; everything else must be a DSL name
    if (ident.size() >= 2 && ident[0] == 'x' &&
        std::all_of(ident.begin() + 1, ident.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      int idx = std::stoi(ident.substr(1)) - 1;
      if (idx < 0 || idx >= input_arity) {
        fail("input variable '" + ident + "' out of range (arity " +
             std::to_string(input_arity) + ")");
      }
      return Term::input(idx);
    }
    if (!dsl.find(ident)) fail("unknown identifier '" + ident + "'");
    return Term::prim(ident);
  }

  std::string ident() {
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
      pos++;
    }
    if (pos == start) fail("expected identifier");
    return std::string(text.substr(start, pos - start));
  }

  // sequence of one or more expressions, left-folded into applications
  TermPtr sequence(bool top_level) {
    TermPtr acc;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      if (text[pos] == ')') {
        if (top_level) fail("unbalanced ')'");
        break;
      }
      TermPtr next;
      if (text[pos] == '(') {
        pos++;
        next = sequence(false);
        skip_ws();
        if (pos >= text.size() || text[pos] != ')') fail("missing ')'");
        pos++;
      } else {
        next = atom(ident());
      }
      acc = acc ? Term::app(std::move(acc), std::move(next)) : std::move(next);
    }
    if (!acc) fail("empty expression");
    return acc;
  }
};

}  // namespace

TermPtr parse_program(std::string_view text, const Dsl& dsl, int input_arity) {
  ProgramParser p{text, 0, dsl, input_arity};
  if (p.eof()) throw std::invalid_argument("parse error: empty program");
  TermPtr t = p.sequence(true);
  if (!p.eof()) throw std::invalid_argument("parse error: trailing characters");
  return t;
}

}  // namespace synth
