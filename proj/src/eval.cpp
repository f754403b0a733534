#include "synth/eval.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace synth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<Value> apply_builtin(const DslEntry& e, const std::vector<Value>& args) {
  auto finite = [](double v) -> std::optional<Value> {
    if (!std::isfinite(v)) return std::nullopt;
    return Value::from_f(v);
  };
  switch (e.builtin) {
    case Builtin::Gt: return Value::from_b(args[0].f > args[1].f);
    case Builtin::Sub: return finite(args[0].f - args[1].f);
    case Builtin::Add: return finite(args[0].f + args[1].f);
    case Builtin::Mul: return finite(args[0].f * args[1].f);
    case Builtin::Sqr: return finite(args[0].f * args[0].f);
    case Builtin::Sign: {
      double v = args[0].f;
      return Value::from_f(v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0));
    }
    case Builtin::Cos: return finite(std::cos(args[0].f));
    case Builtin::Exp: return finite(std::exp(args[0].f));
    case Builtin::And: return Value::from_b(args[0].b && args[1].b);
    case Builtin::Xor: return Value::from_b(args[0].b != args[1].b);
    case Builtin::Neg: return Value::from_b(!args[0].b);
    case Builtin::If: break;  // handled lazily by the caller
  }
  throw std::logic_error("apply_builtin: unexpected builtin");
}

std::optional<Value> entry_value(const DslEntry& e) {
  switch (e.impl) {
    case DslEntry::Impl::ConstF:
      if (!std::isfinite(e.fval)) return std::nullopt;
      return Value::from_f(e.fval);
    case DslEntry::Impl::ConstB: return Value::from_b(e.bval);
    case DslEntry::Impl::BuiltinFn: {
      Value v;
      v.kind = Value::Kind::Closure;
      v.closure = std::make_shared<Value::ClosureData>(Value::ClosureData{&e, {}});
      return v;
    }
  }
  throw std::logic_error("entry_value: bad impl");
}

std::optional<Value> apply_value(const Value& fn, Value arg) {
  if (fn.kind != Value::Kind::Closure) {
    throw std::logic_error("evaluate: application of a non-function value");
  }
  auto data = std::make_shared<Value::ClosureData>(*fn.closure);
  data->args.push_back(std::move(arg));
  const DslEntry& e = *data->prim;
  if (static_cast<int>(data->args.size()) < builtin_arity(e.builtin)) {
    Value v;
    v.kind = Value::Kind::Closure;
    v.closure = std::move(data);
    return v;
  }
  if (e.builtin == Builtin::If) {
    // laziness is lost once `if` escapes a direct spine; evaluate strictly
    return data->args[0].b ? data->args[1] : data->args[2];
  }
  return apply_builtin(e, data->args);
}

}  // namespace

std::optional<Value> evaluate(const TermPtr& t, const Dsl& dsl, const Obs& obs) {
  switch (t->kind) {
    case Term::Kind::Hole:
      throw std::logic_error("evaluate: term has a hole");
    case Term::Kind::Input:
      if (t->input_index < 0 || t->input_index >= static_cast<int>(obs.size())) {
        throw std::logic_error("evaluate: input index out of range");
      }
      if (!std::isfinite(obs[t->input_index])) return std::nullopt;
      return Value::from_f(obs[t->input_index]);
    case Term::Kind::Prim: {
      const DslEntry* e = dsl.find(t->name);
      if (!e) throw std::logic_error("evaluate: unknown primitive '" + t->name + "'");
      return entry_value(*e);
    }
    case Term::Kind::App: {
      // unroll the spine so a fully applied `if` can take only one branch
      std::vector<const TermPtr*> args;
      const TermPtr* cur = &t;
      while ((*cur)->kind == Term::Kind::App) {
        args.push_back(&(*cur)->arg);
        cur = &(*cur)->func;
      }
      const TermPtr& head = *cur;
      if (head->kind == Term::Kind::Prim) {
        const DslEntry* e = dsl.find(head->name);
        if (!e) throw std::logic_error("evaluate: unknown primitive '" + head->name + "'");
        if (e->impl == DslEntry::Impl::BuiltinFn && e->builtin == Builtin::If &&
            args.size() == 3) {
          auto cond = evaluate(*args[2], dsl, obs);  // args are spine-reversed
          if (!cond) return std::nullopt;
          if (cond->kind != Value::Kind::B) {
            throw std::logic_error("evaluate: if condition is not Bool");
          }
          return evaluate(cond->b ? *args[1] : *args[0], dsl, obs);
        }
      }
      auto fn = evaluate(t->func, dsl, obs);
      if (!fn) return std::nullopt;
      auto arg = evaluate(t->arg, dsl, obs);
      if (!arg) return std::nullopt;
      return apply_value(*fn, std::move(*arg));
    }
  }
  throw std::logic_error("evaluate: malformed term");
}

double imitation_loss(const TermPtr& t, const Dataset& data, const Dsl& dsl) {
  if (data.rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& row : data.rows) {
    auto v = evaluate(t, dsl, row.obs);
    if (!v || v->kind != Value::Kind::F) return kInf;
    double d = v->f - row.action;
    sum += d * d;
    if (!std::isfinite(sum)) return kInf;
  }
  return sum / static_cast<double>(data.rows.size());
}

double pbe_error(const TermPtr& t, const Dataset& examples, const Dsl& dsl) {
  double sum = 0.0;
  for (const auto& row : examples.rows) {
    auto v = evaluate(t, dsl, row.obs);
    if (!v) return kInf;
    double out;
    if (v->kind == Value::Kind::F) {
      out = v->f;
    } else if (v->kind == Value::Kind::B) {
      out = v->b ? 1.0 : 0.0;
    } else {
      return kInf;
    }
    sum += std::abs(out - row.action);
    if (!std::isfinite(sum)) return kInf;
  }
  return sum;
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset is empty: " + path);
  // header: x1,...,xN,action
  int arity = 0;
  {
    std::stringstream ss(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.empty() || cols.back() != "action") {
      throw std::runtime_error("dataset header must end with 'action': " + path);
    }
    arity = static_cast<int>(cols.size()) - 1;
  }
  Dataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Dataset::Row row;
    while (std::getline(ss, cell, ',')) row.obs.push_back(std::stod(cell));
    if (static_cast<int>(row.obs.size()) != arity + 1) {
      throw std::runtime_error("dataset row arity mismatch: " + path);
    }
    row.action = row.obs.back();
    row.obs.pop_back();
    data.rows.push_back(std::move(row));
  }
  return data;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  int arity = data.arity();
  for (int i = 0; i < arity; ++i) out << "x" << (i + 1) << ",";
  out << "action\n";
  for (const auto& row : data.rows) {
    for (double v : row.obs) out << fmt_double(v) << ",";
    out << fmt_double(row.action) << "\n";
  }
}

}  // namespace synth
