#include "synth/dsl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace synth {

int builtin_arity(Builtin b) {
  switch (b) {
    case Builtin::If: return 3;
    case Builtin::Gt:
    case Builtin::Sub:
    case Builtin::Add:
    case Builtin::Mul:
    case Builtin::And:
    case Builtin::Xor: return 2;
    case Builtin::Sqr:
    case Builtin::Sign:
    case Builtin::Cos:
    case Builtin::Exp:
    case Builtin::Neg: return 1;
  }
  return 0;
}

const char* builtin_name(Builtin b) {
  switch (b) {
    case Builtin::If: return "if";
    case Builtin::Gt: return "gt";
    case Builtin::Sub: return "sub";
    case Builtin::Add: return "add";
    case Builtin::Mul: return "mul";
    case Builtin::Sqr: return "sqr";
    case Builtin::Sign: return "sign";
    case Builtin::Cos: return "cos";
    case Builtin::Exp: return "exp";
    case Builtin::And: return "and";
    case Builtin::Xor: return "xor";
    case Builtin::Neg: return "neg";
  }
  return "?";
}

std::optional<Builtin> builtin_from_name(const std::string& name) {
  static const std::unordered_map<std::string, Builtin> table = {
      {"if", Builtin::If},     {"gt", Builtin::Gt},   {"sub", Builtin::Sub},
      {"add", Builtin::Add},   {"mul", Builtin::Mul}, {"sqr", Builtin::Sqr},
      {"sign", Builtin::Sign}, {"cos", Builtin::Cos}, {"exp", Builtin::Exp},
      {"and", Builtin::And},   {"xor", Builtin::Xor}, {"neg", Builtin::Neg}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

void Dsl::add(DslEntry entry) {
  if (entry.name.empty()) throw std::invalid_argument("dsl entry: empty name");
  if (index_.count(entry.name)) {
    throw std::invalid_argument("dsl entry: duplicate name '" + entry.name + "'");
  }
  if (!(entry.weight > 0)) {
    throw std::invalid_argument("dsl entry '" + entry.name + "': weight must be positive");
  }
  if (entry.impl == DslEntry::Impl::BuiltinFn &&
      entry.arity() != builtin_arity(entry.builtin)) {
    throw std::invalid_argument("dsl entry '" + entry.name +
                                "': type arity does not match builtin");
  }
  index_.emplace(entry.name, entries_.size());
  entries_.push_back(std::move(entry));
}

const DslEntry* Dsl::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Dsl Dsl::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw std::invalid_argument("dsl file: missing \"entries\" array");
  }
  Dsl dsl;
  for (const auto& e : j["entries"]) {
    DslEntry entry;
    entry.name = e.at("name").get<std::string>();
    entry.type = parse_type(e.at("type").get<std::string>());
    std::string impl = e.at("impl").get<std::string>();
    if (impl.rfind("builtin:", 0) == 0) {
      std::string tag = impl.substr(8);
      auto b = builtin_from_name(tag);
      if (!b) throw std::invalid_argument("dsl entry '" + entry.name + "': unknown builtin '" + tag + "'");
      entry.impl = DslEntry::Impl::BuiltinFn;
      entry.builtin = *b;
    } else if (impl.rfind("const:", 0) == 0) {
      std::string lit = impl.substr(6);
      if (lit == "true" || lit == "false") {
        entry.impl = DslEntry::Impl::ConstB;
        entry.bval = (lit == "true");
      } else {
        entry.impl = DslEntry::Impl::ConstF;
        entry.fval = std::stod(lit);
      }
    } else {
      throw std::invalid_argument("dsl entry '" + entry.name + "': bad impl '" + impl + "'");
    }
    if (e.contains("weight")) entry.weight = e["weight"].get<double>();
    dsl.add(std::move(entry));
  }
  return dsl;
}

Dsl Dsl::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dsl file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Dsl::to_json_text() const {
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json je;
    je["name"] = e.name;
    je["type"] = type_to_string(e.type);
    switch (e.impl) {
      case DslEntry::Impl::BuiltinFn:
        je["impl"] = std::string("builtin:") + builtin_name(e.builtin);
        break;
      case DslEntry::Impl::ConstF: {
        std::ostringstream os;
        os << "const:" << e.fval;
        je["impl"] = os.str();
        break;
      }
      case DslEntry::Impl::ConstB:
        je["impl"] = e.bval ? "const:true" : "const:false";
        break;
    }
    je["weight"] = e.weight;
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2);
}

namespace {

DslEntry make_fn(const std::string& name, const char* type, Builtin b, double weight) {
  DslEntry e;
  e.name = name;
  e.type = parse_type(type);
  e.impl = DslEntry::Impl::BuiltinFn;
  e.builtin = b;
  e.weight = weight;
  return e;
}

DslEntry make_const(const std::string& name, double v, double weight) {
  DslEntry e;
  e.name = name;
  e.type = type_float();
  e.impl = DslEntry::Impl::ConstF;
  e.fval = v;
  e.weight = weight;
  return e;
}

}  // namespace

Dsl pbe_dsl() {
  // Function weights 2^arity; `true` weighted far down. Inputs get their own
  // weight in the sampler config.
  Dsl d;
  d.add(make_fn("if", "Bool -> t0 -> t0 -> t0", Builtin::If, 8.0));
  d.add(make_fn("gt", "Float -> Float -> Bool", Builtin::Gt, 4.0));
  d.add(make_fn("and", "Bool -> Bool -> Bool", Builtin::And, 4.0));
  d.add(make_fn("xor", "Bool -> Bool -> Bool", Builtin::Xor, 4.0));
  d.add(make_fn("sub", "Float -> Float -> Float", Builtin::Sub, 4.0));
  d.add(make_fn("mul", "Float -> Float -> Float", Builtin::Mul, 4.0));
  d.add(make_fn("sqr", "Float -> Float", Builtin::Sqr, 2.0));
  d.add(make_const("-1", -1.0, 1.0));
  d.add(make_const("0", 0.0, 1.0));
  d.add(make_const("0.5", 0.5, 1.0));
  d.add(make_const("0.8", 0.8, 1.0));
  d.add(make_const("1", 1.0, 1.0));
  d.add(make_const("3", 3.0, 1.0));
  d.add(make_const("5", 5.0, 1.0));
  d.add(make_const("6", 6.0, 1.0));
  DslEntry t;
  t.name = "true";
  t.type = type_bool();
  t.impl = DslEntry::Impl::ConstB;
  t.bval = true;
  t.weight = 0.1;
  d.add(std::move(t));
  return d;
}

Dsl pendulum_dsl(bool extended) {
  Dsl d;
  d.add(make_fn("if", "Bool -> t0 -> t0 -> t0", Builtin::If, 8.0));
  d.add(make_fn("gt", "Float -> Float -> Bool", Builtin::Gt, 4.0));
  d.add(make_fn("sub", "Float -> Float -> Float", Builtin::Sub, 4.0));
  d.add(make_fn("add", "Float -> Float -> Float", Builtin::Add, 4.0));
  d.add(make_fn("mul", "Float -> Float -> Float", Builtin::Mul, 4.0));
  d.add(make_fn("sign", "Float -> Float", Builtin::Sign, 2.0));
  d.add(make_fn("sqr", "Float -> Float", Builtin::Sqr, 2.0));
  if (extended) {
    d.add(make_fn("cos", "Float -> Float", Builtin::Cos, 2.0));
    d.add(make_fn("exp", "Float -> Float", Builtin::Exp, 2.0));
  }
  d.add(make_const("-6", -6.0, 1.0));
  d.add(make_const("-1", -1.0, 1.0));
  d.add(make_const("1", 1.0, 1.0));
  d.add(make_const("0.5", 0.5, 1.0));
  d.add(make_const("0.6", 0.6, 1.0));
  d.add(make_const("8", 8.0, 1.0));
  d.add(make_const("ten", 10.0, 1.0));
  return d;
}

}  // namespace synth
