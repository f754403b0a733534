#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "synth/types.hpp"

namespace synth {

// Evaluation semantics tags for primitive functions.
enum class Builtin { If, Gt, Sub, Add, Mul, Sqr, Sign, Cos, Exp, And, Xor, Neg };

int builtin_arity(Builtin b);
const char* builtin_name(Builtin b);
std::optional<Builtin> builtin_from_name(const std::string& name);

// One named, typed primitive: a builtin function or a constant.
struct DslEntry {
  enum class Impl { BuiltinFn, ConstF, ConstB };

  std::string name;
  TypeRef type;
  Impl impl = Impl::ConstF;
  Builtin builtin = Builtin::If;  // Impl::BuiltinFn
  double fval = 0.0;              // Impl::ConstF
  bool bval = false;              // Impl::ConstB
  double weight = 1.0;            // sampling weight, > 0

  int arity() const { return static_cast<int>(arg_suffixes(type).size()) - 1; }
};

// Registry of primitives. Declaration order is fixed and drives the
// deterministic enumeration order.
class Dsl {
public:
  void add(DslEntry entry);

  const DslEntry* find(const std::string& name) const;
  const DslEntry& at(std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<DslEntry>& entries() const { return entries_; }

  static Dsl from_json_text(const std::string& text);
  static Dsl load_file(const std::string& path);
  std::string to_json_text() const;

private:
  std::vector<DslEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Shipped fixtures matching the experiment languages.
Dsl pbe_dsl();
Dsl pendulum_dsl(bool extended = false);

}  // namespace synth
