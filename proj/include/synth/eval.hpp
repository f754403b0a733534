#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/term.hpp"

namespace synth {

using Obs = std::vector<double>;

// Runtime value: Float, Bool, or a partially applied primitive.
struct Value {
  enum class Kind { F, B, Closure };

  struct ClosureData {
    const DslEntry* prim;
    std::vector<Value> args;
  };

  Kind kind = Kind::F;
  double f = 0.0;
  bool b = false;
  std::shared_ptr<const ClosureData> closure;

  static Value from_f(double v) { return Value{Kind::F, v, false, nullptr}; }
  static Value from_b(bool v) { return Value{Kind::B, 0.0, v, nullptr}; }
};

// Supervised rows (observation vector, expert action); the imitation dataset.
struct Dataset {
  struct Row {
    Obs obs;
    double action;
  };
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  int arity() const { return rows.empty() ? 0 : static_cast<int>(rows[0].obs.size()); }
};

Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& data, const std::string& path);

// Strict evaluation except `if`, which evaluates only the taken branch.
// nullopt signals a non-finite intermediate or final result (discard the
// candidate). Structural misuse of a well-typed term throws instead.
std::optional<Value> evaluate(const TermPtr& t, const Dsl& dsl, const Obs& obs);

// Mean squared error against the dataset actions; +inf if any row evaluates
// non-finite or to a non-Float.
double imitation_loss(const TermPtr& t, const Dataset& data, const Dsl& dsl);

// Sum of absolute errors over the example rows; booleans count as 0/1.
double pbe_error(const TermPtr& t, const Dataset& examples, const Dsl& dsl);

}  // namespace synth
