#include "synth/pbe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "synth/typecheck.hpp"

namespace synth {

namespace {

// One top-down typed sample; nullptr when the depth limiter corners us in a
// hole no atom can fill.
TermPtr sample_term(const Dsl& dsl, const PbeConfig& cfg, const TypeRef& want,
                    int budget, Subst& subst, int& fresh, Rng& rng) {
  struct Choice {
    TermPtr atom;
    TypeRef declared;
    int k;
    double weight;
  };
  std::vector<Choice> choices;
  std::vector<double> weights;
  TypeRef hole = subst.apply(want);

  auto consider = [&](const TermPtr& atom, const TypeRef& declared, double weight) {
    int fresh_try = fresh;
    TypeRef ty = freshen(declared, fresh_try);
    auto suffixes = arg_suffixes(ty);
    for (int k = 0; k < static_cast<int>(suffixes.size()); ++k) {
      if (k > 0 && budget < 2) continue;
      Subst trial = subst;
      if (!unify_into(trial, hole, suffixes[k].second)) continue;
      choices.push_back(Choice{atom, declared, k, weight});
      weights.push_back(weight);
    }
  };

  for (const auto& entry : dsl.entries()) {
    consider(Term::prim(entry.name), entry.type, entry.weight);
  }
  for (int i = 0; i < cfg.input_arity; ++i) {
    consider(Term::input(i), type_float(), cfg.input_weight);
  }
  if (choices.empty()) return nullptr;

  const Choice& pick = choices[rng.weighted(weights)];
  TypeRef ty = freshen(pick.declared, fresh);
  auto suffixes = arg_suffixes(ty);
  if (!unify_into(subst, hole, suffixes[pick.k].second)) {
    throw std::logic_error("sample_term: accepted choice failed to re-unify");
  }
  TermPtr term = pick.atom;
  TypeRef walk = ty;
  for (int i = 0; i < pick.k; ++i) {
    TermPtr arg = sample_term(dsl, cfg, walk->param, budget - 1, subst, fresh, rng);
    if (!arg) return nullptr;
    term = Term::app(std::move(term), std::move(arg));
    walk = walk->result;
  }
  return term;
}

bool constant_on_inputs(const TermPtr& t, const Dsl& dsl, const std::vector<Obs>& inputs) {
  std::vector<Outcome> sig = observational_signature(t, inputs, dsl);
  for (const Outcome& o : sig) {
    if (o.kind == Outcome::Kind::Nonfinite) return true;  // unusable either way
  }
  for (std::size_t i = 1; i < sig.size(); ++i) {
    if (!(sig[i] == sig[0])) return false;
  }
  return true;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<Obs> sample_inputs(const PbeConfig& cfg, Rng& rng) {
  std::vector<Obs> inputs(cfg.num_inputs);
  for (auto& obs : inputs) {
    obs.resize(cfg.input_arity);
    for (double& v : obs) v = rng.uniform(cfg.input_lo, cfg.input_hi);
  }
  return inputs;
}

TermPtr sample_ground_truth(const Dsl& dsl, const PbeConfig& cfg,
                            const std::vector<Obs>& inputs,
                            const std::vector<Obs>& probes, Rng& rng) {
  TypeRef target = cfg.target ? cfg.target : type_float();
  std::vector<TypeRef> input_types(cfg.input_arity, type_float());
  for (int attempt = 0; attempt < cfg.resample_budget; ++attempt) {
    Subst subst;
    int fresh = max_var_id(target) + 1;
    TermPtr t = sample_term(dsl, cfg, target, cfg.sample_depth, subst, fresh, rng);
    if (!t) continue;
    if (token_count(t) < cfg.min_tokens) continue;
    if (constant_on_inputs(t, dsl, inputs)) continue;
    if (has_equivalent_within_depth(t, dsl, cfg.reject_depth, probes, input_types,
                                    cfg.metric)) {
      continue;
    }
    return t;
  }
  throw std::runtime_error(
      "sample_ground_truth: resample budget exhausted; check weights and filters");
}

PbeReport run_pbe(const Dsl& dsl, const PbeConfig& cfg, const SearchConfig& search) {
  PbeReport report;
  std::size_t max_iters = 0;

  for (int id = 0; id < cfg.num_programs; ++id) {
    Rng rng(derive_seed(cfg.seed, 0x70626521ULL, id));
    std::vector<Obs> inputs = sample_inputs(cfg, rng);
    std::vector<Obs> probes = make_probes(cfg.equivalence_probes, cfg.input_arity,
                                          cfg.input_lo, cfg.input_hi,
                                          derive_seed(cfg.seed, 0x70726f62ULL, id));
    TermPtr truth = sample_ground_truth(dsl, cfg, inputs, probes, rng);

    Dataset data;
    for (const Obs& obs : inputs) {
      auto v = evaluate(truth, dsl, obs);
      double out;
      if (v && v->kind == Value::Kind::F) {
        out = v->f;
      } else if (v && v->kind == Value::Kind::B) {
        out = v->b ? 1.0 : 0.0;
      } else {
        throw std::logic_error("run_pbe: accepted ground truth is non-finite on inputs");
      }
      data.rows.push_back(Dataset::Row{obs, out});
    }

    SearchConfig scfg = search;
    scfg.loss = LossKind::PbeAbs;
    scfg.metric = cfg.metric;
    scfg.target = infer(truth, dsl, std::vector<TypeRef>(cfg.input_arity, type_float()));
    SearchTrace trace = iterate_search(dsl, nullptr, data, scfg);

    PbeSeries series;
    series.program_id = id;
    series.ground_truth = truth;
    long cumulative = 0;
    double err0 = trace.iterations.empty() ? 0.0 : trace.iterations[0].loss;
    for (const auto& it : trace.iterations) {
      cumulative += it.evaluated;
      series.iter.push_back(it.iter);
      series.evaluated.push_back(cumulative);
      series.error.push_back(it.loss);
      series.norm_error.push_back(err0 > 0 ? it.loss / err0 : (it.loss > 0 ? 1.0 : 0.0));
    }
    max_iters = std::max(max_iters, series.iter.size());
    report.series.push_back(std::move(series));
  }

  // aggregate by iteration, carrying each instance's last value forward
  for (std::size_t i = 0; i < max_iters; ++i) {
    std::vector<double> column;
    for (const auto& s : report.series) {
      if (s.norm_error.empty()) continue;
      column.push_back(i < s.norm_error.size() ? s.norm_error[i] : s.norm_error.back());
    }
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= column.empty() ? 1 : column.size();
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    var /= column.empty() ? 1 : column.size();
    report.mean.push_back(mean);
    report.median.push_back(median_of(column));
    report.stddev.push_back(std::sqrt(var));
  }
  return report;
}

}  // namespace synth
