#include "synth/enumerate.hpp"

#include <algorithm>

#include "synth/rng.hpp"
#include "synth/typecheck.hpp"

namespace synth {

std::vector<EnumCandidate> candidate_table(const Dsl& dsl,
                                           const std::vector<TypeRef>& input_types) {
  std::vector<EnumCandidate> table;
  table.reserve(dsl.size() + input_types.size());
  for (std::size_t i = 0; i < dsl.size(); ++i) {
    table.push_back(EnumCandidate{Term::prim(dsl.at(i).name), dsl.at(i).type});
  }
  for (std::size_t i = 0; i < input_types.size(); ++i) {
    table.push_back(EnumCandidate{Term::input(static_cast<int>(i)), input_types[i]});
  }
  return table;
}

ProgramStream::ProgramStream(std::vector<EnumCandidate> table, TypeRef target, int d,
                             DepthMetric metric, Subst initial, int fresh)
    : table_(std::move(table)), metric_(metric) {
  if (d < 1) return;  // empty stream
  Frame root;
  root.term = Term::hole(target);
  root.holes.push_back(HoleInfo{Path{}, std::move(target), d});
  root.subst = std::move(initial);
  root.fresh = fresh;
  root.budget = d;
  root.cand = 0;
  root.k = 0;
  stack_.push_back(std::move(root));
}

std::optional<EnumResult> ProgramStream::next() {
  while (!stack_.empty()) {
    Frame& frame = stack_.back();
    const HoleInfo& hole = frame.holes.front();
    bool advanced = false;

    for (std::size_t ci = frame.cand; ci < table_.size() && !advanced; ++ci) {
      int fresh_try = frame.fresh;
      TypeRef cand_type = freshen(table_[ci].type, fresh_try);
      auto suffixes = arg_suffixes(cand_type);
      int k_start = (ci == frame.cand) ? frame.k : 0;
      for (int k = k_start; k < static_cast<int>(suffixes.size()) && !advanced; ++k) {
        // depth viability before attempting unification
        if (metric_ == DepthMetric::Tree) {
          if (k == 0 ? hole.budget < 1 : hole.budget < 2) continue;
        } else {
          int remaining = frame.budget - 1;
          int open = static_cast<int>(frame.holes.size()) - 1 + k;
          if (remaining < open) continue;
        }
        Subst subst = frame.subst;
        if (!unify_into(subst, subst.apply(hole.type), suffixes[k].second)) continue;

        // build the spine: candidate atom applied to k fresh holes
        TermPtr spine = table_[ci].atom;
        std::vector<HoleInfo> spine_holes;
        TypeRef walk = cand_type;
        for (int i = 0; i < k; ++i) {
          Path hp = hole.path;
          for (int j = 0; j < k - 1 - i; ++j) hp.push_back(0);
          hp.push_back(1);
          int child_budget =
              metric_ == DepthMetric::Tree ? hole.budget - 1 : frame.budget - 1;
          spine_holes.push_back(HoleInfo{std::move(hp), walk->param, child_budget});
          spine = Term::app(std::move(spine), Term::hole(walk->param));
          walk = walk->result;
        }

        Frame child;
        child.term = edit(frame.term, Location{hole.path}, {spine});
        child.holes = std::move(spine_holes);
        child.holes.insert(child.holes.end(), frame.holes.begin() + 1, frame.holes.end());
        child.subst = std::move(subst);
        child.fresh = fresh_try;
        child.budget = frame.budget - 1;
        child.cand = 0;
        child.k = 0;

        // move this frame's cursor past the candidate just taken
        frame.cand = ci;
        frame.k = k + 1;

        if (child.holes.empty()) {
          return EnumResult{std::move(child.term), std::move(child.subst), child.fresh};
        }
        stack_.push_back(std::move(child));
        advanced = true;
      }
      if (!advanced && ci == frame.cand) frame.k = 0;  // exhausted this candidate's ks
    }

    if (!advanced) stack_.pop_back();
  }
  return std::nullopt;
}

std::vector<TermPtr> enumerate_programs(const Dsl& dsl, const TypeRef& target, int d,
                                        const std::vector<TypeRef>& input_types,
                                        DepthMetric metric) {
  std::vector<TermPtr> out;
  for_each_program(dsl, target, d, input_types, metric, [&](const TermPtr& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

long count_programs(const Dsl& dsl, const TypeRef& target, int d,
                    const std::vector<TypeRef>& input_types, DepthMetric metric) {
  long n = 0;
  for_each_program(dsl, target, d, input_types, metric, [&](const TermPtr&) {
    ++n;
    return true;
  });
  return n;
}

void for_each_program(const Dsl& dsl, const TypeRef& target, int d,
                      const std::vector<TypeRef>& input_types, DepthMetric metric,
                      const std::function<bool(const TermPtr&)>& visit) {
  int fresh = max_var_id(target) + 1;
  ProgramStream stream(candidate_table(dsl, input_types), target, d, metric, Subst{},
                       fresh);
  while (auto r = stream.next()) {
    if (!visit(r->term)) return;
  }
}

std::vector<Outcome> observational_signature(const TermPtr& t,
                                             const std::vector<Obs>& probes,
                                             const Dsl& dsl) {
  std::vector<Outcome> sig;
  sig.reserve(probes.size());
  for (const Obs& obs : probes) {
    auto v = evaluate(t, dsl, obs);
    Outcome o;
    if (v && v->kind == Value::Kind::F) {
      o.kind = Outcome::Kind::F;
      o.f = v->f;
    } else if (v && v->kind == Value::Kind::B) {
      o.kind = Outcome::Kind::B;
      o.b = v->b;
    } else {
      o.kind = Outcome::Kind::Nonfinite;
    }
    sig.push_back(o);
  }
  return sig;
}

bool has_equivalent_within_depth(const TermPtr& t, const Dsl& dsl, int d,
                                 const std::vector<Obs>& probes,
                                 const std::vector<TypeRef>& input_types,
                                 DepthMetric metric) {
  TypeRef ty = infer(t, dsl, input_types);
  std::vector<Outcome> target_sig = observational_signature(t, probes, dsl);
  bool found = false;
  for_each_program(dsl, ty, d, input_types, metric, [&](const TermPtr& c) {
    if (observational_signature(c, probes, dsl) == target_sig) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<Obs> make_probes(int count, int arity, double lo, double hi,
                             std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x9e3779b9ULL, 0x70726f62ULL));
  std::vector<Obs> probes(count);
  for (auto& obs : probes) {
    obs.resize(arity);
    for (double& v : obs) v = rng.uniform(lo, hi);
  }
  return probes;
}

}  // namespace synth
