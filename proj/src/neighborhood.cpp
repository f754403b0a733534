#include "synth/neighborhood.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_set>

#include "synth/parallel.hpp"
#include "synth/typecheck.hpp"

namespace synth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<TypeRef> float_inputs(int arity) {
  return std::vector<TypeRef>(static_cast<std::size_t>(arity), type_float());
}

}  // namespace

NeighborhoodStream::NeighborhoodStream(const Dsl& dsl, TermPtr subject,
                                       Location location, int d, DepthMetric metric,
                                       const std::vector<TypeRef>& input_types)
    : subject_(std::move(subject)),
      location_(std::move(location)),
      depth_(d),
      metric_(metric) {
  slot_types_ = type_at(subject_, location_, dsl, input_types);
  std::vector<EnumCandidate> base = candidate_table(dsl, input_types);
  fresh0_ = 0;
  for (const TypeRef& ty : slot_types_) fresh0_ = std::max(fresh0_, max_var_id(ty) + 1);
  for (std::size_t i = 0; i < location_.paths.size(); ++i) {
    TermPtr reused = expr_at(subject_, location_.paths[i]);
    TypeRef reused_ty = infer(reused, dsl, input_types);
    std::vector<EnumCandidate> table = base;
    // the edited expression joins the DSL for its own slot only
    table.push_back(EnumCandidate{std::move(reused), std::move(reused_ty)});
    tables_.push_back(std::move(table));
  }
  streams_.resize(tables_.size());
  current_.resize(tables_.size());
}

bool NeighborhoodStream::open_slot(std::size_t i) {
  Subst subst = i == 0 ? Subst{} : current_[i - 1].subst;
  int fresh = i == 0 ? fresh0_ : current_[i - 1].fresh;
  streams_[i].emplace(tables_[i], slot_types_[i], depth_, metric_, std::move(subst),
                      fresh);
  return true;
}

std::optional<TermPtr> NeighborhoodStream::next() {
  if (done_) return std::nullopt;
  const long n = static_cast<long>(tables_.size());
  long k;  // slot whose stream produces the next value
  if (!primed_) {
    primed_ = true;
    open_slot(0);
    k = 0;
  } else {
    k = n - 1;
  }
  while (true) {
    if (k < 0) {
      done_ = true;
      return std::nullopt;
    }
    if (auto r = streams_[k]->next()) {
      current_[k] = std::move(*r);
      long j = k + 1;
      for (; j < n; ++j) {
        open_slot(j);
        auto rj = streams_[j]->next();
        if (!rj) break;
        current_[j] = std::move(*rj);
      }
      if (j == n) break;  // full tuple ready
      k = j;              // slot j empty under this context; retries then cascades back
    } else {
      --k;
    }
  }
  std::vector<TermPtr> replacements;
  replacements.reserve(current_.size());
  for (const auto& r : current_) replacements.push_back(r.term);
  return edit(subject_, location_, replacements);
}

std::vector<TermPtr> neighborhood_at(const Dsl& dsl, const TermPtr& subject,
                                     const Location& location, int d,
                                     const std::vector<TypeRef>& input_types,
                                     DepthMetric metric) {
  NeighborhoodStream stream(dsl, subject, location, d, metric, input_types);
  std::vector<TermPtr> out;
  while (auto t = stream.next()) out.push_back(std::move(*t));
  return out;
}

void for_each_neighbor(const Dsl& dsl, const TermPtr& subject, const SearchConfig& cfg,
                       const std::vector<TypeRef>& input_types,
                       const std::function<bool(const TermPtr&)>& visit) {
  for (const Location& loc : locations(subject, cfg.max_edits)) {
    NeighborhoodStream stream(dsl, subject, loc, cfg.depth, cfg.metric, input_types);
    while (auto t = stream.next()) {
      if (!visit(*t)) return;
    }
  }
}

double candidate_loss(const TermPtr& t, const Dataset& data, const Dsl& dsl,
                      LossKind kind) {
  return kind == LossKind::ImitationMse ? imitation_loss(t, data, dsl)
                                        : pbe_error(t, data, dsl);
}

namespace {

// Loss with early bailout: once the running sum alone exceeds bound, the true
// loss must too, so the candidate cannot win. Equal losses are never pruned,
// which keeps tie-breaking independent of scheduling.
double bounded_loss(const TermPtr& t, const Dataset& data, const Dsl& dsl,
                    LossKind kind, double bound) {
  if (data.rows.empty()) return 0.0;
  const double n = static_cast<double>(data.rows.size());
  double sum = 0.0;
  for (const auto& row : data.rows) {
    auto v = evaluate(t, dsl, row.obs);
    if (kind == LossKind::ImitationMse) {
      if (!v || v->kind != Value::Kind::F) return kInf;
      double d = v->f - row.action;
      sum += d * d;
      if (sum / n > bound) return kInf;
    } else {
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
      if (sum > bound) return kInf;
    }
    if (!std::isfinite(sum)) return kInf;
  }
  return kind == LossKind::ImitationMse ? sum / n : sum;
}

struct Best {
  double loss = kInf;
  int tokens = 0;
  long index = -1;
  TermPtr term;

  bool better_than(const Best& o) const {
    if (o.index < 0) return index >= 0;
    if (index < 0) return false;
    if (loss != o.loss) return loss < o.loss;
    if (tokens != o.tokens) return tokens < o.tokens;
    return index < o.index;
  }
};

// Batches candidates, scores them in parallel, and reduces to the
// lexicographic minimum of (loss, tokens, stream index). The reduction order
// is fixed by the stream index, so the winner does not depend on jobs.
class CandidateScorer {
public:
  CandidateScorer(const Dataset& data, const Dsl& dsl, LossKind loss, int jobs)
      : data_(data), dsl_(dsl), loss_(loss), jobs_(jobs), results_(kBatch) {}

  void offer(const TermPtr& t) {
    batch_.push_back(t);
    if (batch_.size() == kBatch) flush();
  }

  Best finish() {
    if (!batch_.empty()) flush();
    return best_;
  }

  long scored() const { return scored_; }

private:
  static constexpr std::size_t kBatch = 2048;

  void flush() {
    std::size_t count = batch_.size();
    parallel_for(count, jobs_, [&](std::size_t i) {
      double bound = bound_.load(std::memory_order_relaxed);
      double loss = bounded_loss(batch_[i], data_, dsl_, loss_, bound);
      results_[i].loss = loss;
      results_[i].tokens = token_count(batch_[i]);
      results_[i].term = batch_[i];
      double cur = bound;
      while (loss < cur &&
             !bound_.compare_exchange_weak(cur, loss, std::memory_order_relaxed)) {
      }
    });
    for (std::size_t i = 0; i < count; ++i) {
      results_[i].index = scored_++;
      if (results_[i].better_than(best_)) best_ = results_[i];
    }
    batch_.clear();
  }

  const Dataset& data_;
  const Dsl& dsl_;
  LossKind loss_;
  int jobs_;
  std::vector<TermPtr> batch_;
  std::vector<Best> results_;
  Best best_;
  long scored_ = 0;
  std::atomic<double> bound_{kInf};
};

struct SignatureKey {
  std::vector<Outcome> sig;
  bool operator<(const SignatureKey& o) const {
    if (sig.size() != o.sig.size()) return sig.size() < o.sig.size();
    for (std::size_t i = 0; i < sig.size(); ++i) {
      const Outcome& a = sig[i];
      const Outcome& b = o.sig[i];
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.kind == Outcome::Kind::F && a.f != b.f) return a.f < b.f;
      if (a.kind == Outcome::Kind::B && a.b != b.b) return a.b < b.b;
    }
    return false;
  }
};

}  // namespace

std::pair<TermPtr, double> local_search_step(const Dsl& dsl, const TermPtr& subject,
                                             const Dataset& data, const SearchConfig& cfg,
                                             long* evaluated) {
  std::vector<TypeRef> input_types = float_inputs(data.arity());
  std::vector<Obs> probes;
  if (cfg.dedup_signatures) {
    probes = make_probes(cfg.probe_count, data.arity(), cfg.probe_lo, cfg.probe_hi,
                         cfg.probe_seed);
  }

  std::unordered_set<std::string> seen;
  std::map<SignatureKey, bool> seen_sigs;
  CandidateScorer scorer(data, dsl, cfg.loss, cfg.jobs);

  for_each_neighbor(dsl, subject, cfg, input_types, [&](const TermPtr& t) {
    if (!seen.insert(print_program(t)).second) return true;
    if (cfg.dedup_signatures) {
      SignatureKey sk{observational_signature(t, probes, dsl)};
      if (!seen_sigs.emplace(std::move(sk), true).second) return true;
    }
    scorer.offer(t);
    return true;
  });

  Best best = scorer.finish();
  if (evaluated) *evaluated = scorer.scored();
  if (best.index < 0) {
    // cannot happen: the identity edit reconstructs the subject
    return {subject, candidate_loss(subject, data, dsl, cfg.loss)};
  }
  return {best.term, best.loss};
}

SearchTrace iterate_search(const Dsl& dsl, TermPtr initial, const Dataset& data,
                           const SearchConfig& cfg) {
  using clock = std::chrono::steady_clock;
  SearchTrace trace;
  std::vector<TypeRef> input_types = float_inputs(data.arity());
  TypeRef target = cfg.target ? cfg.target : type_float();

  TermPtr current = initial;
  double current_loss = initial ? candidate_loss(initial, data, dsl, cfg.loss) : kInf;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    auto t0 = clock::now();
    TermPtr best;
    double best_loss = kInf;
    long scored = 0;

    if (!current) {
      // empty initial program: iteration 0 is a plain depth-d enumeration
      CandidateScorer scorer(data, dsl, cfg.loss, cfg.jobs);
      for_each_program(dsl, target, cfg.depth, input_types, cfg.metric,
                       [&](const TermPtr& t) {
                         scorer.offer(t);
                         return true;
                       });
      Best reduced = scorer.finish();
      scored = scorer.scored();
      best = reduced.term;
      best_loss = reduced.loss;
    } else {
      auto [term, loss] = local_search_step(dsl, current, data, cfg, &scored);
      best = std::move(term);
      best_loss = loss;
    }

    double seconds = std::chrono::duration<double>(clock::now() - t0).count();
    trace.iterations.push_back(SearchIteration{iter, best, best_loss, scored, seconds});

    bool improved = best_loss < current_loss;
    if (best) current = best;
    current_loss = std::min(best_loss, current_loss);
    if (!improved) break;          // deterministic search cannot improve later
    if (current_loss == 0) break;  // exact fit
  }
  return trace;
}

}  // namespace synth
