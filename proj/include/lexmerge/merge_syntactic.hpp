#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"

namespace lexmerge {

// Bases are numbered from 1 in profile order everywhere in this module:
// in index sets, in the trace and in its serialized form.

// One processed pair that contributed successors during an iteration.
struct TracePair {
  std::vector<Formula> phi;                     // accumulated constraint, conjunction-read
  std::vector<std::size_t> remaining;           // bases still to merge
  Weight inc_s;                                 // min inconsistency over remaining
  std::vector<std::size_t> index_set;           // I: bases attaining the global Inc
  std::vector<std::vector<std::size_t>> mcs;    // maximal consistent index sets
  std::vector<std::vector<std::size_t>> cardm;  // cardinality-maximal members
  std::size_t maxcs = 0;
};

struct TraceIteration {
  Weight global_inc;
  std::vector<TracePair> pairs;      // pairs achieving maxc; others contribute nothing
  std::optional<std::size_t> maxc;   // absent only when no pair produced successors
};

struct FinalPair {
  std::vector<Formula> phi;
  std::vector<std::size_t> remaining;
};

struct MergeTrace {
  std::vector<std::string> base_names;  // display names, profile order
  std::vector<TraceIteration> iterations;
  std::vector<FinalPair> final_pairs;
  Formula result;
};

namespace detail {

// Shared model-set store for the many overlapping consistency checks one
// merge performs. Masks are cached per formula node up to 18 atoms; beyond
// that they are recomputed on demand to keep memory flat.
class ConsistencyContext {
 public:
  explicit ConsistencyContext(Vocabulary v, std::size_t atom_cap)
      : vocabulary_(std::move(v)), atom_cap_(atom_cap), cache_(vocabulary_.size() <= 18) {
    require_within_cap(vocabulary_, atom_cap_);
  }

  const Vocabulary& vocabulary() const { return vocabulary_; }

  ModelSet models_of(const Formula& f) {
    if (!cache_) return model_set(f, vocabulary_, atom_cap_);
    return cached(f);
  }

  void intersect(ModelSet& acc, const Formula& f) {
    if (cache_)
      acc &= cached(f);
    else
      acc &= model_set(f, vocabulary_, atom_cap_);
  }

  bool consistent(std::initializer_list<std::span<const Formula>> parts) {
    ModelSet acc(vocabulary_.size(), true);
    for (const auto& part : parts)
      for (const auto& f : part) {
        intersect(acc, f);
        if (acc.none()) return false;
      }
    return acc.any();
  }

 private:
  const ModelSet& cached(const Formula& f) {
    const auto it = memo_.find(f.node_id());
    if (it != memo_.end()) return it->second;
    return memo_.emplace(f.node_id(), model_set(f, vocabulary_, atom_cap_)).first->second;
  }

  Vocabulary vocabulary_;
  std::size_t atom_cap_;
  bool cache_;
  std::map<const void*, ModelSet> memo_;
};

// Inc(phi, B): descending scan over the weight levels of B extended with
// phi at weight 1; the first inconsistent cut is the answer.
inline Weight pair_base_inconsistency(ConsistencyContext& ctx,
                                      std::span<const Formula> phi,
                                      const PossibilisticKB& base) {
  std::vector<Weight> levels = base.distinct_weights_descending();
  if (levels.empty() || levels.front() < Weight(1))
    levels.insert(levels.begin(), Weight(1));
  for (const auto& level : levels) {
    const auto layer = cut(base, level);
    if (!ctx.consistent({phi, std::span<const Formula>(layer)})) return level;
  }
  return Weight(0);
}

inline std::vector<std::vector<std::size_t>> maximal_index_sets(
    ConsistencyContext& ctx, std::span<const std::size_t> index_set,
    std::span<const Formula> phi, const Weight& inc, const Profile& bases) {
  const std::size_t n = ctx.vocabulary().size();
  ModelSet phi_models(n, true);
  for (const auto& f : phi) ctx.intersect(phi_models, f);

  std::vector<ModelSet> cut_models;
  cut_models.reserve(index_set.size());
  for (const auto j : index_set) {
    ModelSet acc(n, true);
    for (const auto& f : cut(bases[j - 1], inc, /*strict=*/true)) ctx.intersect(acc, f);
    cut_models.push_back(std::move(acc));
  }

  const std::size_t m = index_set.size();
  if (m > 20) throw std::invalid_argument("index set too large for subset search");
  std::vector<std::uint32_t> order;
  order.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) order.push_back(mask);
  std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });

  // Descending cardinality with subsumption pruning: a consistent subset not
  // covered by an already accepted set is maximal.
  std::vector<std::uint32_t> accepted;
  for (const auto mask : order) {
    bool covered = false;
    for (const auto top : accepted)
      if ((mask & top) == mask) {
        covered = true;
        break;
      }
    if (covered) continue;
    ModelSet acc = phi_models;
    bool nonempty = acc.any();
    for (std::size_t i = 0; i < m && nonempty; ++i)
      if ((mask >> i) & 1u) {
        acc &= cut_models[i];
        nonempty = acc.any();
      }
    if (nonempty) accepted.push_back(mask);
  }

  std::vector<std::vector<std::size_t>> out;
  out.reserve(accepted.size());
  for (const auto mask : accepted) {
    std::vector<std::size_t> js;
    for (std::size_t i = 0; i < m; ++i)
      if ((mask >> i) & 1u) js.push_back(index_set[i]);
    out.push_back(std::move(js));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Formula> normalized_formula_set(std::vector<Formula> fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

inline std::vector<std::string> display_base_names(const Profile& e) {
  std::vector<std::string> names;
  names.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    names.push_back(e[i].name().empty() ? "B" + std::to_string(i + 1) : e[i].name());
  return names;
}

}  // namespace detail

// All subset-maximal J within `index_set` whose strict inc-cuts are jointly
// consistent with the formulas of phi. Deterministic: each set ascending,
// the family in lexicographic order.
inline std::vector<std::vector<std::size_t>> maximal_consistent_index_sets(
    std::span<const std::size_t> index_set, std::span<const Formula> phi,
    const Weight& inc, const Profile& bases, std::size_t atom_cap = kDefaultAtomCap) {
  std::set<std::string> names;
  for (const auto& f : phi) collect_atoms(f, names);
  for (const auto j : index_set)
    for (const auto& wf : bases[j - 1].formulas()) collect_atoms(wf.formula, names);
  detail::ConsistencyContext ctx(Vocabulary::sorted(names), atom_cap);
  return detail::maximal_index_sets(ctx, index_set, phi, inc, bases);
}

// Syntactic computation of the lexicographic merge. Repeatedly peels off
// the lowest-inconsistency layer: per surviving pair, the bases attaining
// the global inconsistency degree are combined through their cardinality-
// maximal jointly-consistent strict cuts, and only successors from pairs
// achieving the global maximum cardinality survive. The returned formula
// is the disjunction of the accumulated constraints; with no surviving pair
// (inconsistent constraint) it is falsum.
inline std::pair<Formula, MergeTrace> merge_syntactic(const Profile& e, const Formula& mu,
                                                      std::size_t atom_cap = kDefaultAtomCap) {
  detail::ConsistencyContext ctx(vocabulary_of(e, mu), atom_cap);

  struct WorkPair {
    std::vector<Formula> phi;
    std::vector<std::size_t> remaining;  // ascending, 1-based
  };

  std::vector<WorkPair> pairs;
  {
    std::vector<std::size_t> all(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) all[i] = i + 1;
    pairs.push_back({detail::normalized_formula_set({mu}), std::move(all)});
  }

  MergeTrace trace;
  trace.base_names = detail::display_base_names(e);

  while (std::any_of(pairs.begin(), pairs.end(),
                     [](const WorkPair& p) { return !p.remaining.empty(); })) {
    for (const auto& p : pairs)
      if (p.remaining.size() != pairs.front().remaining.size())
        throw std::logic_error("merge pairs depleted unevenly");

    // Inc(phi_S, B_j) for every pair and base, then the global minimum.
    struct Scored {
      const WorkPair* pair;
      std::vector<Weight> incs;  // parallel to pair->remaining
      Weight inc_s;
    };
    std::vector<Scored> scored;
    scored.reserve(pairs.size());
    std::optional<Weight> global_inc;
    for (const auto& p : pairs) {
      Scored s{&p, {}, Weight(1)};
      bool first = true;
      for (const auto j : p.remaining) {
        const Weight inc = detail::pair_base_inconsistency(ctx, p.phi, e[j - 1]);
        if (first || inc < s.inc_s) s.inc_s = inc;
        first = false;
        s.incs.push_back(inc);
      }
      if (!global_inc || s.inc_s < *global_inc) global_inc = s.inc_s;
      scored.push_back(std::move(s));
    }

    struct Processed {
      const WorkPair* pair;
      Weight inc_s;
      std::vector<std::size_t> index_set;
      std::vector<std::vector<std::size_t>> mcs;
      std::vector<std::vector<std::size_t>> cardm;
      std::size_t maxcs = 0;
      bool has_successors = false;
    };
    std::vector<Processed> processed;
    std::optional<std::size_t> maxc;
    for (const auto& s : scored) {
      if (s.inc_s != *global_inc) continue;
      Processed pr{s.pair, s.inc_s, {}, {}, {}, 0, false};
      for (std::size_t k = 0; k < s.pair->remaining.size(); ++k)
        if (s.incs[k] == *global_inc) pr.index_set.push_back(s.pair->remaining[k]);
      pr.mcs = detail::maximal_index_sets(ctx, pr.index_set, s.pair->phi, *global_inc, e);
      if (!pr.mcs.empty()) {
        pr.maxcs = 0;
        for (const auto& j : pr.mcs) pr.maxcs = std::max(pr.maxcs, j.size());
        for (const auto& j : pr.mcs)
          if (j.size() == pr.maxcs) pr.cardm.push_back(j);
        pr.has_successors = true;
        if (!maxc || pr.maxcs > *maxc) maxc = pr.maxcs;
      }
      processed.push_back(std::move(pr));
    }

    TraceIteration iteration{*global_inc, {}, maxc};
    std::vector<WorkPair> next;
    std::set<std::pair<std::vector<Formula>, std::vector<PossibilisticKB>>> seen;
    for (const auto& pr : processed) {
      if (!pr.has_successors || pr.maxcs != *maxc) continue;
      iteration.pairs.push_back(TracePair{pr.pair->phi, pr.pair->remaining, pr.inc_s,
                                          pr.index_set, pr.mcs, pr.cardm, pr.maxcs});
      for (const auto& chosen : pr.cardm) {
        std::vector<Formula> phi = pr.pair->phi;
        for (const auto j : chosen)
          for (auto& f : cut(e[j - 1], *global_inc, /*strict=*/true))
            phi.push_back(std::move(f));
        phi = detail::normalized_formula_set(std::move(phi));
        std::vector<std::size_t> remaining;
        for (const auto j : pr.pair->remaining)
          if (std::find(chosen.begin(), chosen.end(), j) == chosen.end())
            remaining.push_back(j);
        // Successors agreeing on both the formula set and the content of the
        // remaining sub-profile are one and the same pair.
        std::vector<PossibilisticKB> content;
        for (const auto j : remaining) content.push_back(e[j - 1]);
        std::sort(content.begin(), content.end());
        if (!seen.emplace(phi, std::move(content)).second) continue;
        next.push_back({std::move(phi), std::move(remaining)});
      }
    }
    trace.iterations.push_back(std::move(iteration));
    pairs = std::move(next);
  }

  std::vector<Formula> disjuncts;
  disjuncts.reserve(pairs.size());
  for (const auto& p : pairs) {
    trace.final_pairs.push_back({p.phi, p.remaining});
    disjuncts.push_back(conjunction_of(p.phi));
  }
  Formula result = disjunction_of(disjuncts);
  trace.result = result;
  return {std::move(result), std::move(trace)};
}

// The MERGE decision problem: does the merged base entail the query?
inline bool merged_entails(const Profile& e, const Formula& mu, const Formula& psi,
                           std::size_t atom_cap = kDefaultAtomCap) {
  const auto [merged, trace] = merge_syntactic(e, mu, atom_cap);
  std::set<std::string> names = atom_names(psi);
  collect_atoms(mu, names);
  for (const auto& b : e)
    for (const auto& wf : b.formulas()) collect_atoms(wf.formula, names);
  const Vocabulary v = Vocabulary::sorted(names);
  return entails({merged}, psi, v, atom_cap);
}

}  // namespace lexmerge
