#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/merge_syntactic.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"

namespace lexmerge {

// ---------------------------------------------------------------------------
// Auxiliary notions: priority degree, conflict sets, equal prioritization.
// ---------------------------------------------------------------------------

// Priority level of the least certain formula shared (as an exact
// formula/weight pair) between `sub` and `base`; 1 when nothing is shared.
inline Weight priority_degree(const PossibilisticKB& sub, const PossibilisticKB& base) {
  std::optional<Weight> least;
  for (const auto& wf : sub.formulas()) {
    const auto bs = base.formulas();
    if (!std::binary_search(bs.begin(), bs.end(), wf)) continue;
    if (!least || wf.weight < *least) least = wf.weight;
  }
  return least ? *least : Weight(1);
}

inline PossibilisticKB kb_union(const PossibilisticKB& b1, const PossibilisticKB& b2) {
  PossibilisticKB out = b1;
  for (const auto& wf : b2.formulas()) out.insert(wf);
  return out;
}

// Minimal subsets of B1 ∪ B2 whose classical projection is inconsistent
// with mu: exhaustive ascending-cardinality search with superset pruning.
// The returned family is an antichain in deterministic order.
inline std::vector<PossibilisticKB> conflict_sets(const PossibilisticKB& b1,
                                                  const PossibilisticKB& b2,
                                                  const Formula& mu,
                                                  std::size_t atom_cap = kDefaultAtomCap) {
  const PossibilisticKB pool = kb_union(b1, b2);
  const auto entries = pool.formulas();
  const std::size_t n = entries.size();
  if (n > 20) throw std::invalid_argument("conflict_sets: base union too large");
  const Vocabulary v = vocabulary_of(pool, mu);

  const auto inconsistent = [&](std::uint32_t mask) {
    std::vector<Formula> fs{mu};
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) fs.push_back(entries[i].formula);
    return !is_consistent(std::span<const Formula>(fs), v, atom_cap);
  };

  std::vector<std::uint32_t> order;
  order.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) order.push_back(mask);
  std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  std::vector<std::uint32_t> minimal;
  for (const auto mask : order) {
    bool covered = false;
    for (const auto m : minimal)
      if ((m & mask) == m) {
        covered = true;
        break;
      }
    if (covered) continue;
    if (inconsistent(mask)) minimal.push_back(mask);
  }

  std::vector<PossibilisticKB> out;
  out.reserve(minimal.size());
  for (const auto mask : minimal) {
    PossibilisticKB c;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) c.insert(entries[i]);
    out.push_back(std::move(c));
  }
  return out;
}

// Two bases are equally prioritized w.r.t. mu when every conflict set of
// their union carries the same least-certain shared weight on each side.
inline bool equally_prioritized(const PossibilisticKB& b1, const PossibilisticKB& b2,
                                const Formula& mu, std::size_t atom_cap = kDefaultAtomCap) {
  for (const auto& c : conflict_sets(b1, b2, mu, atom_cap))
    if (priority_degree(c, b1) != priority_degree(c, b2)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Postulate identifiers, instances, verdicts.
// ---------------------------------------------------------------------------

enum class PostulateId {
  P1, P2, P3, P4, P5, P6, P7, P8, P9, P10,
  IC0, IC1, IC2, IC3, IC4, IC5, IC6, IC7, IC8,
};

inline const std::vector<PostulateId>& all_p_postulates() {
  static const std::vector<PostulateId> ids = {
      PostulateId::P1, PostulateId::P2, PostulateId::P3, PostulateId::P4,
      PostulateId::P5, PostulateId::P6, PostulateId::P7, PostulateId::P8,
      PostulateId::P9, PostulateId::P10};
  return ids;
}

inline const std::vector<PostulateId>& all_ic_postulates() {
  static const std::vector<PostulateId> ids = {
      PostulateId::IC0, PostulateId::IC1, PostulateId::IC2, PostulateId::IC3,
      PostulateId::IC4, PostulateId::IC5, PostulateId::IC6, PostulateId::IC7,
      PostulateId::IC8};
  return ids;
}

inline bool is_ic_postulate(PostulateId id) { return id >= PostulateId::IC0; }

inline std::string postulate_name(PostulateId id) {
  switch (id) {
    case PostulateId::P1: return "P1";
    case PostulateId::P2: return "P2";
    case PostulateId::P3: return "P3";
    case PostulateId::P4: return "P4";
    case PostulateId::P5: return "P5";
    case PostulateId::P6: return "P6";
    case PostulateId::P7: return "P7";
    case PostulateId::P8: return "P8";
    case PostulateId::P9: return "P9";
    case PostulateId::P10: return "P10";
    case PostulateId::IC0: return "IC0";
    case PostulateId::IC1: return "IC1";
    case PostulateId::IC2: return "IC2";
    case PostulateId::IC3: return "IC3";
    case PostulateId::IC4: return "IC4";
    case PostulateId::IC5: return "IC5";
    case PostulateId::IC6: return "IC6";
    case PostulateId::IC7: return "IC7";
    case PostulateId::IC8: return "IC8";
  }
  return "?";
}

inline std::optional<PostulateId> parse_postulate_name(std::string_view name) {
  for (const auto id : all_p_postulates())
    if (postulate_name(id) == name) return id;
  for (const auto id : all_ic_postulates())
    if (postulate_name(id) == name) return id;
  return std::nullopt;
}

// Everything a postulate may quantify over. Single-profile postulates read
// e1/mu; P5-P6 add e2; P7-P8 add mu2; P4 (and IC3) use the equivalence
// rewrites, which the generator guarantees and the checker re-verifies.
struct PostulateInstance {
  Vocabulary vocabulary;
  Profile e1;
  Profile e2;
  Formula mu;
  Formula mu2;
  Profile e1_equiv;
  Formula mu_equiv;
  std::string label;
};

enum class Outcome { Pass, Fail, NotApplicable };

struct PostulateVerdict {
  PostulateId id;
  Outcome outcome;
  std::string description;
  std::string counterexample;  // set when outcome == Fail
};

inline std::string render_kb(const PossibilisticKB& b) {
  std::string out = "kb " + (b.name().empty() ? std::string("B") : b.name()) + " {";
  bool first = true;
  for (const auto& wf : b.formulas()) {
    out += first ? " " : "; ";
    out += to_string(wf.formula) + " : " + wf.weight.str();
    first = false;
  }
  out += " }";
  return out;
}

inline std::string render_instance(const PostulateInstance& inst) {
  std::string out;
  for (const auto& b : inst.e1) out += render_kb(b) + "\n";
  out += "constraint " + to_string(inst.mu) + "\n";
  if (!inst.e2.empty()) {
    out += "-- second profile --\n";
    for (const auto& b : inst.e2) out += render_kb(b) + "\n";
  }
  out += "-- second constraint: " + to_string(inst.mu2) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Checkers.
// ---------------------------------------------------------------------------

namespace detail {

// Merge through the syntactic algorithm, cross-checked against the
// model-theoretic route on every call.
inline Formula merged_formula_checked(const Profile& e, const Formula& mu,
                                      const Vocabulary& v, std::size_t atom_cap) {
  auto [syntactic, trace] = merge_syntactic(e, mu, atom_cap);
  const auto models = merge_semantic(e, mu, v, atom_cap);
  if (!equivalent(syntactic, models_to_formula(models, v), v, atom_cap))
    throw std::logic_error("syntactic and semantic merge results disagree on: " +
                           to_string(mu));
  return syntactic;
}

inline std::vector<Formula> profile_projection(const Profile& e) {
  std::vector<Formula> out;
  for (const auto& b : e)
    for (const auto& f : b.classical_projection()) out.push_back(f);
  return out;
}

inline Profile concat(const Profile& a, const Profile& b) {
  Profile out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline bool all_weights_one(const Profile& e) {
  for (const auto& b : e)
    for (const auto& wf : b.formulas())
      if (wf.weight != Weight(1)) return false;
  return true;
}

}  // namespace detail

inline PostulateVerdict check_postulate(PostulateId id, const PostulateInstance& inst,
                                        std::size_t atom_cap = kDefaultAtomCap) {
  const Vocabulary& v = inst.vocabulary;
  const auto verdict = [&](Outcome o, std::string note) {
    PostulateVerdict pv{id, o, inst.label + (note.empty() ? "" : " [" + note + "]"), ""};
    if (o == Outcome::Fail) pv.counterexample = render_instance(inst);
    return pv;
  };
  const auto merged = [&](const Profile& e, const Formula& mu) {
    return detail::merged_formula_checked(e, mu, v, atom_cap);
  };

  // The IC postulates are the classical readings: they apply to weight-1
  // profiles and otherwise coincide with their possibilistic counterparts,
  // except IC4 which needs the bases themselves.
  if (is_ic_postulate(id) && id != PostulateId::IC4) {
    if (!detail::all_weights_one(inst.e1) || !detail::all_weights_one(inst.e2) ||
        !detail::all_weights_one(inst.e1_equiv))
      return verdict(Outcome::NotApplicable, "not a weight-1 profile");
  }

  switch (id) {
    case PostulateId::P1:
    case PostulateId::IC0: {
      const Formula f = merged(inst.e1, inst.mu);
      return verdict(entails({f}, inst.mu, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P2:
    case PostulateId::IC1: {
      if (!is_consistent({inst.mu}, v, atom_cap))
        return verdict(Outcome::NotApplicable, "constraint inconsistent");
      const Formula f = merged(inst.e1, inst.mu);
      return verdict(is_consistent({f}, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P3:
    case PostulateId::IC2: {
      std::vector<Formula> all = detail::profile_projection(inst.e1);
      all.push_back(inst.mu);
      if (!is_consistent(std::span<const Formula>(all), v, atom_cap))
        return verdict(Outcome::NotApplicable, "profile conflicts with constraint");
      const Formula f = merged(inst.e1, inst.mu);
      const Formula expected = conjunction_of(all);
      return verdict(equivalent(f, expected, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P4:
    case PostulateId::IC3: {
      if (!profile_equivalent_s(inst.e1, inst.e1_equiv, atom_cap) ||
          !equivalent(inst.mu, inst.mu_equiv, v, atom_cap))
        return verdict(Outcome::NotApplicable, "rewrite is not equivalence-preserving");
      const Formula f1 = merged(inst.e1, inst.mu);
      const Formula f2 = merged(inst.e1_equiv, inst.mu_equiv);
      return verdict(equivalent(f1, f2, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P5:
    case PostulateId::IC5: {
      const Formula f1 = merged(inst.e1, inst.mu);
      const Formula f2 = merged(inst.e2, inst.mu);
      const Formula f12 = merged(detail::concat(inst.e1, inst.e2), inst.mu);
      return verdict(entails({f1, f2}, f12, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P6:
    case PostulateId::IC6: {
      const Formula f1 = merged(inst.e1, inst.mu);
      const Formula f2 = merged(inst.e2, inst.mu);
      if (!is_consistent({f1, f2}, v, atom_cap))
        return verdict(Outcome::NotApplicable, "subgroup merges conflict");
      const Formula f12 = merged(detail::concat(inst.e1, inst.e2), inst.mu);
      return verdict(entails({f12}, f1 & f2, v, atom_cap) ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P7:
    case PostulateId::IC7: {
      const Formula f1 = merged(inst.e1, inst.mu);
      const Formula f12 = merged(inst.e1, inst.mu & inst.mu2);
      return verdict(entails({f1, inst.mu2}, f12, v, atom_cap) ? Outcome::Pass : Outcome::Fail,
                     "");
    }

    case PostulateId::P8:
    case PostulateId::IC8: {
      const Formula f1 = merged(inst.e1, inst.mu);
      if (!is_consistent({f1, inst.mu2}, v, atom_cap))
        return verdict(Outcome::NotApplicable, "restriction conflicts with merge");
      const Formula f12 = merged(inst.e1, inst.mu & inst.mu2);
      return verdict(entails({f12}, f1 & inst.mu2, v, atom_cap) ? Outcome::Pass : Outcome::Fail,
                     "");
    }

    case PostulateId::P9: {
      if (inst.e1.size() < 2)
        return verdict(Outcome::NotApplicable, "needs two bases");
      const PossibilisticKB& b1 = inst.e1[0];
      const PossibilisticKB& b2 = inst.e1[1];
      const auto proj1 = b1.classical_projection();
      const auto proj2 = b2.classical_projection();
      if (!is_consistent(std::span<const Formula>(proj1), v, atom_cap) ||
          !is_consistent(std::span<const Formula>(proj2), v, atom_cap))
        return verdict(Outcome::NotApplicable, "base inconsistent");
      const auto d1 = pi_consequence(b1, inst.mu, atom_cap);
      const auto d2 = pi_consequence(b2, inst.mu, atom_cap);
      if (!d1 || !d2 || !(*d1 == *d2))
        return verdict(Outcome::NotApplicable, "constraint not entailed at equal degrees");
      if (!equally_prioritized(b1, b2, inst.mu, atom_cap))
        return verdict(Outcome::NotApplicable, "bases not equally prioritized");
      const Formula f = merged({b1, b2}, inst.mu);
      std::vector<Formula> with1{f};
      for (const auto& g : proj1) with1.push_back(g);
      std::vector<Formula> with2{f};
      for (const auto& g : proj2) with2.push_back(g);
      const bool c1 = is_consistent(std::span<const Formula>(with1), v, atom_cap);
      const bool c2 = is_consistent(std::span<const Formula>(with2), v, atom_cap);
      return verdict(c1 == c2 ? Outcome::Pass : Outcome::Fail, "");
    }

    case PostulateId::P10: {
      const Formula f = merged(inst.e1, inst.mu);
      const Weight inc = inc_profile(inst.e1, inst.mu, atom_cap);
      for (const auto& b : inst.e1)
        for (const auto& wf : b.formulas())
          if (inc < wf.weight && !entails({f}, wf.formula, v, atom_cap))
            return verdict(Outcome::Fail, "drops " + to_string(wf.formula));
      return verdict(Outcome::Pass, "");
    }

    case PostulateId::IC4: {
      if (inst.e1.size() < 2) return verdict(Outcome::NotApplicable, "needs two bases");
      const Profile pair{inst.e1[0], inst.e1[1]};
      if (!detail::all_weights_one(pair))
        return verdict(Outcome::NotApplicable, "not a weight-1 profile");
      const Formula k1 = conjunction_of(inst.e1[0].classical_projection());
      const Formula k2 = conjunction_of(inst.e1[1].classical_projection());
      if (!entails({k1}, inst.mu, v, atom_cap) || !entails({k2}, inst.mu, v, atom_cap))
        return verdict(Outcome::NotApplicable, "bases do not entail the constraint");
      const Formula f = merged(pair, inst.mu);
      const bool c1 = is_consistent({f, k1}, v, atom_cap);
      const bool c2 = is_consistent({f, k2}, v, atom_cap);
      return verdict(c1 == c2 ? Outcome::Pass : Outcome::Fail, "");
    }
  }
  return verdict(Outcome::NotApplicable, "unknown postulate");
}

// ---------------------------------------------------------------------------
// Seeded instance generation.
// ---------------------------------------------------------------------------

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::size_t atom_count = 4;
  std::size_t base_count = 3;
  std::size_t formulas_per_base_min = 1;
  std::size_t formulas_per_base_max = 4;
  std::size_t constraint_depth = 2;
  unsigned mu_consistent_percent = 85;
  std::vector<Weight> weight_grid;  // empty means tenths

  std::vector<Weight> grid() const {
    if (!weight_grid.empty()) return weight_grid;
    std::vector<Weight> g;
    for (long long i = 1; i <= 10; ++i) g.emplace_back(i, 10);
    return g;
  }

  void validate() const {
    if (atom_count == 0 || atom_count > kHardAtomLimit)
      throw std::invalid_argument("atom_count out of range");
    if (formulas_per_base_min == 0 || formulas_per_base_max < formulas_per_base_min)
      throw std::invalid_argument("formulas-per-base range invalid");
    for (const auto& w : grid())
      if (w <= Weight(0) || Weight(1) < w)
        throw std::invalid_argument("weight grid must lie in (0,1]");
  }
};

namespace detail {

// Deterministic across platforms; the standard engines are too, but their
// distributions are not, so all draws go through this.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 rng(seed ^ (trial * 0x9E3779B97F4A7C15ull) ^ 0xA5A5A5A5A5A5A5A5ull);
  return rng.next();
}

inline Formula random_formula(SplitMix64& rng, std::span<const Formula> atoms,
                              std::size_t depth) {
  const std::uint64_t r = rng.below(100);
  if (depth == 0 || r < 40) {
    Formula a = atoms[rng.below(atoms.size())];
    return rng.chance(50) ? a : !a;
  }
  if (r < 55) return !random_formula(rng, atoms, depth - 1);
  Formula lhs = random_formula(rng, atoms, depth - 1);
  Formula rhs = random_formula(rng, atoms, depth - 1);
  if (r < 75) return lhs & rhs;
  if (r < 90) return lhs | rhs;
  if (r < 96) return implies(std::move(lhs), std::move(rhs));
  return iff(std::move(lhs), std::move(rhs));
}

inline PossibilisticKB random_consistent_base(SplitMix64& rng, const GeneratorParams& params,
                                              std::span<const Formula> atoms,
                                              const Vocabulary& v, std::string name,
                                              std::size_t atom_cap) {
  const auto grid = params.grid();
  const std::size_t span =
      params.formulas_per_base_max - params.formulas_per_base_min + 1;
  for (int attempt = 0; attempt < 40; ++attempt) {
    PossibilisticKB b(name);
    const std::size_t count = params.formulas_per_base_min + rng.below(span);
    for (std::size_t i = 0; i < count; ++i)
      b.insert(random_formula(rng, atoms, params.constraint_depth),
               grid[rng.below(grid.size())]);
    const auto proj = b.classical_projection();
    if (is_consistent(std::span<const Formula>(proj), v, atom_cap)) return b;
  }
  PossibilisticKB fallback(std::move(name));
  fallback.insert(atoms[rng.below(atoms.size())], grid[rng.below(grid.size())]);
  return fallback;
}

inline Formula random_constraint(SplitMix64& rng, const GeneratorParams& params,
                                 std::span<const Formula> atoms, const Vocabulary& v,
                                 std::size_t atom_cap) {
  if (rng.chance(params.mu_consistent_percent)) {
    for (int attempt = 0; attempt < 40; ++attempt) {
      Formula mu = random_formula(rng, atoms, params.constraint_depth);
      if (is_consistent({mu}, v, atom_cap)) return mu;
    }
    return atoms[rng.below(atoms.size())];
  }
  return random_formula(rng, atoms, params.constraint_depth);
}

inline std::vector<Formula> atom_formulas(const Vocabulary& v) {
  std::vector<Formula> out;
  out.reserve(v.size());
  for (const auto& name : v.names()) out.push_back(Formula::atom(name));
  return out;
}

inline Vocabulary generator_vocabulary(const GeneratorParams& params) {
  std::vector<std::string> names;
  names.reserve(params.atom_count);
  for (std::size_t i = 1; i <= params.atom_count; ++i)
    names.push_back("p" + std::to_string(i));
  return Vocabulary::ordered(std::move(names));
}

}  // namespace detail

// Deterministic instance: exactly params.base_count individually consistent
// bases plus a constraint drawn with the configured consistency bias.
inline std::pair<Profile, Formula> generate_instance(const GeneratorParams& params,
                                                     std::size_t atom_cap = kDefaultAtomCap) {
  params.validate();
  detail::SplitMix64 rng(detail::mix_seed(params.seed, 0x5eedu));
  const Vocabulary v = detail::generator_vocabulary(params);
  const auto atoms = detail::atom_formulas(v);
  Profile e;
  for (std::size_t i = 0; i < params.base_count; ++i)
    e.push_back(detail::random_consistent_base(rng, params, atoms, v,
                                               "B" + std::to_string(i + 1), atom_cap));
  Formula mu = detail::random_constraint(rng, params, atoms, v, atom_cap);
  return {std::move(e), std::move(mu)};
}

namespace detail {

// Layer-preserving rewrite: each formula is kept, double-negated,
// self-conjoined, or (for conjunctions) split across two entries at the same
// weight; the base order is permuted afterwards. Every variant leaves all
// cuts classically equivalent.
inline PossibilisticKB equivalent_rewrite(SplitMix64& rng, const PossibilisticKB& b) {
  PossibilisticKB out(b.name().empty() ? std::string() : b.name() + "_eq");
  for (const auto& wf : b.formulas()) {
    switch (rng.below(4)) {
      case 0:
        out.insert(wf);
        break;
      case 1:
        out.insert(!!wf.formula, wf.weight);
        break;
      case 2:
        out.insert(wf.formula & wf.formula, wf.weight);
        break;
      default:
        if (wf.formula.kind() == Formula::Kind::And) {
          out.insert(wf.formula.lhs(), wf.weight);
          out.insert(wf.formula.rhs(), wf.weight);
        } else {
          out.insert(wf);
        }
    }
  }
  return out;
}

inline Profile equivalent_rewrite(SplitMix64& rng, const Profile& e) {
  Profile out;
  out.reserve(e.size());
  for (const auto& b : e) out.push_back(equivalent_rewrite(rng, b));
  for (std::size_t i = out.size(); i > 1; --i)
    std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

}  // namespace detail

// One fully-populated checker instance per (params.seed, trial). Trials are
// shaped so that the conditional postulates fire often enough: some reuse
// the first profile as the second, some aim the constraint at the bases
// (P3/P9/IC4 style), the rest are free draws.
inline PostulateInstance make_postulate_instance(const GeneratorParams& params,
                                                 std::uint64_t trial, bool classical = false,
                                                 std::size_t atom_cap = kDefaultAtomCap) {
  params.validate();
  detail::SplitMix64 rng(detail::mix_seed(params.seed, trial));
  const Vocabulary v = detail::generator_vocabulary(params);
  const auto atoms = detail::atom_formulas(v);

  GeneratorParams local = params;
  if (classical) {
    local.formulas_per_base_min = 1;
    local.formulas_per_base_max = 1;
    local.weight_grid = {Weight(1)};
  }

  const auto draw_profile = [&](std::size_t count, const char* prefix) {
    Profile e;
    for (std::size_t i = 0; i < count; ++i)
      e.push_back(detail::random_consistent_base(rng, local, atoms, v,
                                                 prefix + std::to_string(i + 1), atom_cap));
    return e;
  };

  PostulateInstance inst;
  inst.vocabulary = v;
  const std::uint64_t shape = trial % 10;
  inst.label = "seed=" + std::to_string(params.seed) + " trial=" + std::to_string(trial);

  const std::size_t base_span = local.base_count + 1;
  if (shape == 7 && !classical) {
    // Aimed at P9: identical bases entail any of their own formulas at the
    // same degree and are trivially equally prioritized.
    PossibilisticKB b1 =
        detail::random_consistent_base(rng, local, atoms, v, "B1", atom_cap);
    PossibilisticKB b2 = b1;
    b2.set_name("B2");
    const auto fs = b1.formulas();
    inst.mu = fs.empty() ? atoms[0] : fs[rng.below(fs.size())].formula;
    inst.e1 = {std::move(b1), std::move(b2)};
    inst.e2 = draw_profile(1 + rng.below(std::max<std::size_t>(local.base_count, 1)), "C");
  } else if (shape == 3) {
    inst.e1 = draw_profile(rng.below(base_span), "B");
    inst.e2 = inst.e1;  // guarantees agreeing subgroups for P6/IC6
    inst.mu = detail::random_constraint(rng, local, atoms, v, atom_cap);
  } else if (shape == 5) {
    inst.e1 = draw_profile(std::max<std::size_t>(1, rng.below(base_span)), "B");
    const Formula head = conjunction_of(inst.e1.front().classical_projection());
    const Formula tail = conjunction_of(inst.e1.back().classical_projection());
    inst.mu = head | tail;  // entailed by whole bases: P3- and IC4-friendly
    inst.e2 = draw_profile(rng.below(base_span), "C");
  } else if (shape == 1 && !classical) {
    // One source with nothing to say, slotted at a random position.
    inst.e1 = draw_profile(std::max<std::size_t>(1, rng.below(base_span)), "B");
    inst.e1.insert(inst.e1.begin() + rng.below(inst.e1.size() + 1),
                   PossibilisticKB("B0"));
    inst.e2 = draw_profile(rng.below(base_span), "C");
    inst.mu = detail::random_constraint(rng, local, atoms, v, atom_cap);
  } else {
    inst.e1 = draw_profile(rng.below(base_span), "B");
    inst.e2 = draw_profile(rng.below(base_span), "C");
    inst.mu = detail::random_constraint(rng, local, atoms, v, atom_cap);
  }

  // A weak-ish second constraint keeps P8/IC8 applicable reasonably often.
  if (rng.chance(60)) {
    Formula a = detail::random_formula(rng, atoms, 0);
    Formula b = detail::random_formula(rng, atoms, 0);
    inst.mu2 = std::move(a) | std::move(b);
  } else {
    inst.mu2 = detail::random_constraint(rng, local, atoms, v, atom_cap);
  }

  inst.e1_equiv = detail::equivalent_rewrite(rng, inst.e1);
  inst.mu_equiv = rng.chance(50) ? !!inst.mu : inst.mu & inst.mu;
  return inst;
}

// ---------------------------------------------------------------------------
// Suite runner.
// ---------------------------------------------------------------------------

struct SuiteOptions {
  GeneratorParams params;
  std::size_t trials = 1000;
  std::vector<PostulateId> ids;  // empty: all of P1..P10
  std::size_t atom_cap = kDefaultAtomCap;
  std::size_t max_failures = 8;  // stop collecting counterexamples beyond this
};

struct IdStats {
  std::size_t applicable = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t not_applicable = 0;
};

struct SuiteResult {
  std::map<PostulateId, IdStats> stats;
  std::vector<PostulateVerdict> failures;

  bool all_passed() const {
    for (const auto& [id, s] : stats)
      if (s.failed != 0) return false;
    return true;
  }
};

inline SuiteResult run_postulate_suite(const SuiteOptions& options) {
  std::vector<PostulateId> ids = options.ids;
  if (ids.empty()) ids = all_p_postulates();
  const bool wants_p = std::any_of(ids.begin(), ids.end(),
                                   [](PostulateId id) { return !is_ic_postulate(id); });
  const bool wants_ic = std::any_of(ids.begin(), ids.end(),
                                    [](PostulateId id) { return is_ic_postulate(id); });

  SuiteResult result;
  for (const auto id : ids) result.stats[id];

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    std::optional<PostulateInstance> p_inst;
    std::optional<PostulateInstance> ic_inst;
    if (wants_p)
      p_inst = make_postulate_instance(options.params, trial, /*classical=*/false,
                                       options.atom_cap);
    if (wants_ic)
      ic_inst = make_postulate_instance(options.params, trial, /*classical=*/true,
                                        options.atom_cap);
    for (const auto id : ids) {
      const PostulateInstance& inst = is_ic_postulate(id) ? *ic_inst : *p_inst;
      const PostulateVerdict verdict = check_postulate(id, inst, options.atom_cap);
      auto& s = result.stats[id];
      switch (verdict.outcome) {
        case Outcome::Pass:
          ++s.applicable;
          ++s.passed;
          break;
        case Outcome::Fail:
          ++s.applicable;
          ++s.failed;
          if (result.failures.size() < options.max_failures)
            result.failures.push_back(verdict);
          break;
        case Outcome::NotApplicable:
          ++s.not_applicable;
          break;
      }
    }
  }
  return result;
}

}  // namespace lexmerge
