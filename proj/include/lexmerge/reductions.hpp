#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"

namespace lexmerge {

// Classical knowledge base: a set of formulas read conjunctively.
using ClassicalBase = std::vector<Formula>;
// Ordered multiset of classical bases.
using ClassicalProfile = std::vector<ClassicalBase>;

inline ClassicalBase make_classical_base(std::vector<Formula> fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

inline Vocabulary vocabulary_of(const ClassicalProfile& e, const Formula& mu) {
  std::set<std::string> names = atom_names(mu);
  for (const auto& k : e)
    for (const auto& f : k) collect_atoms(f, names);
  return Vocabulary::sorted(names);
}

// Weight-1 lift, formula by formula.
inline PossibilisticKB lift_classical(const ClassicalBase& k) {
  PossibilisticKB b;
  for (const auto& f : k) b.insert(f, Weight(1));
  return b;
}

// Weight-1 lift of the base read as a single formula.
inline PossibilisticKB lift_conjunction(const ClassicalBase& k) {
  PossibilisticKB b;
  b.insert(conjunction_of(k), Weight(1));
  return b;
}

inline Profile lift_classical(const ClassicalProfile& e) {
  Profile out;
  out.reserve(e.size());
  for (const auto& k : e) out.push_back(lift_classical(k));
  return out;
}

inline Profile lift_conjunction(const ClassicalProfile& e) {
  Profile out;
  out.reserve(e.size());
  for (const auto& k : e) out.push_back(lift_conjunction(k));
  return out;
}

// Drastic distance lifted to bases: 0 iff the interpretation satisfies the
// base, 1 otherwise (in particular 1 everywhere for an inconsistent base).
inline int drastic_distance(const Interpretation& w, const ClassicalBase& k) {
  for (const auto& f : k)
    if (!evaluate(f, w)) return 1;
  return 0;
}

// Models of the constraint minimal in the lexicographic order on the
// ascending-sorted per-base drastic distance lists. Ties are kept.
inline std::vector<Interpretation> merge_gmin(const ClassicalProfile& e, const Formula& mu,
                                              const Vocabulary& v,
                                              std::size_t atom_cap = kDefaultAtomCap) {
  std::vector<Interpretation> cohort;
  std::vector<int> best;
  std::vector<int> current;
  for (const auto& w : enumerate_models(mu, v, atom_cap)) {
    current.clear();
    for (const auto& k : e) current.push_back(drastic_distance(w, k));
    std::sort(current.begin(), current.end());
    if (cohort.empty() || current < best) {
      best = current;
      cohort.clear();
      cohort.push_back(w);
    } else if (current == best) {
      cohort.push_back(w);
    }
  }
  return cohort;
}

// CardM(E, mu): sub-multisets of E of maximum cardinality whose conjunction
// is consistent with mu. Sub-profiles are canonicalized (bases sorted) and
// deduplicated by content; the family is empty only when mu itself is
// inconsistent.
inline std::vector<ClassicalProfile> cardm_subprofiles(const ClassicalProfile& e,
                                                       const Formula& mu,
                                                       std::size_t atom_cap = kDefaultAtomCap) {
  const Vocabulary v = vocabulary_of(e, mu);
  const std::size_t n = e.size();
  if (n > 20) throw std::invalid_argument("profile too large for subset search");

  const auto subset_consistent = [&](std::uint64_t mask) {
    std::vector<Formula> fs{mu};
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u)
        for (const auto& f : e[i]) fs.push_back(f);
    return is_consistent(std::span<const Formula>(fs), v, atom_cap);
  };

  std::vector<std::uint64_t> winners;
  std::size_t best = 0;
  bool any = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    if (any && size < best) continue;
    if (!subset_consistent(mask)) continue;
    if (!any || size > best) {
      winners.clear();
      best = size;
      any = true;
    }
    winners.push_back(mask);
  }

  std::vector<ClassicalProfile> out;
  for (const auto mask : winners) {
    ClassicalProfile sub;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) sub.push_back(e[i]);
    std::sort(sub.begin(), sub.end());
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Disjunction over CardM(E, mu) of (conjunction of the chosen bases, and
// mu). Falsum when mu is inconsistent; the whole profile conjoined with mu
// when everything is jointly consistent.
inline Formula merge_c4(const ClassicalProfile& e, const Formula& mu,
                        std::size_t atom_cap = kDefaultAtomCap) {
  std::vector<Formula> disjuncts;
  for (const auto& sub : cardm_subprofiles(e, mu, atom_cap)) {
    Formula acc = mu;
    for (const auto& k : sub) acc = acc & conjunction_of(k);
    disjuncts.push_back(std::move(acc));
  }
  return disjunction_of(disjuncts);
}

// Splits every base into singleton bases and drops duplicate singletons,
// keeping first occurrences.
inline ClassicalProfile split_profile(const ClassicalProfile& e) {
  ClassicalProfile out;
  std::set<Formula> seen;
  for (const auto& k : e)
    for (const auto& f : k)
      if (seen.insert(f).second) out.push_back(ClassicalBase{f});
  return out;
}

}  // namespace lexmerge
