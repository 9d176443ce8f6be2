#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexmerge/formula.hpp"
#include "lexmerge/interpretation.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/rational.hpp"

namespace lexmerge {

// A formula together with a lower bound on its necessity degree. Weights
// are confined to (0,1].
struct WeightedFormula {
  Formula formula;
  Weight weight;

  WeightedFormula(Formula f, Weight w) : formula(std::move(f)), weight(std::move(w)) {
    if (weight <= Weight(0) || Weight(1) < weight)
      throw std::invalid_argument("formula weight must lie in (0,1], got " + weight.str());
  }

  friend bool operator==(const WeightedFormula& a, const WeightedFormula& b) {
    return a.formula == b.formula && a.weight == b.weight;
  }
  friend std::strong_ordering operator<=>(const WeightedFormula& a,
                                          const WeightedFormula& b) {
    if (const auto c = a.formula <=> b.formula; c != 0) return c;
    return a.weight <=> b.weight;
  }
};

// Finite set of weighted formulas. Exact (formula, weight) duplicates
// collapse; the same formula may occur under several distinct weights.
class PossibilisticKB {
 public:
  PossibilisticKB() = default;
  explicit PossibilisticKB(std::string name) : name_(std::move(name)) {}
  PossibilisticKB(std::string name, std::initializer_list<WeightedFormula> fs)
      : name_(std::move(name)) {
    for (const auto& wf : fs) insert(wf);
  }
  PossibilisticKB(std::initializer_list<WeightedFormula> fs) {
    for (const auto& wf : fs) insert(wf);
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  void insert(WeightedFormula wf) {
    const auto it = std::lower_bound(formulas_.begin(), formulas_.end(), wf);
    if (it != formulas_.end() && *it == wf) return;
    formulas_.insert(it, std::move(wf));
  }
  void insert(Formula f, Weight w) { insert(WeightedFormula(std::move(f), std::move(w))); }

  std::span<const WeightedFormula> formulas() const { return formulas_; }
  bool empty() const { return formulas_.empty(); }
  std::size_t size() const { return formulas_.size(); }

  // B*: the classical projection, deduplicated.
  std::vector<Formula> classical_projection() const {
    std::vector<Formula> out;
    out.reserve(formulas_.size());
    for (const auto& wf : formulas_) out.push_back(wf.formula);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<Weight> distinct_weights_descending() const {
    std::vector<Weight> out;
    for (const auto& wf : formulas_) out.push_back(wf.weight);
    std::sort(out.begin(), out.end(), [](const Weight& a, const Weight& b) { return b < a; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Names are labels, not identity: equality is over the formula set.
  friend bool operator==(const PossibilisticKB& a, const PossibilisticKB& b) {
    return a.formulas_ == b.formulas_;
  }
  friend std::strong_ordering operator<=>(const PossibilisticKB& a,
                                          const PossibilisticKB& b) {
    return a.formulas_ <=> b.formulas_;
  }

 private:
  std::string name_;
  std::vector<WeightedFormula> formulas_;  // sorted, unique
};

// Ordered multiset of knowledge bases; profile union is concatenation.
using Profile = std::vector<PossibilisticKB>;

inline std::set<std::string> atom_names(const PossibilisticKB& b) {
  std::set<std::string> out;
  for (const auto& wf : b.formulas()) collect_atoms(wf.formula, out);
  return out;
}

inline Vocabulary vocabulary_of(const Profile& e, const Formula& mu) {
  std::set<std::string> names = atom_names(mu);
  for (const auto& b : e)
    for (const auto& wf : b.formulas()) collect_atoms(wf.formula, names);
  return Vocabulary::sorted(names);
}

inline Vocabulary vocabulary_of(const PossibilisticKB& b, const Formula& mu) {
  return vocabulary_of(Profile{b}, mu);
}

// The a-cut (or strict a-cut): classical formulas whose weight is >= a
// (resp. > a). Deduplicated, deterministic order.
inline std::vector<Formula> cut(const PossibilisticKB& b, const Weight& a,
                                bool strict = false) {
  std::vector<Formula> out;
  for (const auto& wf : b.formulas())
    if (strict ? a < wf.weight : a <= wf.weight) out.push_back(wf.formula);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Possibility degree of an interpretation under the least specific
// distribution compatible with B: 1 when every formula is satisfied,
// otherwise the complement of the strongest violated weight.
inline Weight possibility(const PossibilisticKB& b, const Interpretation& w) {
  std::optional<Weight> worst;
  for (const auto& wf : b.formulas())
    if (!evaluate(wf.formula, w))
      if (!worst || *worst < wf.weight) worst = wf.weight;
  if (!worst) return Weight(1);
  return Weight(1) - *worst;
}

// Possibility degree of a formula: the best possibility among its models
// (0 when it has none).
inline Weight possibility_of(const PossibilisticKB& b, const Formula& f,
                             const Vocabulary& v, std::size_t atom_cap = kDefaultAtomCap) {
  Weight best(0);
  for (const auto& w : enumerate_models(f, v, atom_cap)) {
    const Weight p = possibility(b, w);
    if (best < p) best = p;
    if (best == Weight(1)) break;
  }
  return best;
}

inline Weight necessity_of(const PossibilisticKB& b, const Formula& f,
                           const Vocabulary& v, std::size_t atom_cap = kDefaultAtomCap) {
  return Weight(1) - possibility_of(b, !f, v, atom_cap);
}

// Largest weight whose cut is classically inconsistent; 0 for a consistent
// base. Distinct weights are scanned in descending order, stopping at the
// first inconsistent cut.
inline Weight inconsistency_degree(const PossibilisticKB& b, const Vocabulary& v,
                                   std::size_t atom_cap = kDefaultAtomCap) {
  for (const auto& a : b.distinct_weights_descending())
    if (!is_consistent(std::span<const Formula>(cut(b, a)), v, atom_cap)) return a;
  return Weight(0);
}

inline Weight inconsistency_degree(const PossibilisticKB& b,
                                   std::size_t atom_cap = kDefaultAtomCap) {
  return inconsistency_degree(b, vocabulary_of(b, Formula::verum()), atom_cap);
}

// Inc(f, B): inconsistency degree of B extended with f at full certainty.
inline Weight inc_wrt(const Formula& f, const PossibilisticKB& b,
                      std::size_t atom_cap = kDefaultAtomCap) {
  PossibilisticKB extended = b;
  extended.insert(f, Weight(1));
  return inconsistency_degree(extended, vocabulary_of(extended, Formula::verum()), atom_cap);
}

// Consequence degree per the cut characterization: the largest weight a of
// B whose cut is consistent and entails f while no strictly higher cut
// does. Absent when no weight of B qualifies.
inline std::optional<Weight> pi_consequence(const PossibilisticKB& b, const Formula& f,
                                            std::size_t atom_cap = kDefaultAtomCap) {
  const Vocabulary v = vocabulary_of(b, f);
  const auto weights = b.distinct_weights_descending();
  // Above the top weight every cut is empty, so a tautological f is
  // entailed there and disqualifies all lower levels.
  if ((weights.empty() || weights.front() < Weight(1)) &&
      entails(std::span<const Formula>(), f, v, atom_cap))
    return std::nullopt;
  for (const auto& a : weights) {
    const auto layer = cut(b, a);
    if (entails(std::span<const Formula>(layer), f, v, atom_cap)) {
      if (is_consistent(std::span<const Formula>(layer), v, atom_cap)) return a;
      return std::nullopt;  // entailment is vacuous from here on down
    }
  }
  return std::nullopt;
}

// Cut-wise equivalence: every a-cut of B is classically equivalent to the
// a-cut of B'. Cuts only change at weights occurring in either base.
inline bool kb_equivalent_s(const PossibilisticKB& b1, const PossibilisticKB& b2,
                            std::size_t atom_cap = kDefaultAtomCap) {
  std::set<std::string> names = atom_names(b1);
  for (const auto& n : atom_names(b2)) names.insert(n);
  const Vocabulary v = Vocabulary::sorted(names);

  std::vector<Weight> levels = b1.distinct_weights_descending();
  for (const auto& a : b2.distinct_weights_descending()) levels.push_back(a);
  for (const auto& a : levels) {
    const Formula f1 = conjunction_of(cut(b1, a));
    const Formula f2 = conjunction_of(cut(b2, a));
    if (!equivalent(f1, f2, v, atom_cap)) return false;
  }
  return true;
}

namespace detail {

inline bool match_bases(const std::vector<std::vector<bool>>& compatible,
                        std::vector<bool>& used, std::size_t row) {
  const std::size_t n = used.size();
  if (row == n) return true;
  for (std::size_t col = 0; col < n; ++col) {
    if (used[col] || !compatible[row][col]) continue;
    used[col] = true;
    if (match_bases(compatible, used, row + 1)) return true;
    used[col] = false;
  }
  return false;
}

}  // namespace detail

// Profile equivalence: a bijection matching each base with a cut-wise
// equivalent one. Profiles are small, so backtracking search suffices.
inline bool profile_equivalent_s(const Profile& e1, const Profile& e2,
                                 std::size_t atom_cap = kDefaultAtomCap) {
  if (e1.size() != e2.size()) return false;
  const std::size_t n = e1.size();
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      compatible[i][j] = kb_equivalent_s(e1[i], e2[j], atom_cap);
  std::vector<bool> used(n, false);
  return detail::match_bases(compatible, used, 0);
}

// Inconsistency degree of a profile against a constraint: Inc of the union
// of all bases plus the constraint at full certainty.
inline Weight inc_profile(const Profile& e, const Formula& mu,
                          std::size_t atom_cap = kDefaultAtomCap) {
  PossibilisticKB merged;
  for (const auto& b : e)
    for (const auto& wf : b.formulas()) merged.insert(wf);
  merged.insert(mu, Weight(1));
  return inconsistency_degree(merged, vocabulary_of(merged, mu), atom_cap);
}

}  // namespace lexmerge
