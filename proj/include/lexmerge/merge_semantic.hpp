#pragma once

#include <algorithm>
#include <compare>
#include <span>
#include <stdexcept>
#include <vector>

#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"

namespace lexmerge {

// Per-interpretation possibility degrees, one entry per base in profile
// order.
using DegreeVector = std::vector<Weight>;

inline DegreeVector degree_vector(const Profile& e, const Interpretation& w) {
  DegreeVector out;
  out.reserve(e.size());
  for (const auto& b : e) out.push_back(possibility(b, w));
  return out;
}

// Compares two equal-length vectors by sorting each in descending order and
// comparing positionally; entry order inside a vector is irrelevant.
inline std::strong_ordering lex_compare(const DegreeVector& a, const DegreeVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("lex_compare requires vectors of equal length");
  DegreeVector sa = a;
  DegreeVector sb = b;
  const auto desc = [](const Weight& x, const Weight& y) { return y < x; };
  std::sort(sa.begin(), sa.end(), desc);
  std::sort(sb.begin(), sb.end(), desc);
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (const auto c = sa[i] <=> sb[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// Models of the constraint whose degree vectors are maximal in the
// lexicographic order, in ascending bitstring order. Empty iff the
// constraint is inconsistent; with an empty profile all vectors tie and
// every model of the constraint is returned.
inline std::vector<Interpretation> merge_semantic(const Profile& e, const Formula& mu,
                                                  const Vocabulary& v,
                                                  std::size_t atom_cap = kDefaultAtomCap) {
  const ModelSet mu_models = model_set(mu, v, atom_cap);

  // Per formula: (models, weight), grouped by base, so each candidate costs
  // one bit probe per formula.
  struct MaskedFormula {
    ModelSet models;
    Weight weight;
  };
  std::vector<std::vector<MaskedFormula>> bases;
  bases.reserve(e.size());
  for (const auto& b : e) {
    std::vector<MaskedFormula> fs;
    fs.reserve(b.size());
    for (const auto& wf : b.formulas())
      fs.push_back({model_set(wf.formula, v, atom_cap), wf.weight});
    bases.push_back(std::move(fs));
  }

  std::vector<Interpretation> cohort;
  DegreeVector best;  // kept sorted descending
  bool have_best = false;

  DegreeVector current;
  mu_models.for_each_code([&](std::uint64_t code) {
    current.clear();
    for (const auto& fs : bases) {
      const Weight* worst = nullptr;
      for (const auto& mf : fs)
        if (!mf.models.test(code))
          if (worst == nullptr || *worst < mf.weight) worst = &mf.weight;
      current.push_back(worst == nullptr ? Weight(1) : Weight(1) - *worst);
    }
    std::sort(current.begin(), current.end(),
              [](const Weight& x, const Weight& y) { return y < x; });
    if (!have_best) {
      best = current;
      have_best = true;
      cohort.emplace_back(v, code);
      return;
    }
    const auto cmp = [&] {
      for (std::size_t i = 0; i < current.size(); ++i)
        if (const auto c = current[i] <=> best[i]; c != 0) return c;
      return std::strong_ordering::equal;
    }();
    if (cmp == std::strong_ordering::greater) {
      best = current;
      cohort.clear();
      cohort.emplace_back(v, code);
    } else if (cmp == std::strong_ordering::equal) {
      cohort.emplace_back(v, code);
    }
  });
  return cohort;
}

// Canonical disjunction of full conjunctions describing exactly the given
// model set; falsum for the empty set. Deterministic: disjuncts follow
// ascending bitstring order and literals follow vocabulary order.
inline Formula models_to_formula(std::span<const Interpretation> models,
                                 const Vocabulary& v) {
  std::vector<std::uint64_t> codes;
  codes.reserve(models.size());
  for (const auto& w : models) codes.push_back(w.code());
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

  std::vector<Formula> disjuncts;
  disjuncts.reserve(codes.size());
  for (const auto code : codes) {
    const Interpretation w(v, code);
    std::vector<Formula> literals;
    literals.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      Formula a = Formula::atom(v.name(i));
      literals.push_back(w.value(i) ? a : !a);
    }
    disjuncts.push_back(conjunction_of(literals));
  }
  return disjunction_of(disjuncts);
}

}  // namespace lexmerge
