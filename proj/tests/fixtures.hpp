#pragma once

#include "lexmerge/formula.hpp"
#include "lexmerge/interpretation.hpp"
#include "lexmerge/possibilistic.hpp"
#include "lexmerge/rational.hpp"

// The four-source merging scenario used as a golden case across the suite:
// see samples/example.lm for the same data in file form.
namespace fixtures {

using lexmerge::Formula;
using lexmerge::PossibilisticKB;
using lexmerge::Profile;
using lexmerge::Vocabulary;
using lexmerge::Weight;

inline Formula p(int i) { return Formula::atom("p" + std::to_string(i)); }

inline Vocabulary four_vars() {
  return Vocabulary::ordered({"p1", "p2", "p3", "p4"});
}

inline PossibilisticKB base1() {
  return PossibilisticKB("B1", {{p(1) | p(2), Weight(9, 10)},
                                {p(3), Weight(9, 10)},
                                {p(1), Weight(6, 10)},
                                {p(2), Weight(6, 10)}});
}

inline PossibilisticKB base2() {
  return PossibilisticKB("B2", {{p(3) | p(4), Weight(9, 10)},
                                {!p(1), Weight(6, 10)},
                                {p(2), Weight(6, 10)}});
}

inline PossibilisticKB base3() {
  return PossibilisticKB("B3", {{p(3), Weight(9, 10)}, {p(2), Weight(6, 10)}});
}

inline PossibilisticKB base4() {
  return PossibilisticKB("B4", {{p(1), Weight(9, 10)},
                                {p(2), Weight(8, 10)},
                                {!p(3), Weight(6, 10)}});
}

inline Profile four_source_profile() { return {base1(), base2(), base3(), base4()}; }

inline Formula four_source_constraint() { return (!p(1) | p(2)) & p(3); }

// Two-source scenario where low-weight formulas would drown under graded
// inference but survive the lexicographic merge.
inline Profile drowning_profile() {
  return {PossibilisticKB("B1", {{!p(2), Weight(8, 10)}, {p(4), Weight(6, 10)}}),
          PossibilisticKB("B2", {{p(2), Weight(9, 10)},
                                 {p(1), Weight(8, 10)},
                                 {p(3), Weight(6, 10)}})};
}

inline Formula drowning_constraint() { return p(1) | p(2); }

// Test-local deterministic generator, kept separate from the library's own
// instance generator so property tests do not lean on the code they check.
struct TestRng {
  std::uint64_t state;

  explicit TestRng(std::uint64_t seed) : state(seed * 2654435761u + 1) {}

  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
  bool coin() { return next() & 1u; }
};

inline Formula random_formula(TestRng& rng, const std::vector<Formula>& atoms, int depth) {
  const auto r = rng.below(10);
  if (depth <= 0 || r < 4) {
    Formula a = atoms[rng.below(atoms.size())];
    return rng.coin() ? a : !a;
  }
  Formula lhs = random_formula(rng, atoms, depth - 1);
  if (r < 5) return !std::move(lhs);
  Formula rhs = random_formula(rng, atoms, depth - 1);
  if (r < 7) return std::move(lhs) & std::move(rhs);
  if (r < 9) return std::move(lhs) | std::move(rhs);
  return rng.coin() ? implies(std::move(lhs), std::move(rhs))
                    : iff(std::move(lhs), std::move(rhs));
}

inline std::vector<Formula> atom_pool(const Vocabulary& v) {
  std::vector<Formula> out;
  for (const auto& name : v.names()) out.push_back(Formula::atom(name));
  return out;
}

}  // namespace fixtures
