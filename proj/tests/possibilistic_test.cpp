#include <doctest.h>

#include <optional>
#include <vector>

#include "fixtures.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"

using namespace lexmerge;
using fixtures::p;

namespace {

// Height oracle: the inconsistency degree equals one minus the best
// possibility any interpretation achieves under the base's distribution.
// Independent of the descending-scan implementation.
Weight inconsistency_by_height(const PossibilisticKB& b, const Vocabulary& v) {
  Weight best(0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << v.size()); ++code) {
    const Weight pi = possibility(b, Interpretation(v, code));
    if (best < pi) best = pi;
  }
  return Weight(1) - best;
}

// Consequence-degree oracle: test every distinct weight level directly
// against the three defining conditions, quantifying the "no higher level"
// clause over all levels plus the empty cut.
std::optional<Weight> pi_consequence_oracle(const PossibilisticKB& b, const Formula& f,
                                            const Vocabulary& v) {
  const auto levels = b.distinct_weights_descending();
  const auto cut_entails = [&](const Weight& a) {
    const auto layer = cut(b, a);
    return entails(std::span<const Formula>(layer), f, v);
  };
  for (const auto& a : levels) {
    const auto layer = cut(b, a);
    if (!is_consistent(std::span<const Formula>(layer), v)) continue;
    if (!cut_entails(a)) continue;
    bool higher_entails = false;
    for (const auto& bb : levels)
      if (a < bb && cut_entails(bb)) higher_entails = true;
    if (levels.front() < Weight(1) && entails(std::span<const Formula>(), f, v))
      higher_entails = true;  // the empty cut above the top weight
    if (!higher_entails) return a;
  }
  return std::nullopt;
}

PossibilisticKB random_kb(fixtures::TestRng& rng, const std::vector<Formula>& atoms,
                          int max_formulas) {
  PossibilisticKB b;
  const auto count = 1 + rng.below(max_formulas);
  for (std::uint64_t i = 0; i < count; ++i)
    b.insert(fixtures::random_formula(rng, atoms, 2),
             Weight(static_cast<long long>(1 + rng.below(10)), 10));
  return b;
}

}  // namespace

TEST_CASE("weighted formulas reject weights outside (0,1]") {
  CHECK_THROWS_AS(WeightedFormula(p(1), Weight(0)), std::invalid_argument);
  CHECK_THROWS_AS(WeightedFormula(p(1), Weight(11, 10)), std::invalid_argument);
  CHECK_NOTHROW(WeightedFormula(p(1), Weight(1)));
}

TEST_CASE("knowledge bases have set semantics") {
  PossibilisticKB b;
  b.insert(p(1), Weight(1, 2));
  b.insert(p(1), Weight(1, 2));  // exact duplicate collapses
  CHECK(b.size() == 1);
  b.insert(p(1), Weight(3, 4));  // same formula, new weight: kept
  CHECK(b.size() == 2);
  CHECK(b.classical_projection() == std::vector<Formula>{p(1)});
}

TEST_CASE("possibility distribution on the four-source scenario") {
  const Vocabulary v = fixtures::four_vars();
  const auto w0111 = Interpretation::from_bitstring(v, "0111");
  CHECK(possibility(fixtures::base1(), w0111) == Weight(2, 5));
  const auto w1111 = Interpretation::from_bitstring(v, "1111");
  CHECK(possibility(fixtures::base4(), w1111) == Weight(2, 5));
  CHECK(possibility(PossibilisticKB{}, w0111) == Weight(1));
}

TEST_CASE("possibility equals one exactly on full satisfaction") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(17);
  for (int i = 0; i < 60; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 4);
    for (std::uint64_t code = 0; code < 16; ++code) {
      const Interpretation w(v, code);
      bool all = true;
      for (const auto& wf : b.formulas()) all = all && evaluate(wf.formula, w);
      CHECK((possibility(b, w) == Weight(1)) == all);
    }
  }
}

TEST_CASE("adding formulas never raises possibility") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(23);
  for (int i = 0; i < 60; ++i) {
    const PossibilisticKB small = random_kb(rng, atoms, 3);
    PossibilisticKB big = small;
    big.insert(fixtures::random_formula(rng, atoms, 2),
               Weight(static_cast<long long>(1 + rng.below(10)), 10));
    for (std::uint64_t code = 0; code < 16; ++code) {
      const Interpretation w(v, code);
      CHECK(possibility(big, w) <= possibility(small, w));
    }
  }
}

TEST_CASE("possibility and necessity of formulas") {
  const Vocabulary v = fixtures::four_vars();
  CHECK(possibility_of(fixtures::base4(), p(1), v) == Weight(1));
  CHECK(necessity_of(PossibilisticKB{}, Formula::verum(), v) == Weight(1));
  CHECK(possibility_of(fixtures::base1(), Formula::falsum(), v) == Weight(0));
}

TEST_CASE("cuts") {
  const PossibilisticKB b4 = fixtures::base4();
  CHECK(cut(b4, Weight(6, 10), /*strict=*/true) == std::vector<Formula>{p(1), p(2)});
  const PossibilisticKB b1 = fixtures::base1();
  CHECK(cut(b1, Weight(0)) == b1.classical_projection());
  CHECK(cut(b1, Weight(1), /*strict=*/true).empty());
}

TEST_CASE("cut nesting") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(5);
  for (int i = 0; i < 40; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 5);
    const Weight lo(static_cast<long long>(1 + rng.below(5)), 10);
    const Weight hi = lo + Weight(static_cast<long long>(rng.below(5)), 10);
    const auto big = cut(b, lo);
    for (const auto& f : cut(b, hi))
      CHECK(std::find(big.begin(), big.end(), f) != big.end());
    for (const auto& f : cut(b, lo, /*strict=*/true))
      CHECK(std::find(big.begin(), big.end(), f) != big.end());
  }
}

TEST_CASE("inconsistency degree examples") {
  const Vocabulary v = fixtures::four_vars();
  PossibilisticKB b1_mu = fixtures::base1();
  b1_mu.insert((!p(1) | p(2)) & p(3), Weight(1));
  CHECK(inconsistency_degree(b1_mu, v) == Weight(0));

  CHECK(inconsistency_degree(fixtures::base2(), v) == Weight(0));

  PossibilisticKB clash;
  clash.insert(p(1), Weight(8, 10));
  clash.insert(!p(1), Weight(3, 10));
  CHECK(inconsistency_degree(clash) == Weight(3, 10));
}

TEST_CASE("inconsistency degree agrees with the height oracle") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(41);
  for (int i = 0; i < 80; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 5);
    CHECK(inconsistency_degree(b, v) == inconsistency_by_height(b, v));
  }
}

TEST_CASE("inconsistency degree is zero iff the projection is consistent") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(43);
  for (int i = 0; i < 60; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 5);
    const auto proj = b.classical_projection();
    CHECK((inconsistency_degree(b, v) == Weight(0)) ==
          is_consistent(std::span<const Formula>(proj), v));
    const auto survivors = cut(b, inconsistency_degree(b, v), /*strict=*/true);
    CHECK(is_consistent(std::span<const Formula>(survivors), v));
  }
}

TEST_CASE("inconsistency w.r.t. a formula: staged-merge values") {
  CHECK(inc_wrt(fixtures::four_source_constraint(), fixtures::base1()) == Weight(0));
  CHECK(inc_wrt(fixtures::four_source_constraint(), fixtures::base4()) == Weight(3, 5));
  CHECK(inc_wrt(p(1) & p(2) & p(3), fixtures::base2()) == Weight(3, 5));
  CHECK(inc_wrt(Formula::verum(), fixtures::base3()) == Weight(0));
}

TEST_CASE("consequence degrees") {
  const Formula q = Formula::atom("q");
  const Formula pp = Formula::atom("p");
  PossibilisticKB b;
  b.insert(pp, Weight(8, 10));
  b.insert(!pp | q, Weight(5, 10));
  CHECK(pi_consequence(b, q) == Weight(1, 2));

  PossibilisticKB single;
  single.insert(pp, Weight(8, 10));
  CHECK(pi_consequence(single, pp) == Weight(4, 5));
  CHECK_FALSE(pi_consequence(single, q).has_value());
}

TEST_CASE("consequence degrees agree with the level-scan oracle") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(59);
  for (int i = 0; i < 80; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 4);
    const Formula f = fixtures::random_formula(rng, atoms, 2);
    CHECK(pi_consequence(b, f) == pi_consequence_oracle(b, f, v));
  }
}

TEST_CASE("necessity above zero forces full possibility on consistent bases") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(61);
  for (int i = 0; i < 60; ++i) {
    const PossibilisticKB b = random_kb(rng, atoms, 3);
    const auto proj = b.classical_projection();
    if (!is_consistent(std::span<const Formula>(proj), v)) continue;
    const Formula f = fixtures::random_formula(rng, atoms, 2);
    if (Weight(0) < necessity_of(b, f, v)) CHECK(possibility_of(b, f, v) == Weight(1));
  }
}

TEST_CASE("cut-wise base equivalence") {
  PossibilisticKB b;
  b.insert(p(1) & p(2), Weight(1, 2));
  PossibilisticKB doubled;
  doubled.insert(!!(p(1) & p(2)), Weight(1, 2));
  CHECK(kb_equivalent_s(b, doubled));

  PossibilisticKB split;
  split.insert(p(1), Weight(1, 2));
  split.insert(p(2), Weight(1, 2));
  CHECK(kb_equivalent_s(b, split));

  PossibilisticKB b6;
  b6.insert(p(1), Weight(6, 10));
  PossibilisticKB b5;
  b5.insert(p(1), Weight(5, 10));
  CHECK_FALSE(kb_equivalent_s(b5, b6));
}

TEST_CASE("profile equivalence is a bijection check") {
  const Profile e = fixtures::four_source_profile();
  const Profile permuted = {fixtures::base3(), fixtures::base1(), fixtures::base4(),
                            fixtures::base2()};
  CHECK(profile_equivalent_s(e, permuted));
  CHECK_FALSE(profile_equivalent_s(e, Profile{fixtures::base1()}));
  CHECK_FALSE(profile_equivalent_s(Profile{fixtures::base1()},
                                   Profile{fixtures::base1(), fixtures::base1()}));

  PossibilisticKB doubled;
  doubled.insert(!!p(1), Weight(1, 2));
  PossibilisticKB plain;
  plain.insert(p(1), Weight(1, 2));
  CHECK(profile_equivalent_s({doubled}, {plain}));
}

TEST_CASE("profile inconsistency degree") {
  CHECK(inc_profile(fixtures::four_source_profile(), fixtures::four_source_constraint()) ==
        Weight(3, 5));
  CHECK(inc_profile(Profile{}, p(1)) == Weight(0));
  CHECK(inc_profile(Profile{fixtures::base1()}, Formula::verum()) == Weight(0));
}

TEST_CASE("profile inconsistency degree agrees with the pooled height oracle") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(73);
  for (int i = 0; i < 40; ++i) {
    Profile e;
    const auto n = rng.below(3);
    for (std::uint64_t k = 0; k < n; ++k) e.push_back(random_kb(rng, atoms, 3));
    const Formula mu = fixtures::random_formula(rng, atoms, 2);
    PossibilisticKB pooled;
    for (const auto& b : e)
      for (const auto& wf : b.formulas()) pooled.insert(wf);
    pooled.insert(mu, Weight(1));
    CHECK(inc_profile(e, mu) == inconsistency_by_height(pooled, v));
  }
}
