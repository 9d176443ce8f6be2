#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/reductions.hpp"

using namespace lexmerge;
using fixtures::p;

namespace {

std::vector<std::string> bitstrings(const std::vector<Interpretation>& ms) {
  std::vector<std::string> out;
  for (const auto& w : ms) out.push_back(w.bitstring());
  return out;
}

ClassicalProfile random_classical(fixtures::TestRng& rng, const std::vector<Formula>& atoms,
                                  std::uint64_t max_bases) {
  ClassicalProfile e;
  const auto n = rng.below(max_bases + 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::vector<Formula> fs;
    const auto m = 1 + rng.below(3);
    for (std::uint64_t k = 0; k < m; ++k)
      fs.push_back(fixtures::random_formula(rng, atoms, 2));
    e.push_back(make_classical_base(std::move(fs)));
  }
  return e;
}

}  // namespace

TEST_CASE("weight-1 lifts") {
  const ClassicalBase k = make_classical_base({p(1), p(2), p(2)});
  const PossibilisticKB b = lift_classical(k);
  CHECK(b.size() == 2);
  for (const auto& wf : b.formulas()) CHECK(wf.weight == Weight(1));
  CHECK(lift_classical(ClassicalBase{}).empty());

  const PossibilisticKB conj = lift_conjunction(k);
  CHECK(conj.size() == 1);
  CHECK(equivalent(conj.formulas()[0].formula, p(1) & p(2), fixtures::four_vars()));
}

TEST_CASE("drastic distance") {
  const Vocabulary v = fixtures::four_vars();
  const ClassicalBase k = {p(1), p(2)};
  CHECK(drastic_distance(Interpretation::from_bitstring(v, "1100"), k) == 0);
  CHECK(drastic_distance(Interpretation::from_bitstring(v, "1000"), k) == 1);
  const ClassicalBase bad = {p(1), !p(1)};
  for (std::uint64_t code = 0; code < 16; ++code)
    CHECK(drastic_distance(Interpretation(v, code), bad) == 1);
}

TEST_CASE("drastic distance complements the lifted possibility") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(139);
  for (int i = 0; i < 60; ++i) {
    ClassicalBase k;
    const auto m = 1 + rng.below(3);
    for (std::uint64_t j = 0; j < m; ++j)
      k.push_back(fixtures::random_formula(rng, atoms, 2));
    k = make_classical_base(std::move(k));
    const PossibilisticKB lifted = lift_classical(k);
    for (std::uint64_t code = 0; code < 16; ++code) {
      const Interpretation w(v, code);
      CHECK(Weight(drastic_distance(w, k)) == Weight(1) - possibility(lifted, w));
    }
  }
}

TEST_CASE("distance-minimal merge on opposing singletons keeps both options") {
  const Vocabulary v = Vocabulary::ordered({"p"});
  const Formula pp = Formula::atom("p");
  const ClassicalProfile e = {{pp}, {!pp}};
  CHECK(bitstrings(merge_gmin(e, Formula::verum(), v)) ==
        std::vector<std::string>{"0", "1"});

  const ClassicalProfile single = {{pp}};
  CHECK(bitstrings(merge_gmin(single, Formula::verum(), v)) ==
        std::vector<std::string>{"1"});
}

TEST_CASE("cardinality-maximal sub-profiles") {
  const Vocabulary v = Vocabulary::ordered({"p"});
  const Formula pp = Formula::atom("p");
  const ClassicalProfile e = {{pp}, {!pp}};
  const auto fams = cardm_subprofiles(e, Formula::verum());
  CHECK(fams == std::vector<ClassicalProfile>{{{pp}}, {{!pp}}});

  const ClassicalProfile agreeing = {{pp}, {pp}};
  const auto all = cardm_subprofiles(agreeing, Formula::verum());
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 2);

  // No base survives a contradicting constraint: only the empty sub-profile.
  const auto none = cardm_subprofiles({{pp}}, !pp);
  CHECK(none == std::vector<ClassicalProfile>{{}});
}

TEST_CASE("cardinality-based combination") {
  const Vocabulary v = Vocabulary::ordered({"p"});
  const Formula pp = Formula::atom("p");
  CHECK(equivalent(merge_c4({{pp}, {!pp}}, Formula::verum()), Formula::verum(), v));
  CHECK(equivalent(merge_c4({{pp}, {pp}}, Formula::verum()), pp, v));
  CHECK(merge_c4({{pp}}, Formula::falsum()) == Formula::falsum());

  const ClassicalProfile jointly = {{p(1)}, {p(2)}};
  CHECK(equivalent(merge_c4(jointly, p(3)), p(1) & p(2) & p(3), fixtures::four_vars()));
}

TEST_CASE("profile splitting") {
  const Formula pp = Formula::atom("p");
  const Formula qq = Formula::atom("q");
  CHECK(split_profile({{pp, qq}}) == ClassicalProfile{{pp}, {qq}});
  CHECK(split_profile({{pp}, {pp}}) == ClassicalProfile{{pp}});
  CHECK(split_profile({}).empty());
}

TEST_CASE("distance merge equals the lifted lexicographic merge") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(149);
  for (int i = 0; i < 60; ++i) {
    const ClassicalProfile e = random_classical(rng, atoms, 4);
    const Formula mu = fixtures::random_formula(rng, atoms, 2);
    CHECK(bitstrings(merge_gmin(e, mu, v)) ==
          bitstrings(merge_semantic(lift_classical(e), mu, v)));
  }
}

TEST_CASE("combination equals the lexicographic merge of whole-base lifts") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(151);
  for (int i = 0; i < 60; ++i) {
    const ClassicalProfile e = random_classical(rng, atoms, 4);
    const Formula mu = fixtures::random_formula(rng, atoms, 2);
    const Formula combined = merge_c4(e, mu);
    const Formula merged = models_to_formula(merge_semantic(lift_conjunction(e), mu, v), v);
    CHECK(equivalent(combined, merged, v));
  }
}

TEST_CASE("duplicate whole bases still match the combination") {
  const Vocabulary v = Vocabulary::ordered({"p"});
  const Formula pp = Formula::atom("p");
  const ClassicalProfile e = {{pp}, {pp}, {!pp}};
  const Formula combined = merge_c4(e, Formula::verum());
  const Formula merged =
      models_to_formula(merge_semantic(lift_conjunction(e), Formula::verum(), v), v);
  CHECK(equivalent(combined, merged, v));
  CHECK(equivalent(combined, pp, v));
}

TEST_CASE("splitting encodes the formula-level combination") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(157);
  for (int i = 0; i < 60; ++i) {
    const ClassicalProfile e = random_classical(rng, atoms, 3);
    const Formula mu = fixtures::random_formula(rng, atoms, 2);
    const ClassicalProfile split = split_profile(e);
    const Formula via_lex = models_to_formula(merge_semantic(lift_classical(split), mu, v), v);
    const Formula via_c4 = merge_c4(split, mu);
    CHECK(equivalent(via_lex, via_c4, v));
  }
}
