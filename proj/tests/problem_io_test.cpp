#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/merge_syntactic.hpp"
#include "lexmerge/problem_io.hpp"

using namespace lexmerge;
using fixtures::p;

namespace {

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(LEXMERGE_SAMPLES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("parsing the bundled four-source sample") {
  const ProblemFile problem = parse_problem(read_sample("example.lm"));
  CHECK(problem.profile.size() == 4);
  CHECK(problem.profile[0].name() == "B1");
  CHECK(problem.profile[0].size() == 4);
  CHECK(problem.explicit_vocabulary);
  CHECK(problem.vocabulary.names().size() == 4);
  CHECK(problem.vocabulary.name(0) == "p1");
  CHECK(problem.constraint == fixtures::four_source_constraint());
  CHECK(problem.profile == fixtures::four_source_profile());
}

TEST_CASE("minimal problems default sensibly") {
  const ProblemFile problem = parse_problem("kb B {}\nconstraint true");
  CHECK(problem.profile.size() == 1);
  CHECK(problem.profile[0].empty());
  CHECK(problem.constraint == Formula::verum());
  CHECK(problem.vocabulary.empty());
  CHECK_FALSE(problem.explicit_vocabulary);

  const ProblemFile no_constraint = parse_problem("kb B { p : 1 }");
  CHECK(no_constraint.constraint == Formula::verum());
  CHECK(no_constraint.vocabulary.names().size() == 1);
}

TEST_CASE("weights parse exactly") {
  const ProblemFile problem = parse_problem("kb B { p : 0.95 }");
  CHECK(problem.profile[0].formulas()[0].weight == Weight(19, 20));
  const ProblemFile frac = parse_problem("kb B { p : 3/5 }");
  CHECK(frac.profile[0].formulas()[0].weight == Weight(3, 5));
}

TEST_CASE("entries split on semicolons or newlines") {
  const ProblemFile problem = parse_problem("kb B { p : 0.5; q : 0.25\nr : 1 }");
  CHECK(problem.profile[0].size() == 3);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_problem("kb B {\n  p & : 0.5\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("formula") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_problem("kb B { p : 0 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("kb B { p : 1.5 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("kb B { p : 0.1234567891 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("kb B { p : 1 }\nkb B { q : 1 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("vars p q\nkb B { r : 1 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("vars p p\nkb B { p : 1 }"), ParseError);
  CHECK_THROWS_AS(parse_problem("kb B { p : 1 }\nconstraint p\nconstraint q"), ParseError);
  CHECK_THROWS_AS(parse_problem("kb B { p : 1 "), ParseError);
  CHECK_THROWS_AS(parse_problem("what p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p |"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
}

TEST_CASE("formula grammar: precedence and associativity") {
  CHECK(parse_formula("a -> b -> c") ==
        implies(Formula::atom("a"), implies(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse_formula("a | b & c") ==
        (Formula::atom("a") | (Formula::atom("b") & Formula::atom("c"))));
  CHECK(parse_formula("!a | b <-> c") ==
        iff(!Formula::atom("a") | Formula::atom("b"), Formula::atom("c")));
  CHECK(parse_formula("true & !false") == (Formula::verum() & !Formula::falsum()));
}

TEST_CASE("comments and blank lines are ignored") {
  const ProblemFile problem =
      parse_problem("# heading\n\nkb B { # inline\n p : 1 }\n\n# tail\nconstraint p\n");
  CHECK(problem.profile.size() == 1);
  CHECK(problem.constraint == Formula::atom("p"));
}

TEST_CASE("parse-render round trip is structural identity") {
  for (const auto* name : {"example.lm", "drowning.lm", "classical.lm"}) {
    const ProblemFile once = parse_problem(read_sample(name));
    const ProblemFile twice = parse_problem(render_problem(once));
    CHECK(once.profile == twice.profile);
    CHECK(once.constraint == twice.constraint);
    CHECK(once.vocabulary == twice.vocabulary);
  }
}

TEST_CASE("random problems round trip through rendering") {
  const Vocabulary v = fixtures::four_vars();
  const auto atoms = fixtures::atom_pool(v);
  fixtures::TestRng rng(173);
  for (int i = 0; i < 40; ++i) {
    ProblemFile problem;
    problem.vocabulary = v;
    problem.explicit_vocabulary = true;
    const auto bases = 1 + rng.below(3);
    for (std::uint64_t b = 0; b < bases; ++b) {
      PossibilisticKB kb("B" + std::to_string(b + 1));
      const auto n = 1 + rng.below(4);
      for (std::uint64_t k = 0; k < n; ++k)
        kb.insert(fixtures::random_formula(rng, atoms, 2),
                  Weight(static_cast<long long>(1 + rng.below(10)), 10));
      problem.profile.push_back(std::move(kb));
    }
    problem.constraint = fixtures::random_formula(rng, atoms, 2);
    const ProblemFile again = parse_problem(render_problem(problem));
    CHECK(problem.profile == again.profile);
    CHECK(problem.constraint == again.constraint);
    CHECK(problem.vocabulary == again.vocabulary);
  }
}

TEST_CASE("model output renders ascending bitstrings") {
  const ProblemFile problem = parse_problem(read_sample("example.lm"));
  MergeResult result;
  result.method = "semantic";
  result.vocabulary = problem.vocabulary;
  result.models = merge_semantic(problem.profile, problem.constraint, problem.vocabulary);
  result.formula = models_to_formula(result.models, problem.vocabulary);
  CHECK(render_result(result, OutputFormat::Models) == "1110\n1111\n");
  CHECK(render_result(result, OutputFormat::FormulaText).starts_with("p1 & p2"));
}

TEST_CASE("json output follows the report schema with rational strings") {
  const ProblemFile problem = parse_problem(read_sample("example.lm"));
  auto [formula, trace] = merge_syntactic(problem.profile, problem.constraint);

  MergeResult result;
  result.method = "syntactic";
  result.vocabulary = problem.vocabulary;
  result.models = enumerate_models(formula, problem.vocabulary);
  result.formula = formula;
  result.trace = trace;

  const nlohmann::json j = result_to_json(result);
  CHECK(j["method"] == "syntactic");
  CHECK(j["vocabulary"] == nlohmann::json::array({"p1", "p2", "p3", "p4"}));
  CHECK(j["models"] == nlohmann::json::array({"1110", "1111"}));
  CHECK(j["formula"].is_string());

  const auto& iterations = j["trace"]["iterations"];
  REQUIRE(iterations.size() == 2);
  CHECK(iterations[0]["inc"] == "0");
  CHECK(iterations[1]["inc"] == "3/5");
  CHECK(iterations[0]["maxc"] == 2);
  const auto& pair = iterations[0]["pairs"][0];
  CHECK(pair["inc_s"] == "0");
  CHECK(pair["remaining"] == nlohmann::json::array({"B1", "B2", "B3", "B4"}));
  CHECK(pair["I"] == nlohmann::json::array({1, 2, 3}));
  CHECK(pair["cardm"] == nlohmann::json::array({nlohmann::json::array({1, 3}),
                                                nlohmann::json::array({2, 3})}));
  CHECK(pair["maxcs"] == 2);

  // Degrees serialize as strings everywhere, never as JSON numbers.
  for (const auto& it : iterations) {
    CHECK(it["inc"].is_string());
    for (const auto& pr : it["pairs"]) CHECK(pr["inc_s"].is_string());
  }
}

TEST_CASE("text trace rendering mentions the staged data") {
  const ProblemFile problem = parse_problem(read_sample("example.lm"));
  auto [formula, trace] = merge_syntactic(problem.profile, problem.constraint);
  const std::string text = render_trace_text(trace);
  CHECK(text.find("Inc = 0") != std::string::npos);
  CHECK(text.find("Inc = 3/5") != std::string::npos);
  CHECK(text.find("final:") != std::string::npos);
}
