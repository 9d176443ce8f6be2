#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexmerge/merge_semantic.hpp"
#include "lexmerge/merge_syntactic.hpp"
#include "lexmerge/models.hpp"
#include "lexmerge/possibilistic.hpp"
#include "lexmerge/postulates.hpp"
#include "lexmerge/problem_io.hpp"
#include "lexmerge/reductions.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitCounterexample = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_merge(const std::string& path, const std::string& method,
              const std::string& output, bool with_trace, std::size_t vars_cap) {
  using namespace lexmerge;
  const ProblemFile problem = parse_problem(read_file(path));
  const auto format = parse_output_format(output);
  if (!format) {
    std::cerr << "error: unknown output format '" << output << "'\n";
    return kExitUsage;
  }

  MergeResult result;
  result.method = method;
  result.vocabulary = problem.vocabulary;

  if (method == "semantic" || method == "both") {
    result.models = merge_semantic(problem.profile, problem.constraint,
                                   problem.vocabulary, vars_cap);
    result.formula = models_to_formula(result.models, problem.vocabulary);
  }
  if (method == "syntactic" || method == "both") {
    auto [formula, trace] = merge_syntactic(problem.profile, problem.constraint, vars_cap);
    if (method == "both") {
      if (!equivalent(formula, result.formula, problem.vocabulary, vars_cap)) {
        std::cerr << "error: semantic and syntactic merges disagree; this is a bug\n"
                  << "  semantic:  " << to_string(result.formula) << "\n"
                  << "  syntactic: " << to_string(formula) << "\n";
        return kExitUsage;
      }
    } else {
      result.models = enumerate_models(formula, problem.vocabulary, vars_cap);
    }
    result.formula = std::move(formula);
    result.trace = std::move(trace);
  }

  std::cout << render_result(result, *format, with_trace);
  return result.models.empty() ? kExitInconsistent : kExitOk;
}

int run_entails(const std::string& path, const std::string& query, std::size_t vars_cap) {
  using namespace lexmerge;
  const ProblemFile problem = parse_problem(read_file(path));
  const Formula psi = parse_formula(query);
  if (problem.explicit_vocabulary)
    for (const auto& atom : atom_names(psi))
      if (!problem.vocabulary.contains(atom))
        throw std::runtime_error("query atom '" + atom + "' is not in declared vars");
  const bool holds = merged_entails(problem.profile, problem.constraint, psi, vars_cap);
  std::cout << (holds ? "entailed" : "not entailed") << "\n";
  return holds ? kExitOk : kExitInconsistent;
}

int run_reduce(const std::string& path, const std::string& op, const std::string& output,
               std::size_t vars_cap) {
  using namespace lexmerge;
  const ProblemFile problem = parse_problem(read_file(path));
  for (const auto& kb : problem.profile)
    for (const auto& wf : kb.formulas())
      if (wf.weight != Weight(1))
        throw std::runtime_error("reduce needs weight-1 bases; '" + kb.name() +
                                 "' carries weight " + wf.weight.str());

  ClassicalProfile cp;
  cp.reserve(problem.profile.size());
  for (const auto& kb : problem.profile)
    cp.push_back(make_classical_base(kb.classical_projection()));

  std::vector<Interpretation> models;
  Formula formula;
  if (op == "c4") {
    formula = merge_c4(cp, problem.constraint, vars_cap);
    models = enumerate_models(formula, problem.vocabulary, vars_cap);
  } else if (op == "gmin") {
    models = merge_gmin(cp, problem.constraint, problem.vocabulary, vars_cap);
    formula = models_to_formula(models, problem.vocabulary);
  } else {
    std::cerr << "error: unknown operator '" << op << "' (use c4 or gmin)\n";
    return kExitUsage;
  }

  if (output == "formula") {
    std::cout << to_string(formula) << "\n";
  } else if (output == "models") {
    for (const auto& w : models) std::cout << w.bitstring() << "\n";
  } else {
    std::cerr << "error: unknown output format '" << output << "'\n";
    return kExitUsage;
  }
  return models.empty() ? kExitInconsistent : kExitOk;
}

int run_postulates(const lexmerge::SuiteOptions& options, const std::string& report_path) {
  using namespace lexmerge;
  const SuiteResult result = run_postulate_suite(options);

  std::vector<PostulateId> ids = options.ids;
  if (ids.empty()) ids = all_p_postulates();
  for (const auto id : ids) {
    const auto& s = result.stats.at(id);
    std::cout << postulate_name(id) << ": " << s.passed << " passed, " << s.failed
              << " failed, " << s.not_applicable << " not applicable\n";
  }
  for (const auto& failure : result.failures)
    std::cerr << "counterexample for " << postulate_name(failure.id) << " ("
              << failure.description << "):\n"
              << failure.counterexample;

  if (!report_path.empty()) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto id : ids) {
      const auto& s = result.stats.at(id);
      results.push_back({{"id", postulate_name(id)},
                         {"applicable", s.applicable},
                         {"passed", s.passed},
                         {"failed", s.failed},
                         {"not_applicable", s.not_applicable}});
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& failure : result.failures)
      failures.push_back({{"id", postulate_name(failure.id)},
                          {"description", failure.description},
                          {"counterexample", failure.counterexample}});
    const nlohmann::json report = {{"seed", options.params.seed},
                                   {"trials", options.trials},
                                   {"all_passed", result.all_passed()},
                                   {"results", results},
                                   {"failures", failures}};
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report to '" + report_path + "'");
    out << report.dump(2) << "\n";
  }
  return result.all_passed() ? kExitOk : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicographic merging of possibilistic knowledge bases"};
  app.require_subcommand(1);

  std::string file;
  std::string method = "both";
  std::string output = "models";
  std::string query;
  std::string op;
  std::string report_path;
  std::string ids_text;
  bool with_trace = false;
  std::size_t vars_cap = lexmerge::kDefaultAtomCap;
  lexmerge::SuiteOptions suite;
  suite.trials = 200;

  auto* merge = app.add_subcommand("merge", "Merge a problem file");
  merge->add_option("file", file, "problem file")->required();
  merge->add_option("--method", method, "semantic | syntactic | both")
      ->check(CLI::IsMember({"semantic", "syntactic", "both"}));
  merge->add_option("--output", output, "models | formula | json");
  merge->add_flag("--trace", with_trace, "include the merge trace");
  merge->add_option("--vars-cap", vars_cap, "max vocabulary size for enumeration");

  auto* entails = app.add_subcommand("entails", "Does the merged base entail a query?");
  entails->add_option("file", file, "problem file")->required();
  entails->add_option("--query", query, "query formula")->required();
  entails->add_option("--vars-cap", vars_cap, "max vocabulary size for enumeration");

  auto* reduce = app.add_subcommand("reduce", "Classical operators on weight-1 profiles");
  reduce->add_option("file", file, "problem file")->required();
  reduce->add_option("--operator", op, "c4 | gmin")->required();
  reduce->add_option("--output", output, "models | formula");
  reduce->add_option("--vars-cap", vars_cap, "max vocabulary size for enumeration");

  auto* postulates = app.add_subcommand("postulates", "Audit the merging postulates");
  postulates->add_option("--seed", suite.params.seed, "generator seed");
  postulates->add_option("--trials", suite.trials, "number of generated instances");
  postulates->add_option("--ids", ids_text, "comma-separated list, e.g. P1,P2,IC4");
  postulates->add_option("--report", report_path, "write a JSON report here");
  postulates->add_option("--atoms", suite.params.atom_count, "atoms per instance");
  postulates->add_option("--bases", suite.params.base_count, "max bases per profile");
  postulates->add_option("--min-formulas", suite.params.formulas_per_base_min,
                         "min formulas per base");
  postulates->add_option("--max-formulas", suite.params.formulas_per_base_max,
                         "max formulas per base");
  postulates->add_option("--depth", suite.params.constraint_depth, "formula depth bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (merge->parsed()) return run_merge(file, method, output, with_trace, vars_cap);
    if (entails->parsed()) return run_entails(file, query, vars_cap);
    if (reduce->parsed()) return run_reduce(file, op, output, vars_cap);
    if (postulates->parsed()) {
      if (!ids_text.empty()) {
        std::stringstream ss(ids_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto id = lexmerge::parse_postulate_name(item);
          if (!id) {
            std::cerr << "error: unknown postulate id '" << item << "'\n";
            return kExitUsage;
          }
          suite.ids.push_back(*id);
        }
      }
      return run_postulates(suite, report_path);
    }
  } catch (const lexmerge::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
