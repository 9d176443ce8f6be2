#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lexmerge/errors.hpp"
#include "lexmerge/formula.hpp"
#include "lexmerge/interpretation.hpp"
#include "lexmerge/merge_syntactic.hpp"
#include "lexmerge/possibilistic.hpp"
#include "lexmerge/rational.hpp"

namespace lexmerge {

// Problem files:
//
//   # comment
//   vars p1 p2 p3 p4            (optional; fixes the bit order)
//   kb B1 {
//     p1 | p2 : 0.9
//     p3 : 0.9 ; p1 : 0.6
//   }
//   constraint (!p1 | p2) & p3  (optional; defaults to true)
//
// Formula operators, loosest to tightest: <->, -> (right-associative),
// |, &, !. Weights are decimals with at most nine fraction digits or
// num/den fractions, in (0,1].
struct ProblemFile {
  Profile profile;
  Formula constraint;
  Vocabulary vocabulary;
  bool explicit_vocabulary = false;
};

namespace detail {

struct Token {
  enum class Type {
    Identifier,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Semicolon,
    Newline,
    OpAnd,
    OpOr,
    OpNot,
    OpImplies,
    OpIff,
    End,
  };
  Type type;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;

  const auto push = [&](Token::Type type, std::string value, std::size_t col) {
    out.push_back({type, std::move(value), line, col});
  };

  while (i < text.size()) {
    const char c = text[i];
    const std::size_t col = column;
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      push(Token::Type::Newline, "\n", col);
      ++i;
      ++line;
      column = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++column;
      continue;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t j = i;
      while (j < text.size() &&
             ((text[j] >= 'a' && text[j] <= 'z') || (text[j] >= 'A' && text[j] <= 'Z') ||
              (text[j] >= '0' && text[j] <= '9') || text[j] == '_'))
        ++j;
      push(Token::Type::Identifier, std::string(text.substr(i, j - i)), col);
      column += j - i;
      i = j;
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      if (j < text.size() && (text[j] == '.' || text[j] == '/')) {
        ++j;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      }
      push(Token::Type::Number, std::string(text.substr(i, j - i)), col);
      column += j - i;
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Token::Type::LParen, "(", col); break;
      case ')': push(Token::Type::RParen, ")", col); break;
      case '{': push(Token::Type::LBrace, "{", col); break;
      case '}': push(Token::Type::RBrace, "}", col); break;
      case ':': push(Token::Type::Colon, ":", col); break;
      case ';': push(Token::Type::Semicolon, ";", col); break;
      case '&': push(Token::Type::OpAnd, "&", col); break;
      case '|': push(Token::Type::OpOr, "|", col); break;
      case '!': push(Token::Type::OpNot, "!", col); break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Token::Type::OpImplies, "->", col);
          ++i;
          ++column;
          break;
        }
        throw ParseError(line, col, "expected '->' after '-'");
      case '<':
        if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
          push(Token::Type::OpIff, "<->", col);
          i += 2;
          column += 2;
          break;
        }
        throw ParseError(line, col, "expected '<->' after '<'");
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    ++i;
    ++column;
  }
  out.push_back({Token::Type::End, "", line, column});
  return out;
}

// Recursive-descent parser over the token stream. Formulas never cross
// newlines; problem structure is handled by parse_problem below.
class TokenParser {
 public:
  explicit TokenParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at(Token::Type type) const { return peek().type == type; }

  bool accept(Token::Type type) {
    if (!at(type)) return false;
    advance();
    return true;
  }

  const Token& expect(Token::Type type, const std::string& what) {
    if (!at(type)) throw error("expected " + what);
    return advance();
  }

  void skip_newlines() {
    while (at(Token::Type::Newline)) advance();
  }

  ParseError error(const std::string& message) const {
    return ParseError(peek().line, peek().column, message);
  }

  // declared_atoms, when set, restricts formula atoms to the declared
  // vocabulary.
  Formula parse_formula(const std::set<std::string>* declared_atoms) {
    declared_ = declared_atoms;
    return parse_iff();
  }

 private:
  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (accept(Token::Type::OpIff)) return iff(std::move(lhs), parse_iff());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Token::Type::OpImplies)) return implies(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula acc = parse_and();
    while (accept(Token::Type::OpOr)) acc = std::move(acc) | parse_and();
    return acc;
  }

  Formula parse_and() {
    Formula acc = parse_not();
    while (accept(Token::Type::OpAnd)) acc = std::move(acc) & parse_not();
    return acc;
  }

  Formula parse_not() {
    if (accept(Token::Type::OpNot)) return !parse_not();
    return parse_primary();
  }

  Formula parse_primary() {
    if (accept(Token::Type::LParen)) {
      Formula inner = parse_iff();
      expect(Token::Type::RParen, "')'");
      return inner;
    }
    if (at(Token::Type::Identifier)) {
      const Token& t = peek();
      if (t.text == "true") {
        advance();
        return Formula::verum();
      }
      if (t.text == "false") {
        advance();
        return Formula::falsum();
      }
      if (!is_valid_atom_name(t.text)) throw error("invalid atom name '" + t.text + "'");
      if (declared_ != nullptr && declared_->find(t.text) == declared_->end())
        throw error("unknown atom '" + t.text + "' (not in declared vars)");
      const std::string name = t.text;
      advance();
      return Formula::atom(name);
    }
    throw error("expected a formula");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::set<std::string>* declared_ = nullptr;
};

inline Weight parse_weight(TokenParser& parser) {
  const Token& t = parser.peek();
  if (t.type != Token::Type::Number) throw parser.error("expected a weight literal");
  const auto value = Rational::parse(t.text);
  if (!value)
    throw ParseError(t.line, t.column, "invalid weight literal '" + t.text + "'");
  if (*value <= Weight(0) || Weight(1) < *value)
    throw ParseError(t.line, t.column,
                     "weight " + t.text + " out of range; weights lie in (0,1]");
  parser.advance();
  return *value;
}

}  // namespace detail

// Parses a standalone formula (e.g. a CLI query).
inline Formula parse_formula(std::string_view text) {
  detail::TokenParser parser(detail::tokenize(text));
  parser.skip_newlines();
  Formula f = parser.parse_formula(nullptr);
  parser.skip_newlines();
  if (!parser.at(detail::Token::Type::End)) throw parser.error("trailing input after formula");
  return f;
}

inline ProblemFile parse_problem(std::string_view text) {
  using detail::Token;
  detail::TokenParser parser(detail::tokenize(text));

  ProblemFile out;
  std::set<std::string> declared;
  std::set<std::string> kb_names;
  std::optional<Formula> constraint;

  parser.skip_newlines();
  if (parser.at(Token::Type::Identifier) && parser.peek().text == "vars") {
    parser.advance();
    std::vector<std::string> order;
    while (parser.at(Token::Type::Identifier)) {
      const Token& t = parser.peek();
      if (!is_valid_atom_name(t.text))
        throw ParseError(t.line, t.column, "invalid atom name '" + t.text + "'");
      if (!declared.insert(t.text).second)
        throw ParseError(t.line, t.column, "duplicate atom '" + t.text + "' in vars");
      order.push_back(t.text);
      parser.advance();
    }
    if (order.empty()) throw parser.error("expected at least one atom after 'vars'");
    out.vocabulary = Vocabulary::ordered(std::move(order));
    out.explicit_vocabulary = true;
  }

  const std::set<std::string>* restrict_atoms = out.explicit_vocabulary ? &declared : nullptr;

  while (true) {
    parser.skip_newlines();
    if (parser.at(Token::Type::End)) break;
    const Token& head = parser.peek();
    if (head.type != Token::Type::Identifier)
      throw parser.error("expected 'kb' or 'constraint'");

    if (head.text == "kb") {
      parser.advance();
      const Token& name_tok = parser.expect(Token::Type::Identifier, "a knowledge base name");
      const std::string name = name_tok.text;
      if (!kb_names.insert(name).second)
        throw ParseError(name_tok.line, name_tok.column,
                         "duplicate knowledge base name '" + name + "'");
      parser.skip_newlines();
      parser.expect(Token::Type::LBrace, "'{'");
      PossibilisticKB kb(name);
      while (true) {
        parser.skip_newlines();
        if (parser.accept(Token::Type::RBrace)) break;
        if (parser.at(Token::Type::End)) throw parser.error("unterminated kb block");
        Formula f = parser.parse_formula(restrict_atoms);
        parser.expect(Token::Type::Colon, "':' before the weight");
        Weight w = detail::parse_weight(parser);
        kb.insert(std::move(f), std::move(w));
        if (parser.accept(Token::Type::Semicolon) || parser.at(Token::Type::Newline) ||
            parser.at(Token::Type::RBrace))
          continue;
        throw parser.error("expected ';', newline or '}' after a kb entry");
      }
      out.profile.push_back(std::move(kb));
      continue;
    }

    if (head.text == "constraint") {
      if (constraint) throw parser.error("duplicate constraint line");
      parser.advance();
      constraint = parser.parse_formula(restrict_atoms);
      if (!parser.at(Token::Type::Newline) && !parser.at(Token::Type::End))
        throw parser.error("trailing input after constraint");
      continue;
    }

    throw parser.error("expected 'kb' or 'constraint', got '" + head.text + "'");
  }

  out.constraint = constraint ? *constraint : Formula::verum();
  if (!out.explicit_vocabulary)
    out.vocabulary = vocabulary_of(out.profile, out.constraint);
  return out;
}

inline std::string render_problem(const ProblemFile& problem) {
  std::string out;
  if (!problem.vocabulary.empty()) {
    out += "vars";
    for (const auto& name : problem.vocabulary.names()) out += " " + name;
    out += "\n";
  }
  for (std::size_t i = 0; i < problem.profile.size(); ++i) {
    const auto& kb = problem.profile[i];
    const std::string name = kb.name().empty() ? "B" + std::to_string(i + 1) : kb.name();
    out += "kb " + name + " {\n";
    for (const auto& wf : kb.formulas())
      out += "  " + to_string(wf.formula) + " : " + wf.weight.str() + "\n";
    out += "}\n";
  }
  out += "constraint " + to_string(problem.constraint) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Result rendering.
// ---------------------------------------------------------------------------

enum class OutputFormat { Models, FormulaText, Json };

inline std::optional<OutputFormat> parse_output_format(std::string_view name) {
  if (name == "models") return OutputFormat::Models;
  if (name == "formula") return OutputFormat::FormulaText;
  if (name == "json") return OutputFormat::Json;
  return std::nullopt;
}

struct MergeResult {
  std::string method;
  Vocabulary vocabulary;
  std::vector<Interpretation> models;  // ascending bitstring order
  Formula formula;
  std::optional<MergeTrace> trace;
};

inline nlohmann::json trace_to_json(const MergeTrace& trace) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : it.pairs) {
      nlohmann::json remaining = nlohmann::json::array();
      for (const auto j : p.remaining) remaining.push_back(trace.base_names[j - 1]);
      pairs.push_back({
          {"phi", to_string(conjunction_of(p.phi))},
          {"remaining", remaining},
          {"inc_s", p.inc_s.str()},
          {"I", p.index_set},
          {"mcs", p.mcs},
          {"cardm", p.cardm},
          {"maxcs", p.maxcs},
      });
    }
    nlohmann::json entry = {{"inc", it.global_inc.str()}, {"pairs", pairs}};
    if (it.maxc)
      entry["maxc"] = *it.maxc;
    else
      entry["maxc"] = nullptr;
    iterations.push_back(std::move(entry));
  }
  return nlohmann::json{{"iterations", iterations}};
}

inline nlohmann::json result_to_json(const MergeResult& result) {
  nlohmann::json vocab = nlohmann::json::array();
  for (const auto& name : result.vocabulary.names()) vocab.push_back(name);
  nlohmann::json models = nlohmann::json::array();
  for (const auto& w : result.models) models.push_back(w.bitstring());
  nlohmann::json out = {
      {"method", result.method},
      {"vocabulary", vocab},
      {"models", models},
      {"formula", to_string(result.formula)},
  };
  if (result.trace) out["trace"] = trace_to_json(*result.trace);
  return out;
}

inline std::string render_trace_text(const MergeTrace& trace) {
  std::string out;
  std::size_t n = 1;
  for (const auto& it : trace.iterations) {
    out += "iteration " + std::to_string(n++) + ": Inc = " + it.global_inc.str();
    out += it.maxc ? ", maxc = " + std::to_string(*it.maxc) : ", no successors";
    out += "\n";
    for (const auto& p : it.pairs) {
      out += "  pair phi = " + to_string(conjunction_of(p.phi)) + "\n";
      out += "    remaining =";
      for (const auto j : p.remaining) out += " " + trace.base_names[j - 1];
      out += "\n    I = {";
      for (std::size_t k = 0; k < p.index_set.size(); ++k)
        out += (k ? "," : "") + std::to_string(p.index_set[k]);
      out += "}, cardm = {";
      for (std::size_t k = 0; k < p.cardm.size(); ++k) {
        out += k ? ", {" : "{";
        for (std::size_t m = 0; m < p.cardm[k].size(); ++m)
          out += (m ? "," : "") + std::to_string(p.cardm[k][m]);
        out += "}";
      }
      out += "}, maxcs = " + std::to_string(p.maxcs) + "\n";
    }
  }
  out += "final:";
  if (trace.final_pairs.empty()) out += " (no surviving pair)";
  for (const auto& p : trace.final_pairs)
    out += " (" + to_string(conjunction_of(p.phi)) + ", {" +
           [&] {
             std::string names;
             for (std::size_t k = 0; k < p.remaining.size(); ++k)
               names += (k ? "," : "") + trace.base_names[p.remaining[k] - 1];
             return names;
           }() +
           "})";
  out += "\n";
  return out;
}

inline std::string render_result(const MergeResult& result, OutputFormat format,
                                 bool with_trace_text = false) {
  switch (format) {
    case OutputFormat::Models: {
      std::string out;
      for (const auto& w : result.models) out += w.bitstring() + "\n";
      if (with_trace_text && result.trace) out += render_trace_text(*result.trace);
      return out;
    }
    case OutputFormat::FormulaText: {
      std::string out = to_string(result.formula) + "\n";
      if (with_trace_text && result.trace) out += render_trace_text(*result.trace);
      return out;
    }
    case OutputFormat::Json:
      return result_to_json(result).dump(2) + "\n";
  }
  return {};
}

}  // namespace lexmerge
