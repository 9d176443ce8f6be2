#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexmerge {

// Atom names are identifiers: a letter followed by letters, digits or
// underscores. "true" and "false" are reserved by the concrete syntax.
inline bool is_valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  const auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  const auto tail = [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9') || c == '_';
  };
  if (!alpha(name.front())) return false;
  for (const char c : name.substr(1))
    if (!tail(c)) return false;
  return name != "true" && name != "false";
}

// Immutable propositional formula. Copies share subtrees; structural
// equality and a structural total order make formulas usable as set keys.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Verum,
    Falsum,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
  };

  Formula() : node_(verum_node()) {}

  static Formula verum() { return Formula(verum_node()); }
  static Formula falsum() {
    static const auto node = std::make_shared<const Node>(Node{Kind::Falsum, {}, nullptr, nullptr});
    return Formula(node);
  }
  static Formula atom(std::string_view name) {
    if (!is_valid_atom_name(name))
      throw std::invalid_argument("invalid atom name: '" + std::string(name) + "'");
    return Formula(std::make_shared<const Node>(
        Node{Kind::Atom, std::string(name), nullptr, nullptr}));
  }
  static Formula negation(Formula f) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Not, {}, std::move(f.node_), nullptr}));
  }
  static Formula conjunction(Formula a, Formula b) {
    return binary(Kind::And, std::move(a), std::move(b));
  }
  static Formula disjunction(Formula a, Formula b) {
    return binary(Kind::Or, std::move(a), std::move(b));
  }
  static Formula implication(Formula a, Formula b) {
    return binary(Kind::Implies, std::move(a), std::move(b));
  }
  static Formula biconditional(Formula a, Formula b) {
    return binary(Kind::Iff, std::move(a), std::move(b));
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }

  // Stable key for memo tables; equal keys imply structural equality for
  // formulas built from shared copies.
  const void* node_id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    return compare(a.node_.get(), b.node_.get()) == 0;
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    const int c = compare(a.node_.get(), b.node_.get());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    Kind kind;
    std::string atom;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula binary(Kind k, Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(
        Node{k, {}, std::move(a.node_), std::move(b.node_)}));
  }

  static const std::shared_ptr<const Node>& verum_node() {
    static const auto node = std::make_shared<const Node>(Node{Kind::Verum, {}, nullptr, nullptr});
    return node;
  }

  static int compare(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
      case Kind::Verum:
      case Kind::Falsum:
        return 0;
      case Kind::Atom:
        return a->atom.compare(b->atom);
      case Kind::Not:
        return compare(a->lhs.get(), b->lhs.get());
      default: {
        const int c = compare(a->lhs.get(), b->lhs.get());
        return c != 0 ? c : compare(a->rhs.get(), b->rhs.get());
      }
    }
  }

  std::shared_ptr<const Node> node_;
};

inline Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&(Formula a, Formula b) {
  return Formula::conjunction(std::move(a), std::move(b));
}
inline Formula operator|(Formula a, Formula b) {
  return Formula::disjunction(std::move(a), std::move(b));
}
inline Formula implies(Formula a, Formula b) {
  return Formula::implication(std::move(a), std::move(b));
}
inline Formula iff(Formula a, Formula b) {
  return Formula::biconditional(std::move(a), std::move(b));
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Verum:
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      out.insert(f.atom_name());
      return;
    case Formula::Kind::Not:
      collect_atoms(f.lhs(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

inline std::set<std::string> atom_names(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

// Conjunction / disjunction of a formula set; empty set folds to the unit.
inline Formula conjunction_of(std::span<const Formula> fs) {
  if (fs.empty()) return Formula::verum();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = acc & fs[i];
  return acc;
}

inline Formula disjunction_of(std::span<const Formula> fs) {
  if (fs.empty()) return Formula::falsum();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = acc | fs[i];
  return acc;
}

namespace detail {

// Binding strength used by the printer, loosest first; mirrors the concrete
// grammar so that printing and reparsing give back the same tree.
inline int print_level(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 0;
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not: return 4;
    default: return 5;
  }
}

inline void print_formula(std::string& out, const Formula& f, int min_level) {
  const int level = print_level(f.kind());
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Verum:
      out += "true";
      break;
    case Formula::Kind::Falsum:
      out += "false";
      break;
    case Formula::Kind::Atom:
      out += f.atom_name();
      break;
    case Formula::Kind::Not:
      out += '!';
      print_formula(out, f.lhs(), 4);
      break;
    case Formula::Kind::And:
      print_formula(out, f.lhs(), 3);
      out += " & ";
      print_formula(out, f.rhs(), 4);
      break;
    case Formula::Kind::Or:
      print_formula(out, f.lhs(), 2);
      out += " | ";
      print_formula(out, f.rhs(), 3);
      break;
    case Formula::Kind::Implies:  // right-associative
      print_formula(out, f.lhs(), 2);
      out += " -> ";
      print_formula(out, f.rhs(), 1);
      break;
    case Formula::Kind::Iff:  // right-associative
      print_formula(out, f.lhs(), 1);
      out += " <-> ";
      print_formula(out, f.rhs(), 0);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_formula(out, f, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << to_string(f);
}

}  // namespace lexmerge
