#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lexmerge/errors.hpp"
#include "lexmerge/formula.hpp"
#include "lexmerge/interpretation.hpp"

namespace lexmerge {

// Truth-functional evaluation of a single interpretation. Both operands are
// always visited, so a formula mentioning an atom outside the vocabulary
// fails regardless of where it sits in the tree.
inline bool evaluate(const Formula& f, const Interpretation& w) {
  switch (f.kind()) {
    case Formula::Kind::Verum: return true;
    case Formula::Kind::Falsum: return false;
    case Formula::Kind::Atom: return w.value(f.atom_name());
    case Formula::Kind::Not: return !evaluate(f.lhs(), w);
    default: {
      const bool lhs = evaluate(f.lhs(), w);
      const bool rhs = evaluate(f.rhs(), w);
      switch (f.kind()) {
        case Formula::Kind::And: return lhs && rhs;
        case Formula::Kind::Or: return lhs || rhs;
        case Formula::Kind::Implies: return !lhs || rhs;
        default: return lhs == rhs;  // Iff
      }
    }
  }
}

// Bitset over all 2^n interpretation codes of an n-atom vocabulary.
// Bit c is set iff the interpretation with code c belongs to the set.
class ModelSet {
 public:
  ModelSet(std::size_t atom_count, bool fill)
      : atoms_(atom_count), words_(word_count(atom_count), 0) {
    if (fill) {
      for (auto& w : words_) w = ~0ull;
      trim();
    }
  }

  std::size_t atom_count() const { return atoms_; }
  std::uint64_t universe_size() const { return 1ull << atoms_; }

  bool test(std::uint64_t code) const {
    return (words_[code >> 6] >> (code & 63)) & 1u;
  }
  void set(std::uint64_t code) { words_[code >> 6] |= 1ull << (code & 63); }

  ModelSet& operator&=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ModelSet& operator|=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ModelSet& operator^=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  void complement() {
    for (auto& w : words_) w = ~w;
    trim();
  }

  bool any() const {
    for (const auto w : words_)
      if (w != 0) return true;
    return false;
  }
  bool none() const { return !any(); }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (const auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  bool is_subset_of(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }

  friend bool operator==(const ModelSet& a, const ModelSet& b) {
    return a.atoms_ == b.atoms_ && a.words_ == b.words_;
  }

  // Visits set codes in ascending order without materializing them.
  template <class F>
  void for_each_code(F&& visit) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int b = std::countr_zero(w);
        visit((static_cast<std::uint64_t>(i) << 6) | static_cast<unsigned>(b));
        w &= w - 1;
      }
    }
  }

  // Set codes in ascending order.
  std::vector<std::uint64_t> codes() const {
    std::vector<std::uint64_t> out;
    for_each_code([&out](std::uint64_t code) { out.push_back(code); });
    return out;
  }

  // Set of codes whose bit `code_bit` is 1, i.e. the models of one atom.
  static ModelSet code_bit_pattern(std::size_t atom_count, std::size_t code_bit) {
    ModelSet s(atom_count, false);
    if (code_bit < 6) {
      const std::uint64_t pattern = low_bit_pattern(code_bit);
      for (auto& w : s.words_) w = pattern;
    } else {
      const std::size_t word_bit = code_bit - 6;
      for (std::size_t i = 0; i < s.words_.size(); ++i)
        if ((i >> word_bit) & 1u) s.words_[i] = ~0ull;
    }
    s.trim();
    return s;
  }

 private:
  static std::uint64_t low_bit_pattern(std::size_t b) {
    switch (b) {
      case 0: return 0xAAAAAAAAAAAAAAAAull;
      case 1: return 0xCCCCCCCCCCCCCCCCull;
      case 2: return 0xF0F0F0F0F0F0F0F0ull;
      case 3: return 0xFF00FF00FF00FF00ull;
      case 4: return 0xFFFF0000FFFF0000ull;
      default: return 0xFFFFFFFF00000000ull;
    }
  }

  static std::size_t word_count(std::size_t atoms) {
    return atoms >= 6 ? (std::size_t{1} << (atoms - 6)) : 1;
  }

  void trim() {
    if (atoms_ < 6) words_[0] &= (1ull << (1ull << atoms_)) - 1;
  }

  std::size_t atoms_;
  std::vector<std::uint64_t> words_;
};

namespace detail {

inline void require_known_atoms(const Formula& f, const Vocabulary& v) {
  switch (f.kind()) {
    case Formula::Kind::Verum:
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      if (!v.contains(f.atom_name())) throw UnknownAtomError(f.atom_name());
      return;
    case Formula::Kind::Not:
      require_known_atoms(f.lhs(), v);
      return;
    default:
      require_known_atoms(f.lhs(), v);
      require_known_atoms(f.rhs(), v);
  }
}

struct ModelSetBuilder {
  const Vocabulary& vocabulary;
  std::map<const void*, ModelSet> memo;

  ModelSet build(const Formula& f) {
    // Sharing only pays while the per-node tables stay small.
    if (vocabulary.size() > 18) return compute(f);
    if (const auto it = memo.find(f.node_id()); it != memo.end()) return it->second;
    ModelSet s = compute(f);
    memo.emplace(f.node_id(), s);
    return s;
  }

  ModelSet compute(const Formula& f) {
    const std::size_t n = vocabulary.size();
    switch (f.kind()) {
      case Formula::Kind::Verum:
        return ModelSet(n, true);
      case Formula::Kind::Falsum:
        return ModelSet(n, false);
      case Formula::Kind::Atom: {
        const auto idx = vocabulary.index_of(f.atom_name());
        if (!idx) throw UnknownAtomError(f.atom_name());
        return ModelSet::code_bit_pattern(n, n - 1 - *idx);
      }
      case Formula::Kind::Not: {
        ModelSet s = build(f.lhs());
        s.complement();
        return s;
      }
      case Formula::Kind::And: {
        ModelSet s = build(f.lhs());
        s &= build(f.rhs());
        return s;
      }
      case Formula::Kind::Or: {
        ModelSet s = build(f.lhs());
        s |= build(f.rhs());
        return s;
      }
      case Formula::Kind::Implies: {
        ModelSet s = build(f.lhs());
        s.complement();
        s |= build(f.rhs());
        return s;
      }
      case Formula::Kind::Iff: {
        ModelSet s = build(f.lhs());
        s ^= build(f.rhs());
        s.complement();
        return s;
      }
    }
    return ModelSet(n, false);  // unreachable
  }
};

}  // namespace detail

// Exact model set of f over v, computed bottom-up over the whole truth
// table. Throws UnknownAtomError if f mentions atoms outside v and
// VocabularyTooLargeError above the cap.
inline ModelSet model_set(const Formula& f, const Vocabulary& v,
                          std::size_t atom_cap = kDefaultAtomCap) {
  require_within_cap(v, atom_cap);
  detail::ModelSetBuilder builder{v, {}};
  return builder.build(f);
}

inline std::vector<Interpretation> enumerate_models(
    const Formula& f, const Vocabulary& v, std::size_t atom_cap = kDefaultAtomCap) {
  const ModelSet s = model_set(f, v, atom_cap);
  std::vector<Interpretation> out;
  for (const auto code : s.codes()) out.emplace_back(v, code);
  return out;
}

// Conjunctive consistency of a formula set; the running intersection exits
// early once it empties. Atom errors fire even for formulas the early exit
// would skip.
inline bool is_consistent(std::span<const Formula> fs, const Vocabulary& v,
                          std::size_t atom_cap = kDefaultAtomCap) {
  require_within_cap(v, atom_cap);
  for (const auto& f : fs) detail::require_known_atoms(f, v);
  ModelSet acc(v.size(), true);
  for (const auto& f : fs) {
    acc &= model_set(f, v, atom_cap);
    if (acc.none()) return false;
  }
  return acc.any();
}

inline bool is_consistent(std::initializer_list<Formula> fs, const Vocabulary& v,
                          std::size_t atom_cap = kDefaultAtomCap) {
  return is_consistent(std::span<const Formula>(fs.begin(), fs.size()), v, atom_cap);
}

inline bool entails(std::span<const Formula> fs, const Formula& g, const Vocabulary& v,
                    std::size_t atom_cap = kDefaultAtomCap) {
  require_within_cap(v, atom_cap);
  for (const auto& f : fs) detail::require_known_atoms(f, v);
  detail::require_known_atoms(g, v);
  ModelSet acc(v.size(), true);
  for (const auto& f : fs) {
    acc &= model_set(f, v, atom_cap);
    if (acc.none()) return true;
  }
  return acc.is_subset_of(model_set(g, v, atom_cap));
}

inline bool entails(std::initializer_list<Formula> fs, const Formula& g,
                    const Vocabulary& v, std::size_t atom_cap = kDefaultAtomCap) {
  return entails(std::span<const Formula>(fs.begin(), fs.size()), g, v, atom_cap);
}

inline bool equivalent(const Formula& f, const Formula& g, const Vocabulary& v,
                       std::size_t atom_cap = kDefaultAtomCap) {
  return model_set(f, v, atom_cap) == model_set(g, v, atom_cap);
}

// Sorted vocabulary covering every atom of the given formulas.
inline Vocabulary vocabulary_of_formulas(std::span<const Formula> fs) {
  std::set<std::string> names;
  for (const auto& f : fs) collect_atoms(f, names);
  return Vocabulary::sorted(names);
}

}  // namespace lexmerge
