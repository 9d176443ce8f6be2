#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lexmerge/errors.hpp"
#include "lexmerge/formula.hpp"

namespace lexmerge {

// Default and absolute limits on exhaustive model enumeration.
inline constexpr std::size_t kDefaultAtomCap = 24;
inline constexpr std::size_t kHardAtomLimit = 26;

// Ordered atom universe. The order fixes bit positions in interpretation
// bitstrings: position 0 is the leftmost character. Canonical construction
// sorts by name; an explicit order may be supplied (e.g. a `vars` line).
// Copies are cheap; the data is shared and immutable.
class Vocabulary {
 public:
  Vocabulary() : data_(empty_data()) {}

  static Vocabulary sorted(const std::set<std::string>& names) {
    return Vocabulary(std::vector<std::string>(names.begin(), names.end()));
  }

  static Vocabulary ordered(std::vector<std::string> names) {
    return Vocabulary(std::move(names));
  }

  std::size_t size() const { return data_->names.size(); }
  bool empty() const { return data_->names.empty(); }
  std::span<const std::string> names() const { return data_->names; }
  const std::string& name(std::size_t index) const { return data_->names[index]; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    const auto it = data_->index.find(name);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view name) const {
    return data_->index.find(name) != data_->index.end();
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.data_ == b.data_ || a.data_->names == b.data_->names;
  }

 private:
  struct Data {
    std::vector<std::string> names;
    std::map<std::string, std::size_t, std::less<>> index;
  };

  explicit Vocabulary(std::vector<std::string> names) {
    auto data = std::make_shared<Data>();
    data->names = std::move(names);
    for (std::size_t i = 0; i < data->names.size(); ++i) {
      const auto& n = data->names[i];
      if (!is_valid_atom_name(n))
        throw std::invalid_argument("invalid atom name: '" + n + "'");
      if (!data->index.emplace(n, i).second)
        throw std::invalid_argument("duplicate atom name: '" + n + "'");
    }
    data_ = std::move(data);
  }

  static const std::shared_ptr<const Data>& empty_data() {
    static const auto data = std::make_shared<const Data>();
    return data;
  }

  std::shared_ptr<const Data> data_;
};

inline void require_within_cap(const Vocabulary& v, std::size_t atom_cap) {
  const std::size_t cap = std::min(atom_cap, kHardAtomLimit);
  if (v.size() > cap) throw VocabularyTooLargeError(v.size(), cap);
}

// Total truth assignment over a vocabulary, packed into an integer code.
// Atom i occupies code bit (n-1-i), so ascending codes coincide with
// ascending bitstring order.
class Interpretation {
 public:
  Interpretation(Vocabulary vocabulary, std::uint64_t code)
      : vocabulary_(std::move(vocabulary)), code_(code) {}

  static Interpretation from_bitstring(Vocabulary vocabulary, std::string_view bits) {
    if (bits.size() != vocabulary.size())
      throw std::invalid_argument("bitstring length does not match vocabulary");
    std::uint64_t code = 0;
    for (const char c : bits) {
      if (c != '0' && c != '1') throw std::invalid_argument("bitstring must be 0/1");
      code = (code << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return Interpretation(std::move(vocabulary), code);
  }

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::uint64_t code() const { return code_; }

  bool value(std::size_t atom_index) const {
    const std::size_t n = vocabulary_.size();
    return (code_ >> (n - 1 - atom_index)) & 1u;
  }

  bool value(std::string_view atom) const {
    const auto idx = vocabulary_.index_of(atom);
    if (!idx) throw UnknownAtomError(std::string(atom));
    return value(*idx);
  }

  std::string bitstring() const {
    const std::size_t n = vocabulary_.size();
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i)
      if (value(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const Interpretation& a, const Interpretation& b) {
    return a.code_ == b.code_ && a.vocabulary_ == b.vocabulary_;
  }

 private:
  Vocabulary vocabulary_;
  std::uint64_t code_;
};

inline std::ostream& operator<<(std::ostream& os, const Interpretation& w) {
  return os << w.bitstring();
}

}  // namespace lexmerge
