#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexmerge {

// A formula mentions an atom outside the interpretation's vocabulary.
class UnknownAtomError : public std::runtime_error {
 public:
  explicit UnknownAtomError(std::string atom)
      : std::runtime_error("unknown atom '" + atom + "'"), atom_(std::move(atom)) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

// Model enumeration was asked for more atoms than the configured cap allows.
class VocabularyTooLargeError : public std::runtime_error {
 public:
  VocabularyTooLargeError(std::size_t size, std::size_t cap)
      : std::runtime_error("vocabulary of " + std::to_string(size) +
                           " atoms exceeds the cap of " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}
  std::size_t size() const { return size_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t size_;
  std::size_t cap_;
};

// Problem-file or formula syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace lexmerge
