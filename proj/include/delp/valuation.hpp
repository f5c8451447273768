#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "delp/vocabulary.hpp"

namespace delp {

/// A propositional valuation: the set of atoms true at a world.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::size_t atom_count)
      : size_(atom_count), words_((atom_count + 63) / 64, 0) {}
  Valuation(std::size_t atom_count, const std::vector<AtomId>& atoms);

  std::size_t atom_count() const { return size_; }

  bool contains(AtomId atom) const {
    return atom < size_ && ((words_[atom / 64] >> (atom % 64)) & 1U) != 0;
  }
  void insert(AtomId atom);
  void erase(AtomId atom);

  std::vector<AtomId> atoms() const;
  std::size_t count() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend auto operator<=>(const Valuation&, const Valuation&) = default;
  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// "{At(Father,Home), Has(Father,Present)}"
std::string to_string(const Valuation& v, const Vocabulary& vocab);

}  // namespace delp
