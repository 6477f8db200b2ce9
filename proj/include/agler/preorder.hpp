#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace agler {

/// A tuple of non-negative integers, one slot per test function.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> entries);

  static MultiIndex zero(std::size_t d);
  /// The unit tuple e_i (0-based `i`).
  static MultiIndex unit(std::size_t d, std::size_t i);
  /// (1,...,1)
  static MultiIndex ones(std::size_t d);

  std::size_t dim() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<unsigned>& entries() const { return entries_; }

  /// |λ|, the sum of the entries.
  unsigned total() const;
  bool is_zero() const { return total() == 0; }
  /// Every entry is 0 or 1.
  bool is_binary() const;

  /// Componentwise partial order λ ≤ μ.
  bool leq(const MultiIndex& other) const;

  MultiIndex plus_unit(std::size_t i) const;
  MultiIndex operator+(const MultiIndex& other) const;

  std::string to_string() const;

  /// Lexicographic order on the entries in index order 1..d.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> entries_;
};

/// A finite set of multi-indices of common dimension d in which every
/// coordinate direction is dominated by some element. Elements are kept
/// sorted lexicographically and unique.
class Preordering {
 public:
  explicit Preordering(std::vector<MultiIndex> elements);

  /// {e_1, ..., e_d}
  static Preordering classical(std::size_t d);
  /// {(1,...,1)}
  static Preordering standard_ample(std::size_t d);

  std::size_t dim() const { return elements_.front().dim(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<MultiIndex>& elements() const { return elements_; }
  bool contains(const MultiIndex& lambda) const;

  friend bool operator==(const Preordering&, const Preordering&) = default;

 private:
  std::vector<MultiIndex> elements_;
};

/// All tuples dominated by some element of `p`, zero included.
Preordering maximal_closure(const Preordering& p);

/// The ≤-maximal elements of `p`.
Preordering minimal_reduction(const Preordering& p);

enum class PreorderKind { kAmple, kStandardAmple, kNearlyAmple, kStandardNearlyAmple, kGeneral };

struct Classification {
  PreorderKind kind = PreorderKind::kGeneral;
  /// Largest element (ample) or the common upper neighbour (nearly ample).
  std::optional<MultiIndex> top;
  /// The two maximal elements of a nearly ample preordering.
  std::optional<std::pair<MultiIndex, MultiIndex>> maximal_pair;

  bool ample() const {
    return kind == PreorderKind::kAmple || kind == PreorderKind::kStandardAmple;
  }
  bool nearly_ample() const {
    return kind == PreorderKind::kNearlyAmple || kind == PreorderKind::kStandardNearlyAmple;
  }
};

Classification classify(const Preordering& p);

std::string to_string(PreorderKind kind);

/// Predecessors of a 0/1 multi-index split by parity of |λ'|, each list
/// lexicographically ordered. Both lists have 2^{|λ|-1} entries and the
/// even list starts with the zero tuple.
struct ParitySplit {
  std::vector<MultiIndex> even;
  std::vector<MultiIndex> odd;
};

ParitySplit parity_split(const MultiIndex& lambda);

/// Every tuple μ with μ ≤ λ, lexicographically ordered.
std::vector<MultiIndex> predecessors(const MultiIndex& lambda);

}  // namespace agler
