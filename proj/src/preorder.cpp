#include "agler/preorder.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "agler/types.hpp"

namespace agler {

MultiIndex::MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), "multi-index must have at least one entry");
}

MultiIndex MultiIndex::zero(std::size_t d) { return MultiIndex(std::vector<unsigned>(d, 0)); }

MultiIndex MultiIndex::unit(std::size_t d, std::size_t i) {
  require(i < d, "unit index out of range");
  std::vector<unsigned> e(d, 0);
  e[i] = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::ones(std::size_t d) { return MultiIndex(std::vector<unsigned>(d, 1)); }

unsigned MultiIndex::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0u);
}

bool MultiIndex::is_binary() const {
  return std::all_of(entries_.begin(), entries_.end(), [](unsigned v) { return v <= 1; });
}

bool MultiIndex::leq(const MultiIndex& other) const {
  require(dim() == other.dim(), "multi-index dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (entries_[i] > other.entries_[i]) return false;
  return true;
}

MultiIndex MultiIndex::plus_unit(std::size_t i) const {
  require(i < dim(), "unit index out of range");
  auto e = entries_;
  ++e[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  require(dim() == other.dim(), "multi-index dimension mismatch");
  auto e = entries_;
  for (std::size_t i = 0; i < dim(); ++i) e[i] += other.entries_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

Preordering::Preordering(std::vector<MultiIndex> elements) : elements_(std::move(elements)) {
  require(!elements_.empty(), "preordering must be nonempty");
  const std::size_t d = elements_.front().dim();
  for (const auto& e : elements_) require(e.dim() == d, "preordering elements differ in dimension");
  std::sort(elements_.begin(), elements_.end());
  require(std::adjacent_find(elements_.begin(), elements_.end()) == elements_.end(),
          "preordering contains duplicate elements");
  for (std::size_t i = 0; i < d; ++i) {
    bool covered = std::any_of(elements_.begin(), elements_.end(),
                               [i](const MultiIndex& e) { return e[i] >= 1; });
    require(covered, "preordering leaves coordinate " + std::to_string(i + 1) + " undominated");
  }
}

Preordering Preordering::classical(std::size_t d) {
  std::vector<MultiIndex> els;
  for (std::size_t i = 0; i < d; ++i) els.push_back(MultiIndex::unit(d, i));
  return Preordering(std::move(els));
}

Preordering Preordering::standard_ample(std::size_t d) { return Preordering({MultiIndex::ones(d)}); }

bool Preordering::contains(const MultiIndex& lambda) const {
  return std::binary_search(elements_.begin(), elements_.end(), lambda);
}

std::vector<MultiIndex> predecessors(const MultiIndex& lambda) {
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(lambda.dim(), 0);
  // Odometer over the box [0, λ]; the last slot varies fastest, which yields
  // lexicographic order.
  while (true) {
    out.emplace_back(cur);
    std::size_t i = lambda.dim();
    while (i > 0 && cur[i - 1] == lambda[i - 1]) {
      cur[i - 1] = 0;
      --i;
    }
    if (i == 0) return out;
    ++cur[i - 1];
  }
}

Preordering maximal_closure(const Preordering& p) {
  std::set<MultiIndex> all;
  for (const auto& g : p.elements())
    for (auto& mu : predecessors(g)) all.insert(std::move(mu));
  return Preordering(std::vector<MultiIndex>(all.begin(), all.end()));
}

Preordering minimal_reduction(const Preordering& p) {
  std::vector<MultiIndex> maximal;
  const auto& els = p.elements();
  for (std::size_t i = 0; i < els.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < els.size() && !dominated; ++j)
      dominated = (i != j) && els[i].leq(els[j]);
    if (!dominated) maximal.push_back(els[i]);
  }
  return Preordering(std::move(maximal));
}

Classification classify(const Preordering& p) {
  Classification c;
  const auto maximal = minimal_reduction(p).elements();
  const std::size_t d = p.dim();
  if (maximal.size() == 1) {
    c.top = maximal.front();
    c.kind = (maximal.front() == MultiIndex::ones(d)) ? PreorderKind::kStandardAmple
                                                       : PreorderKind::kAmple;
    return c;
  }
  if (maximal.size() == 2) {
    const auto& a = maximal[0];
    const auto& b = maximal[1];
    for (std::size_t l1 = 0; l1 < d; ++l1) {
      for (std::size_t l2 = 0; l2 < d; ++l2) {
        if (l1 == l2) continue;
        auto top = a.plus_unit(l1);
        if (top == b.plus_unit(l2)) {
          c.top = top;
          c.maximal_pair = std::make_pair(a, b);
          c.kind = (top == MultiIndex::ones(d)) ? PreorderKind::kStandardNearlyAmple
                                                : PreorderKind::kNearlyAmple;
          return c;
        }
      }
    }
  }
  return c;
}

std::string to_string(PreorderKind kind) {
  switch (kind) {
    case PreorderKind::kAmple: return "ample";
    case PreorderKind::kStandardAmple: return "standard-ample";
    case PreorderKind::kNearlyAmple: return "nearly-ample";
    case PreorderKind::kStandardNearlyAmple: return "standard-nearly-ample";
    case PreorderKind::kGeneral: return "general";
  }
  return "general";
}

ParitySplit parity_split(const MultiIndex& lambda) {
  require(!lambda.is_zero(), "parity split of the zero tuple is undefined");
  require(lambda.is_binary(), "parity split requires 0/1 entries, got " + lambda.to_string());
  ParitySplit out;
  for (auto& mu : predecessors(lambda)) {
    if (mu.total() % 2 == 0)
      out.even.push_back(std::move(mu));
    else
      out.odd.push_back(std::move(mu));
  }
  return out;
}

}  // namespace agler
