#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "agler/preorder.hpp"
#include "agler/types.hpp"

using agler::MultiIndex;
using agler::Preordering;
using agler::PreorderKind;

namespace {

MultiIndex mi(std::vector<unsigned> v) { return MultiIndex(std::move(v)); }

std::set<MultiIndex> as_set(const Preordering& p) { return {p.elements().begin(), p.elements().end()}; }

// Brute-force down-closure: scan the full box below the componentwise max.
std::set<MultiIndex> brute_closure(const std::vector<MultiIndex>& gens) {
  const std::size_t d = gens.front().dim();
  std::vector<unsigned> hi(d, 0);
  for (const auto& g : gens)
    for (std::size_t i = 0; i < d; ++i) hi[i] = std::max(hi[i], g[i]);
  std::set<MultiIndex> out;
  std::vector<unsigned> cur(d, 0);
  while (true) {
    MultiIndex c(cur);
    for (const auto& g : gens)
      if (c.leq(g)) out.insert(c);
    std::size_t i = 0;
    while (i < d && cur[i] == hi[i]) cur[i++] = 0;
    if (i == d) break;
    ++cur[i];
  }
  return out;
}

std::vector<MultiIndex> dedupe(std::vector<MultiIndex> el) {
  std::sort(el.begin(), el.end());
  el.erase(std::unique(el.begin(), el.end()), el.end());
  return el;
}

Preordering random_preordering(std::mt19937_64& rng, std::size_t d, unsigned max_entry, int count) {
  std::uniform_int_distribution<unsigned> e(0, max_entry);
  std::vector<MultiIndex> el;
  for (int k = 0; k < count; ++k) {
    std::vector<unsigned> v(d);
    for (auto& x : v) x = e(rng);
    el.emplace_back(v);
  }
  for (std::size_t i = 0; i < d; ++i) el.push_back(MultiIndex::unit(d, i));
  return Preordering(dedupe(std::move(el)));
}

}  // namespace

TEST_CASE("multi-index basics") {
  const auto l = mi({1, 0, 2});
  CHECK(l.total() == 3);
  CHECK_FALSE(l.is_binary());
  CHECK(MultiIndex::ones(3).is_binary());
  CHECK(MultiIndex::unit(3, 1) == mi({0, 1, 0}));
  CHECK(mi({1, 0, 1}).leq(mi({1, 1, 1})));
  CHECK_FALSE(mi({1, 0, 1}).leq(mi({1, 1, 0})));
  CHECK(mi({0, 1}) < mi({1, 0}));
  CHECK(l.plus_unit(1) == mi({1, 1, 2}));
  CHECK_THROWS_AS(MultiIndex(std::vector<unsigned>{}), agler::Error);
}

TEST_CASE("preordering validation") {
  CHECK_THROWS_AS(Preordering({mi({1, 0})}), agler::Error);
  CHECK_THROWS_AS(Preordering({mi({1, 0}), mi({0, 1, 0})}), agler::Error);
  CHECK_THROWS_AS(Preordering({mi({0, 1}), mi({1, 0}), mi({0, 1})}), agler::Error);
  const Preordering p({mi({0, 1}), mi({1, 0})});
  CHECK(p.size() == 2);
}

TEST_CASE("maximal closure examples") {
  CHECK(as_set(maximal_closure(Preordering({mi({1, 1})}))) ==
        std::set<MultiIndex>{mi({0, 0}), mi({0, 1}), mi({1, 0}), mi({1, 1})});
  CHECK(as_set(maximal_closure(Preordering({mi({1, 0}), mi({0, 1})}))) ==
        std::set<MultiIndex>{mi({0, 0}), mi({1, 0}), mi({0, 1})});
  const std::vector<MultiIndex> gens = {mi({1, 1, 0}), mi({1, 0, 1})};
  const auto closure = maximal_closure(Preordering(gens));
  CHECK(closure.size() == 6);
  CHECK(as_set(closure) == brute_closure(gens));
}

TEST_CASE("minimal reduction examples") {
  CHECK(as_set(minimal_reduction(Preordering({mi({0, 0}), mi({1, 0}), mi({1, 1})}))) ==
        std::set<MultiIndex>{mi({1, 1})});
  const Preordering anti({mi({1, 0}), mi({0, 1})});
  CHECK(minimal_reduction(anti) == anti);
}

TEST_CASE("classification examples") {
  auto c = classify(Preordering({mi({1, 1, 1})}));
  CHECK(c.kind == PreorderKind::kStandardAmple);
  CHECK(*c.top == mi({1, 1, 1}));

  c = classify(Preordering({mi({1, 1, 0}), mi({1, 0, 1})}));
  CHECK(c.kind == PreorderKind::kStandardNearlyAmple);
  CHECK(*c.top == mi({1, 1, 1}));
  CHECK(c.maximal_pair.has_value());

  c = classify(Preordering({mi({1, 0}), mi({0, 1})}));
  CHECK(c.kind == PreorderKind::kStandardNearlyAmple);
  CHECK(*c.top == mi({1, 1}));

  CHECK(classify(Preordering({mi({2, 1})})).kind == PreorderKind::kAmple);
  CHECK(classify(Preordering({mi({2, 0}), mi({1, 1})})).kind == PreorderKind::kNearlyAmple);
  CHECK(classify(Preordering::classical(3)).kind == PreorderKind::kGeneral);
  CHECK(classify(Preordering({mi({1, 1, 0}), mi({0, 0, 1})})).kind == PreorderKind::kGeneral);
}

TEST_CASE("parity split examples") {
  auto s = parity_split(mi({1, 1}));
  CHECK(s.even == std::vector<MultiIndex>{mi({0, 0}), mi({1, 1})});
  CHECK(s.odd == std::vector<MultiIndex>{mi({0, 1}), mi({1, 0})});

  s = parity_split(mi({1, 0, 1}));
  CHECK(s.even == std::vector<MultiIndex>{mi({0, 0, 0}), mi({1, 0, 1})});
  CHECK(s.odd == std::vector<MultiIndex>{mi({0, 0, 1}), mi({1, 0, 0})});

  s = parity_split(mi({1, 1, 1}));
  CHECK(s.even.size() == 4);
  CHECK(s.odd.size() == 4);
  CHECK(s.even.front() == MultiIndex::zero(3));

  CHECK_THROWS_AS(parity_split(MultiIndex::zero(2)), agler::Error);
  CHECK_THROWS_AS(parity_split(mi({2, 0})), agler::Error);
}

TEST_CASE("predecessors enumerate the box in lexicographic order") {
  const auto p = agler::predecessors(mi({2, 0, 1}));
  CHECK(p.size() == 6);
  CHECK(std::is_sorted(p.begin(), p.end()));
  CHECK(p.front() == MultiIndex::zero(3));
  CHECK(p.back() == mi({2, 0, 1}));
}

TEST_CASE("property: closure idempotent, monotone, sandwiches the reduction") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const auto p = random_preordering(rng, d, 3, 1 + trial % 5);
    const auto closure = maximal_closure(p);
    const auto reduction = minimal_reduction(p);
    CHECK(maximal_closure(closure) == closure);
    CHECK(as_set(closure) == brute_closure(p.elements()));
    CHECK(maximal_closure(reduction) == closure);
    for (const auto& l : reduction.elements()) CHECK(p.contains(l));
    for (const auto& l : p.elements()) CHECK(closure.contains(l));
    // Antichain: no two reduction elements are comparable.
    for (const auto& a : reduction.elements())
      for (const auto& b : reduction.elements())
        if (!(a == b)) CHECK_FALSE(a.leq(b));

    // Monotone under inclusion: adding elements only grows the closure.
    auto bigger = p.elements();
    const auto extra = random_preordering(rng, d, 3, 1);
    bigger.insert(bigger.end(), extra.elements().begin(), extra.elements().end());
    const auto big_closure = maximal_closure(Preordering(dedupe(bigger)));
    for (const auto& l : closure.elements()) CHECK(big_closure.contains(l));
  }
}

TEST_CASE("property: random down-closed sets reduce to antichains") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto closure = maximal_closure(random_preordering(rng, 3, 2, 3));
    std::vector<MultiIndex> el = closure.elements();
    std::shuffle(el.begin(), el.end(), rng);
    if (el.size() > 20) el.resize(20);
    for (std::size_t i = 0; i < 3; ++i) el.push_back(MultiIndex::unit(3, i));
    const Preordering p(dedupe(el));
    const auto r = minimal_reduction(p);
    for (const auto& a : p.elements()) {
      bool dominated = false;
      for (const auto& b : r.elements()) dominated = dominated || a.leq(b);
      CHECK(dominated);
    }
    CHECK(maximal_closure(r) == maximal_closure(p));
  }
}

TEST_CASE("property: parity split partitions the predecessors") {
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<unsigned> e(5);
    for (unsigned i = 0; i < 5; ++i) e[i] = (mask >> i) & 1u;
    const MultiIndex l(e);
    const auto s = parity_split(l);
    CHECK(s.even.size() == s.odd.size());
    CHECK(s.even.size() == (1u << (l.total() - 1)));
    std::set<MultiIndex> all(s.even.begin(), s.even.end());
    all.insert(s.odd.begin(), s.odd.end());
    const auto pred = agler::predecessors(l);
    CHECK(all == std::set<MultiIndex>(pred.begin(), pred.end()));
    for (const auto& m : s.even) CHECK(m.total() % 2 == 0);
    for (const auto& m : s.odd) CHECK(m.total() % 2 == 1);
  }
}
