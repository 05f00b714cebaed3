#include <gtest/gtest.h>

#include <set>

#include "ktflag/roots.hpp"

using namespace ktflag;

namespace {

const std::vector<std::string> kTags = {"A1", "A2", "A3", "A4", "A1xA1", "B2", "G2"};

// Inversions: positive roots sent to negative roots.
int inversions(const RootSystem& rs, WeylElem w) {
  int n = 0;
  for (const auto& b : rs.positive_roots())
    if (!rs.in_positive_cone(rs.act(w, b))) ++n;
  return n;
}

// Subword property: v ≤ w iff some subword of a reduced word of w multiplies to v.
bool subword_leq(const RootSystem& rs, WeylElem v, WeylElem w) {
  const auto& word = rs.word(w);
  const std::size_t n = word.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    WeylElem x = rs.identity();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) x = rs.mul_simple_right(x, word[i]);
    if (x == v) return true;
  }
  return false;
}

}  // namespace

TEST(Roots, Classification) {
  EXPECT_EQ(RootSystem::build("A2")->order(), 6u);
  EXPECT_EQ(RootSystem::build("A2")->positive_roots().size(), 3u);
  EXPECT_EQ(RootSystem::build("G2")->order(), 12u);
  EXPECT_EQ(RootSystem::build("G2")->positive_roots().size(), 6u);
  auto a3 = RootSystem::build("A3");
  EXPECT_EQ(a3->order(), 24u);
  EXPECT_EQ(a3->length(a3->longest()), 6);
  EXPECT_EQ(RootSystem::build("B2")->positive_roots().size(), 4u);
  EXPECT_EQ(RootSystem::build("B2")->order(), 8u);
  EXPECT_EQ(RootSystem::build("A1xA1")->order(), 4u);
  for (int n = 1; n <= 6; ++n)
    EXPECT_EQ(RootSystem::build("A" + std::to_string(n))->positive_roots().size(), static_cast<std::size_t>(n * (n + 1) / 2));
}

TEST(Roots, UnknownTagThrows) {
  EXPECT_THROW(RootSystem::build("E8"), UnsupportedType);
  EXPECT_THROW(RootSystem::build("A9"), UnsupportedType);
}

TEST(Roots, PositiveRootsInQPlusAndRho) {
  for (const auto& t : kTags) {
    auto rs = RootSystem::build(t);
    Weight sum = rs->zero_weight();
    for (const auto& b : rs->positive_roots()) {
      auto k = rs->root_coords(b);
      ASSERT_TRUE(k.has_value());
      for (auto x : *k) EXPECT_GE(x, 0) << t << " " << b.str();
      EXPECT_EQ(rs->from_root_coords(*k), b);
      sum += b;
    }
    // 2ρ = Σ_{β>0} β and ρ = Σ ω_i
    EXPECT_EQ(sum, rs->rho() + rs->rho()) << t;
    Weight fs = rs->zero_weight();
    for (std::size_t i = 0; i < rs->rank(); ++i) fs += rs->fundamental_weight(i);
    EXPECT_EQ(fs, rs->rho());
  }
}

TEST(Roots, SimpleReflections) {
  auto rs = RootSystem::build("A2");
  Weight a1 = rs->simple_root(0), a2 = rs->simple_root(1);
  EXPECT_EQ(rs->act(rs->simple(0), a1), -a1);
  EXPECT_EQ(rs->act(rs->simple(0), a2), a1 + a2);
  auto f = LaurentPoly::monomial(a1) + LaurentPoly::constant(2, 3);
  EXPECT_EQ(rs->act(rs->identity(), f), f);
}

TEST(Roots, LengthIsInversionCount) {
  for (const auto& t : kTags) {
    auto rs = RootSystem::build(t);
    EXPECT_EQ(rs->length(rs->identity()), 0);
    for (auto w : rs->elements()) {
      EXPECT_EQ(rs->length(w), inversions(*rs, w)) << t << " " << rs->word_str(w);
      for (std::size_t i = 0; i < rs->rank(); ++i) EXPECT_EQ(std::abs(rs->length(rs->mul_simple_right(w, i)) - rs->length(w)), 1);
    }
  }
}

TEST(Roots, LongestElement) {
  for (const auto& t : kTags) {
    auto rs = RootSystem::build(t);
    WeylElem wo = rs->longest();
    EXPECT_EQ(rs->length(wo), static_cast<int>(rs->positive_roots().size()));
    EXPECT_EQ(rs->mul(wo, wo), rs->identity());
    int count = 0;
    for (auto w : rs->elements())
      if (rs->length(w) == rs->length(wo)) ++count;
    EXPECT_EQ(count, 1);
  }
}

TEST(Roots, GroupLaws) {
  for (const auto& t : {"A3", "B2", "G2"}) {
    auto rs = RootSystem::build(t);
    for (auto a : rs->elements()) {
      EXPECT_EQ(rs->mul(a, rs->inverse(a)), rs->identity());
      Weight x = rs->rho() + rs->fundamental_weight(0);
      for (auto b : rs->elements()) EXPECT_EQ(rs->act(rs->mul(a, b), x), rs->act(a, rs->act(b, x)));
    }
  }
}

TEST(Roots, Reflections) {
  for (const auto& t : kTags) {
    auto rs = RootSystem::build(t);
    for (std::size_t j = 0; j < rs->positive_roots().size(); ++j) {
      WeylElem r = rs->reflection(j);
      EXPECT_EQ(rs->mul(r, r), rs->identity());
      EXPECT_EQ(rs->act(r, rs->positive_roots()[j]), -rs->positive_roots()[j]);
    }
  }
}

TEST(Roots, BruhatMatchesSubwordProperty) {
  for (const auto& t : {"A2", "A3", "B2", "G2", "A1xA1"}) {
    auto rs = RootSystem::build(t);
    for (auto v : rs->elements())
      for (auto w : rs->elements()) EXPECT_EQ(rs->bruhat_leq(v, w), subword_leq(*rs, v, w)) << t;
  }
  auto rs = RootSystem::build("A2");
  for (auto w : rs->elements()) EXPECT_TRUE(rs->bruhat_leq(rs->identity(), w));
  EXPECT_FALSE(rs->bruhat_leq(rs->simple(0), rs->simple(1)));
  EXPECT_TRUE(rs->bruhat_leq(rs->parse_word("s1s2"), rs->longest()));
}

TEST(Roots, MobiusFunction) {
  for (const auto& t : {"A2", "A3", "B2", "G2"}) {
    auto rs = RootSystem::build(t);
    for (auto v : rs->elements()) {
      EXPECT_EQ(rs->mobius(v, v), 1);
      for (auto w : rs->elements()) {
        // μ(v,w) = (−1)^{ℓ(w)−ℓ(v)} on the interval
        int want = rs->bruhat_leq(v, w) ? ((rs->length(w) - rs->length(v)) % 2 ? -1 : 1) : 0;
        EXPECT_EQ(rs->mobius(v, w), want);
        int s = 0;
        for (auto th : rs->elements())
          if (rs->bruhat_leq(th, w)) s += rs->mobius(v, th);
        EXPECT_EQ(s, v == w ? 1 : 0);
      }
    }
    for (std::size_t i = 0; i < rs->rank(); ++i) EXPECT_EQ(rs->mobius(rs->identity(), rs->simple(i)), -1);
  }
}

TEST(Roots, MinimalCosetRepresentatives) {
  auto rs = RootSystem::build("A2");
  EXPECT_EQ(rs->min_coset_reps({}).size(), 6u);
  EXPECT_EQ(rs->min_coset_reps(SimpleSubset::all(2)), std::vector<WeylElem>{rs->identity()});
  auto reps = rs->min_coset_reps(SimpleSubset{1});
  std::set<std::string> got;
  for (auto w : reps) got.insert(rs->word_str(w));
  EXPECT_EQ(got, (std::set<std::string>{"e", "s1", "s2s1"}));

  // brute force: the shortest element of each left coset wW_S
  for (const auto& t : {"A3", "B2", "G2"}) {
    auto r = RootSystem::build(t);
    for (auto s : all_subsets(r->rank())) {
      std::set<std::uint32_t> expect;
      for (auto w : r->elements()) {
        WeylElem best = w;
        for (auto x : r->parabolic_subgroup(s)) {
          WeylElem y = r->mul(w, x);
          if (r->length(y) < r->length(best)) best = y;
        }
        expect.insert(best.id);
        EXPECT_EQ(r->min_coset_rep(w, s), best);
      }
      std::set<std::uint32_t> have;
      for (auto w : r->min_coset_reps(s)) {
        have.insert(w.id);
        EXPECT_TRUE(r->is_min_coset_rep(w, s));
        EXPECT_EQ(r->coset(w, s).size(), r->parabolic_subgroup(s).size());
      }
      EXPECT_EQ(have, expect);
    }
  }
}

TEST(Roots, WordsRoundTrip) {
  for (const auto& t : kTags) {
    auto rs = RootSystem::build(t);
    for (auto w : rs->elements()) {
      EXPECT_EQ(rs->parse_word(rs->word_str(w)), w);
      EXPECT_EQ(static_cast<int>(rs->word(w).size()), rs->length(w));
    }
  }
  auto rs = RootSystem::build("A2");
  EXPECT_EQ(rs->parse_word("e"), rs->identity());
  EXPECT_THROW(rs->parse_word("t1"), DomainError);
}

TEST(Roots, SimpleSubsetParsing) {
  EXPECT_EQ(SimpleSubset::parse("", 3), SimpleSubset{});
  EXPECT_EQ(SimpleSubset::parse("1,3", 3), (SimpleSubset{0, 2}));
  EXPECT_EQ((SimpleSubset{0, 2}).str(), "1,3");
  EXPECT_THROW(SimpleSubset::parse("4", 3), DomainError);
  EXPECT_THROW(SimpleSubset::parse("x", 3), DomainError);
}

TEST(Roots, RhoComplement) {
  auto rs = RootSystem::build("A3");
  EXPECT_EQ(rs->rho_complement({}), rs->rho());
  EXPECT_EQ(rs->rho_complement(SimpleSubset{1, 2}), rs->fundamental_weight(0));
}
