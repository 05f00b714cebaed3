#include <gtest/gtest.h>

#include "ktflag/serialize.hpp"

using namespace ktflag;

TEST(Serialize, LaurentRoundTrip) {
  auto f = LaurentPoly::from_terms(2, {{{1, -1}, 3}, {{0, 0}, -2}, {{-2, 5}, 7}});
  json j = to_json(f);
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(laurent_from_json(json::parse(j.dump()), 2), f);
  EXPECT_EQ(to_json(LaurentPoly(2)), json::array());
  EXPECT_THROW(laurent_from_json(j, 3), RankMismatch);
}

TEST(Serialize, WordRoundTrip) {
  auto rs = RootSystem::build("B2");
  for (auto w : rs->elements()) EXPECT_EQ(word_from_json(*rs, word_json(*rs, w)), w);
  EXPECT_EQ(word_json(*rs, rs->identity()), json::array());
}

TEST(Serialize, ExpansionRoundTrip) {
  auto rs = RootSystem::build("A2");
  auto X = FlagVariety::create(rs);
  for (auto u : rs->elements())
    for (auto v : rs->elements()) {
      auto e = X->structure_constants(u, v, Family::C);
      auto back = expansion_from_json(json::parse(to_json(e).dump()), *X);
      EXPECT_EQ(back.coef, e.coef);
    }
}

TEST(Serialize, CertificateRoundTrip) {
  auto rs = RootSystem::build("G2");
  ConeCertifier cc(rs);
  LaurentPoly f = LaurentPoly::constant(2, 3);
  for (const auto& b : rs->positive_roots()) f += 2 * exp_minus_one(-b) * exp_minus_one(-rs->simple_root(1));
  auto r = cc.certify(f, ConeSign::NegativeRoots);
  ASSERT_EQ(r.verdict, Verdict::Member);
  auto c = certificate_from_json(json::parse(to_json(r).dump()), ConeSign::NegativeRoots);
  EXPECT_EQ(expand_certificate(c, *rs), f);
  EXPECT_EQ(c.terms.size(), r.cert.terms.size());

  ConeResult no{Verdict::NotMember, {}, 0, ""};
  EXPECT_EQ(to_json(no), (json{{"member", false}}));
  ConeResult unk{Verdict::Unknown, {}, 42, "cap"};
  EXPECT_EQ(to_json(unk).at("nodes"), 42);
}

TEST(Serialize, RenderX) {
  auto rs = RootSystem::build("A2");
  Weight a1 = rs->simple_root(0), a2 = rs->simple_root(1);
  EXPECT_EQ(render_x(LaurentPoly(2), *rs), "0");
  EXPECT_EQ(render_x(LaurentPoly::constant(2, -3), *rs), "-3");
  auto f = LaurentPoly::monomial(-a1 - a2) - LaurentPoly::constant(2, 1);
  std::string s = render_x(f, *rs);
  EXPECT_NE(s.find("x1^-1*x2^-1"), std::string::npos) << s;
  EXPECT_NE(s.find("1"), std::string::npos);
  EXPECT_EQ(render_x(2 * LaurentPoly::monomial(a1), *rs), "2*x1");
  EXPECT_THROW(render_x(LaurentPoly::monomial(rs->fundamental_weight(0)), *rs), DomainError);
}
