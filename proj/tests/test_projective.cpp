#include <gtest/gtest.h>

#include <sstream>

#include "ktflag/harness.hpp"
#include "ktflag/projective.hpp"

using namespace ktflag;

namespace {

LaurentPoly mono(const Weight& w) { return LaurentPoly::monomial(w); }

std::vector<PnIndex> all_indices(int n) {
  std::vector<PnIndex> r;
  for (int u = 0; u <= n; ++u)
    for (int v = 0; v <= n; ++v)
      for (int w = 0; w <= n; ++w) r.push_back({n, u, v, w});
  return r;
}

}  // namespace

TEST(Series, CoefficientExtraction) {
  auto eps = pn_epsilon(2);
  std::vector<Weight> none, e1{eps[0]};
  EXPECT_EQ(series_coeff(none, e1, 1, 2), mono(eps[0]));
  EXPECT_EQ(series_coeff(none, e1, 3, 2), mono(3 * eps[0]));
  for (int p = 1; p <= 4; ++p) EXPECT_TRUE(series_coeff(e1, e1, p, 2).is_zero());
  EXPECT_EQ(series_coeff(none, none, 0, 2), LaurentPoly::constant(2, 1));
  for (int p = 1; p <= 3; ++p) EXPECT_TRUE(series_coeff(none, none, p, 2).is_zero());
  // 1/((1−tx)(1−ty)) at t² is x² + xy + y²
  std::vector<Weight> den{eps[0], eps[1]};
  EXPECT_EQ(series_coeff(none, den, 2, 2), mono(2 * eps[0]) + mono(eps[0] + eps[1]) + mono(2 * eps[1]));
}

TEST(Projective, EpsilonWeights) {
  auto rs = RootSystem::build("A3");
  auto eps = pn_epsilon(3);
  ASSERT_EQ(eps.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(eps[i] - eps[i + 1], rs->simple_root(i));
  EXPECT_TRUE((eps[0] + eps[1] + eps[2] + eps[3]).is_zero());
}

TEST(Projective, CorollaryValues) {
  for (int n = 1; n <= 5; ++n) {
    auto eps = pn_epsilon(n);
    for (int w = 0; w <= n; ++w) {
      EXPECT_EQ(pn_p_closed({n, w, 0, w}), mono(eps[w] - eps[0]));
      if (w >= 1) { EXPECT_EQ(pn_p_closed({n, w - 1, 0, w}), -mono(eps[w] - eps[0])); }
    }
  }
  auto eps = pn_epsilon(1);
  EXPECT_EQ(-pn_p_closed({1, 1, 1, 1}), mono(eps[1] - eps[0]) - LaurentPoly::constant(1, 1));
}

TEST(Projective, TopCornerProduct) {
  // (−1)^n p^n_{n,n} = ∏_{i≤n}(e^{ε_{n+1}−ε_i} − 1) and p^w_{n,n} = 0 for w < n
  for (int n = 1; n <= 5; ++n) {
    auto eps = pn_epsilon(n);
    LaurentPoly prod = LaurentPoly::constant(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) prod *= exp_minus_one(eps[n] - eps[i]);
    EXPECT_EQ(LaurentPoly::constant(static_cast<std::size_t>(n), sign_pow(n)) * pn_p_closed({n, n, n, n}), prod);
    for (int w = 0; w < n; ++w) EXPECT_TRUE(pn_p_closed({n, n, n, w}).is_zero());
  }
}

TEST(Projective, ClosedFormsMatchLocalization) {
  for (int n = 1; n <= 3; ++n) {
    auto X = pn_space(n);
    for (const auto& idx : all_indices(n)) {
      auto pt = [&](int i) { return X->point(static_cast<std::size_t>(i)); };
      auto w = static_cast<std::size_t>(idx.w);
      EXPECT_EQ(pn_p_closed(idx), X->structure_constants(pt(idx.u), pt(idx.v), Family::P)[w]);
      EXPECT_EQ(pn_b(idx), X->structure_constants(pt(idx.u), pt(idx.v), Family::B)[w]);
      EXPECT_EQ(pn_b(idx, true), pn_b(idx));
    }
  }
}

TEST(Projective, RecurrencesMatchClosedForms) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& idx : all_indices(n)) {
      EXPECT_EQ(pn_p_recur(idx), pn_p_closed(idx));
      EXPECT_EQ(pn_r_recur(idx), pn_r_closed(idx));
    }
}

TEST(Projective, RecurrenceWithShiftedWeights) {
  // the recursive step evaluates at (ε_2, …, ε_{n+1}); check the substitution path directly
  auto eps = pn_epsilon(4);
  std::vector<Weight> shifted(eps.begin() + 1, eps.end());
  for (int u = 0; u <= 3; ++u)
    for (int v = 0; v <= 3; ++v)
      for (int w = 0; w <= 3; ++w) {
        PnIndex idx{3, u, v, w};
        EXPECT_EQ(pn_p_tilde_recur(idx, shifted), pn_p_tilde_closed(idx, shifted));
        EXPECT_EQ(pn_r_tilde_recur(idx, shifted), pn_r_tilde_closed(idx, shifted));
      }
  EXPECT_TRUE(detail::p_tilde_rec(-1, 0, 0, eps).is_zero());
  EXPECT_TRUE(detail::p_tilde_rec(0, -1, 0, eps).is_zero());
  EXPECT_TRUE(detail::p_tilde_rec(0, 0, -1, eps).is_zero());
}

TEST(Projective, RInitialValuesAndSupport) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& idx : all_indices(n)) {
      auto r = pn_r_closed(idx);
      auto p = pn_p_closed(idx);
      if (idx.v == 0) { EXPECT_EQ(r, LaurentPoly::constant(static_cast<std::size_t>(n), idx.u == idx.w ? 1 : 0)); }
      if (!r.is_zero()) {
        EXPECT_LE(idx.u, idx.w);
        EXPECT_LE(idx.v, idx.w);
        EXPECT_LE(idx.w, idx.u + idx.v);
      }
      if (!p.is_zero()) {
        EXPECT_LE(idx.u, idx.w);
        EXPECT_LE(idx.v, idx.w);
        EXPECT_LE(idx.w, idx.u + idx.v + 1);
      }
      EXPECT_EQ(p, pn_p_closed({n, idx.v, idx.u, idx.w}));
    }
}

TEST(Projective, IndexChecks) {
  EXPECT_THROW(pn_p_closed({2, 3, 0, 0}), DomainError);
  EXPECT_THROW(pn_r_closed({2, 0, -1, 0}), DomainError);
  EXPECT_THROW(pn_space(7), DomainError);
}

TEST(Projective, XiAsLineBundlePolynomial) {
  for (int n = 1; n <= 3; ++n) {
    auto X = pn_space(n);
    for (int v = 0; v <= n; ++v) EXPECT_EQ(pn_xi_linebundle(v, *X), X->xi(X->point(static_cast<std::size_t>(v))));
    for (int i = 1; i <= n + 1; ++i) EXPECT_EQ(X->euler_char(pn_hyperplane_class(i, *X)), LaurentPoly::constant(static_cast<std::size_t>(n), 1));
  }
}

TEST(Projective, QTildeRecurrenceAndDifferenceIdentity) {
  for (int n = 2; n <= 3; ++n) {
    auto X = pn_space(n);
    auto Y = pn_space(n - 1);
    auto eps = pn_epsilon(n);
    auto q = [&](int u, int v, int w) -> LaurentPoly {
      if (u < 0 || v < 0 || w < 0 || u > n - 1 || v > n - 1 || w > n - 1) return LaurentPoly(static_cast<std::size_t>(n));
      return pn_levi_shift(pn_q_tilde({n - 1, u, v, w}, *Y), Y->roots(), X->roots());
    };
    for (int u = 0; u <= n; ++u)
      for (int v = 1; v <= n; ++v)
        for (int w = 1; w <= n; ++w) {
          // q̃^w_{u,v} = (e^{ε_{u+1}−ε_1} − 1)q̃^{w−1}_{u−1,v−1}(ε_2,…) + e^{ε_{u+1}−ε_1}q̃^{w−1}_{u,v−1}(ε_2,…)
          Weight d = eps[static_cast<std::size_t>(u)] - eps[0];
          LaurentPoly rhs = exp_minus_one(d) * q(u - 1, v - 1, w - 1) + mono(d) * q(u, v - 1, w - 1);
          EXPECT_EQ(pn_q_tilde({n, u, v, w}, *X), rhs) << n << " " << u << v << w;
        }
  }
  for (int n = 1; n <= 3; ++n) {
    auto X = pn_space(n);
    for (const auto& idx : all_indices(n))
      EXPECT_EQ(pn_p_closed(idx), pn_chi_richardson_xi(idx.u, idx.v, idx.w, *X) - pn_chi_richardson_xi(idx.u + 1, idx.v, idx.w, *X));
  }
}

TEST(Projective, Stability) {
  for (int n = 1; n <= 4; ++n)
    for (int m = n + 1; m <= 6; ++m) {
      auto rn = RootSystem::build("A" + std::to_string(n));
      auto rm = RootSystem::build("A" + std::to_string(m));
      for (const auto& idx : all_indices(n)) {
        EXPECT_EQ(pn_embed(pn_p_closed(idx), *rn, *rm), pn_p_closed({m, idx.u, idx.v, idx.w}));
        EXPECT_EQ(pn_embed(pn_r_closed(idx), *rn, *rm), pn_r_closed({m, idx.u, idx.v, idx.w}));
      }
    }
}

TEST(Projective, NonEquivariantValues) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& idx : all_indices(n)) {
      Coeff f = forgetful(pn_p_closed(idx));
      if (idx.u + idx.v == idx.w) { EXPECT_EQ(f, 1); }
      if (idx.u + idx.v + 1 == idx.w) { EXPECT_EQ(f, -1); }
      if (idx.u + idx.v > idx.w) { EXPECT_EQ(f, 0); }
    }
}

TEST(Projective, RenderY) {
  auto rs = RootSystem::build("A2");
  auto eps = pn_epsilon(2);
  EXPECT_EQ(render_y(mono(eps[1] - eps[0]) - LaurentPoly::constant(2, 1), *rs), "y21 - 1");
  EXPECT_EQ(render_y(LaurentPoly(2), *rs), "0");
}

TEST(Projective, Tables) {
  std::string csv = emit_pn_table(3, PnFamily::P, PnForm::Closed, TableFormat::Csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,u,v,w,coefficient");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    int n, u, v, w;
    char c;
    std::istringstream ls(line);
    ls >> n >> c >> u >> c >> v >> c >> w >> c;
    std::string coef;
    std::getline(ls, coef);
    if (line.substr(line.rfind(',') + 1) != "0") {
      EXPECT_LE(u, w);
      EXPECT_LE(v, w);
      EXPECT_LE(w, u + v + 1);
    }
  }
  EXPECT_EQ(rows, 64);
  EXPECT_EQ(csv, emit_pn_table(3, PnFamily::P, PnForm::Recurrence, TableFormat::Csv));
  EXPECT_EQ(emit_pn_table(2, PnFamily::R, PnForm::Closed, TableFormat::Json), emit_pn_table(2, PnFamily::R, PnForm::Recurrence, TableFormat::Json));
  auto j = json::parse(emit_pn_table(2, PnFamily::Q, PnForm::Closed, TableFormat::Json));
  EXPECT_EQ(j.size(), 27u);
}
