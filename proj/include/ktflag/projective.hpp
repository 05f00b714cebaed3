#pragma once

// Structure constants of K_T(ℙⁿ), ℙⁿ = SL_{n+1}/P with P the stabilizer of
// a line: closed forms as coefficient extraction in an auxiliary variable t,
// the recurrences in n, and their localization counterparts.
//
// The fixed point u ∈ [n] is s_u⋯s_1. All formulas take an explicit weight
// list μ_1..μ_{n+1}; the default is ε_1..ε_{n+1} with ε_i = ω_i − ω_{i−1}.

#include <cstdint>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ktflag/error.hpp"
#include "ktflag/gkm.hpp"
#include "ktflag/lattice.hpp"
#include "ktflag/roots.hpp"

namespace ktflag {

/// Power series Σ c_k t^k with R(T) coefficients, truncated after t^D.
class TruncatedSeries {
 public:
  TruncatedSeries(std::size_t rank, int order) : rank_(rank), c_(static_cast<std::size_t>(order) + 1, LaurentPoly(rank)) {
    c_[0] = LaurentPoly::constant(rank, 1);
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  LaurentPoly coeff(int k) const {
    if (k < 0 || k > order()) return LaurentPoly(rank_);
    return c_[static_cast<std::size_t>(k)];
  }

  /// *= (1 − t e^λ)
  void mul_linear(const Weight& lambda) {
    for (int k = order(); k >= 1; --k) c_[k] -= c_[k - 1].scaled_shift(lambda);
  }

  /// /= (1 − t e^μ)
  void div_linear(const Weight& mu) {
    for (int k = 1; k <= order(); ++k) c_[k] += c_[k - 1].scaled_shift(mu);
  }

 private:
  std::size_t rank_;
  std::vector<LaurentPoly> c_;
};

/// [∏(1 − t e^{λ}) / ∏(1 − t e^{μ})]_p
inline LaurentPoly series_coeff(std::span<const Weight> num, std::span<const Weight> den, int p, std::size_t rank) {
  if (p < 0) return LaurentPoly(rank);
  TruncatedSeries s(rank, p);
  for (const auto& l : num) s.mul_linear(l);
  for (const auto& m : den) s.div_linear(m);
  return s.coeff(p);
}

struct PnIndex {
  int n = 0, u = 0, v = 0, w = 0;
  void check() const {
    if (n < 1 || u < 0 || v < 0 || w < 0 || u > n || v > n || w > n)
      throw DomainError("index (" + std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(w) +
                        ") out of range for dimension " + std::to_string(n));
  }
};

/// ε_1..ε_{n+1} in the fundamental-weight lattice of A_n.
inline std::vector<Weight> pn_epsilon(int n) {
  std::vector<Weight> e;
  for (int i = 1; i <= n + 1; ++i) {
    Weight w(static_cast<std::size_t>(n));
    if (i <= n) w[i - 1] += 1;
    if (i >= 2) w[i - 2] -= 1;
    e.push_back(w);
  }
  return e;
}

namespace detail {

/// χ_k = μ_1 + … + μ_k
inline Weight partial_sum(std::span<const Weight> mu, int k, std::size_t rank) {
  Weight s(rank);
  for (int i = 0; i < k; ++i) s += mu[static_cast<std::size_t>(i)];
  return s;
}

/// e^{χ_a − χ_b − χ_c}[∏_{i≤u}(1−te^{μ_i})∏_{i≤v}(1−te^{μ_i}) / ∏_{i≤d}(1−te^{μ_i})]_p
inline LaurentPoly pn_bracket(std::span<const Weight> mu, int u, int v, int d, int a, int b, int c, int p) {
  const std::size_t rank = mu[0].rank();
  if (p < 0) return LaurentPoly(rank);
  std::vector<Weight> num, den;
  for (int i = 0; i < u; ++i) num.push_back(mu[static_cast<std::size_t>(i)]);
  for (int i = 0; i < v; ++i) num.push_back(mu[static_cast<std::size_t>(i)]);
  for (int i = 0; i < d; ++i) den.push_back(mu[static_cast<std::size_t>(i)]);
  LaurentPoly br = series_coeff(num, den, p, rank);
  return br.scaled_shift(partial_sum(mu, a, rank) - partial_sum(mu, b, rank) - partial_sum(mu, c, rank));
}

inline void check_weights(const PnIndex& idx, std::span<const Weight> mu) {
  if (mu.size() < static_cast<std::size_t>(idx.n) + 1) throw DomainError("weight list shorter than n+1");
}

}  // namespace detail

/// p̃^w_{u,v} = (−1)^{u+v+w} p^w_{u,v}
///   = e^{χ_{w+1}−χ_{u+1}−χ_{v+1}}[∏_{i≤u}(1−te^{μ_i})∏_{i≤v}(1−te^{μ_i})/∏_{i≤w+1}(1−te^{μ_i})]_{u+v−w+1}
inline LaurentPoly pn_p_tilde_closed(const PnIndex& idx, std::span<const Weight> mu) {
  idx.check();
  detail::check_weights(idx, mu);
  return detail::pn_bracket(mu, idx.u, idx.v, idx.w + 1, idx.w + 1, idx.u + 1, idx.v + 1, idx.u + idx.v - idx.w + 1);
}

inline LaurentPoly pn_p_closed(const PnIndex& idx, std::span<const Weight> mu) {
  return LaurentPoly::constant(mu[0].rank(), sign_pow(idx.u + idx.v + idx.w)) * pn_p_tilde_closed(idx, mu);
}

inline LaurentPoly pn_p_closed(const PnIndex& idx) { return pn_p_closed(idx, pn_epsilon(idx.n)); }

namespace detail {

// Indices are taken relative to the weight list: μ[0] plays the role of μ_1.
inline LaurentPoly p_tilde_rec(int u, int v, int w, std::span<const Weight> mu) {
  const std::size_t rank = mu[0].rank();
  if (u < 0 || v < 0 || w < 0 || u > w || v > w) return LaurentPoly(rank);
  const Weight& m1 = mu[0];
  if (v == 0) {
    if (u == w || u == w - 1) return LaurentPoly::monomial(mu[static_cast<std::size_t>(w)] - m1);
    return LaurentPoly(rank);
  }
  auto rest = mu.subspan(1);
  LaurentPoly a = exp_minus_one(mu[static_cast<std::size_t>(u)] - m1) * p_tilde_rec(u - 1, v - 1, w - 1, rest);
  LaurentPoly b = p_tilde_rec(u, v - 1, w - 1, rest);
  if (b.is_zero()) return a;
  return a + b.scaled_shift(mu[static_cast<std::size_t>(u) + 1] - m1);
}

inline LaurentPoly r_tilde_rec(int u, int v, int w, std::span<const Weight> mu) {
  const std::size_t rank = mu[0].rank();
  if (u < 0 || v < 0 || w < 0 || u > w || v > w) return LaurentPoly(rank);
  const Weight& m1 = mu[0];
  if (v == 0) return LaurentPoly::constant(rank, u == w ? 1 : 0);
  auto rest = mu.subspan(1);
  LaurentPoly a = exp_minus_one(mu[static_cast<std::size_t>(u)] - m1) * r_tilde_rec(u - 1, v - 1, w - 1, rest);
  LaurentPoly b = r_tilde_rec(u, v - 1, w - 1, rest).scaled_shift(mu[static_cast<std::size_t>(u)] - m1);
  return a + b;
}

}  // namespace detail

/// p̃ by the recurrence in n:
///   p̃^w_{u,v}(μ) = (e^{μ_{u+1}−μ_1} − 1)p̃^{w−1}_{u−1,v−1}(μ_2,…) + e^{μ_{u+2}−μ_1}p̃^{w−1}_{u,v−1}(μ_2,…)
/// with p̃^w_{u,0} = e^{μ_{w+1}−μ_1} for u ∈ {w−1, w} and 0 otherwise.
inline LaurentPoly pn_p_tilde_recur(const PnIndex& idx, std::span<const Weight> mu) {
  idx.check();
  detail::check_weights(idx, mu);
  return detail::p_tilde_rec(idx.u, idx.v, idx.w, mu);
}

inline LaurentPoly pn_p_recur(const PnIndex& idx, std::span<const Weight> mu) {
  return LaurentPoly::constant(mu[0].rank(), sign_pow(idx.u + idx.v + idx.w)) * pn_p_tilde_recur(idx, mu);
}

inline LaurentPoly pn_p_recur(const PnIndex& idx) { return pn_p_recur(idx, pn_epsilon(idx.n)); }

/// r̃^w_{u,v} = (−1)^{u+v+w} r^w_{u,v}
///   = e^{χ_w−χ_u−χ_v}[∏_{i≤u}(1−te^{μ_i})∏_{i≤v}(1−te^{μ_i})/∏_{i≤w+1}(1−te^{μ_i})]_{u+v−w}
inline LaurentPoly pn_r_tilde_closed(const PnIndex& idx, std::span<const Weight> mu) {
  idx.check();
  detail::check_weights(idx, mu);
  return detail::pn_bracket(mu, idx.u, idx.v, idx.w + 1, idx.w, idx.u, idx.v, idx.u + idx.v - idx.w);
}

inline LaurentPoly pn_r_closed(const PnIndex& idx, std::span<const Weight> mu) {
  return LaurentPoly::constant(mu[0].rank(), sign_pow(idx.u + idx.v + idx.w)) * pn_r_tilde_closed(idx, mu);
}

inline LaurentPoly pn_r_closed(const PnIndex& idx) { return pn_r_closed(idx, pn_epsilon(idx.n)); }

/// r̃ by the recurrence
///   r̃^w_{u,v}(μ) = (e^{μ_{u+1}−μ_1} − 1)r̃^{w−1}_{u−1,v−1}(μ_2,…) + e^{μ_{u+1}−μ_1}r̃^{w−1}_{u,v−1}(μ_2,…)
/// with r̃^w_{u,0} = δ_{u,w}.
inline LaurentPoly pn_r_tilde_recur(const PnIndex& idx, std::span<const Weight> mu) {
  idx.check();
  detail::check_weights(idx, mu);
  return detail::r_tilde_rec(idx.u, idx.v, idx.w, mu);
}

inline LaurentPoly pn_r_recur(const PnIndex& idx, std::span<const Weight> mu) {
  return LaurentPoly::constant(mu[0].rank(), sign_pow(idx.u + idx.v + idx.w)) * pn_r_tilde_recur(idx, mu);
}

inline LaurentPoly pn_r_recur(const PnIndex& idx) { return pn_r_recur(idx, pn_epsilon(idx.n)); }

/// w_o of SL_{n+1}: ε_i ↦ ε_{n+2−i}, i.e. ω_i ↦ −ω_{n+1−i}.
inline LaurentPoly pn_longest_act(const LaurentPoly& f, int n) {
  return f.map_weights([n](const Weight& w) {
    Weight r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(n - 1 - i)] = -w[static_cast<std::size_t>(i)];
    return r;
  });
}

/// b^w_{u,v} = w_o(r^{n−w}_{n−u,n−v})
inline LaurentPoly pn_b(const PnIndex& idx, bool recurrence = false) {
  idx.check();
  PnIndex bar{idx.n, idx.n - idx.u, idx.n - idx.v, idx.n - idx.w};
  return pn_longest_act(recurrence ? pn_r_recur(bar) : pn_r_closed(bar), idx.n);
}

/// The simple roots of ℙⁿ's Levi: S = {2, …, n} (1-based).
inline SimpleSubset pn_parabolic(int n) {
  std::uint32_t m = 0;
  for (int i = 1; i < n; ++i) m |= 1u << i;
  return SimpleSubset(m);
}

/// Localization model of ℙⁿ; fixed point u sits at position u.
inline FlagVarietyPtr pn_space(int n) {
  if (n < 1 || n > 6) throw DomainError("projective dimension must be between 1 and 6");
  return FlagVariety::create(RootSystem::build("A" + std::to_string(n)), pn_parabolic(n));
}

/// ξ^v = e^{−ε_{v+1}}[L(−ε_1)]∏_{i≤v}(1 − e^{−ε_i}[L(−ε_1)]) for v < n and
/// ξ^n = ∏_{i≤n}(1 − e^{−ε_i}[L(−ε_1)]), evaluated in the given ℙⁿ model.
inline GKMClass pn_xi_linebundle(int v, const FlagVariety& X) {
  const int n = static_cast<int>(X.rank());
  if (v < 0 || v > n) throw DomainError("index out of range");
  auto eps = pn_epsilon(n);
  GKMClass L = X.line_bundle(-eps[0]);
  GKMClass g = X.one();
  for (int i = 0; i < v; ++i) g = g * (X.one() - LaurentPoly::monomial(-eps[static_cast<std::size_t>(i)]) * L);
  if (v < n) g = LaurentPoly::monomial(-eps[static_cast<std::size_t>(v)]) * (L * g);
  return g;
}

/// [O_{Y_i}] = 1 − e^{−ε_i}[L(−ε_1)], i = 1..n+1.
inline GKMClass pn_hyperplane_class(int i, const FlagVariety& X) {
  auto eps = pn_epsilon(static_cast<int>(X.rank()));
  return X.one() - LaurentPoly::monomial(-eps.at(static_cast<std::size_t>(i - 1))) * X.line_bundle(-eps[0]);
}

/// q̃^w_{u,v} = (−1)^{u+v+w} χ(X_w ∩ X^u, ξ^v), by localization.
inline LaurentPoly pn_q_tilde(const PnIndex& idx, const FlagVariety& X) {
  idx.check();
  auto pt = [&](int i) { return X.point(static_cast<std::size_t>(i)); };
  LaurentPoly chi = X.euler_char(X.richardson_class(pt(idx.u), pt(idx.w)) * X.xi(pt(idx.v)));
  return LaurentPoly::constant(X.rank(), sign_pow(idx.u + idx.v + idx.w)) * chi;
}

/// χ(X_w ∩ X^u, ξ^v), with X^{n+1} = ∅.
inline LaurentPoly pn_chi_richardson_xi(int u, int v, int w, const FlagVariety& X) {
  const int n = static_cast<int>(X.rank());
  if (u > n) return LaurentPoly(X.rank());
  auto pt = [&](int i) { return X.point(static_cast<std::size_t>(i)); };
  return X.euler_char(X.richardson_class(pt(u), pt(w)) * X.xi(pt(v)));
}

/// Root-lattice embedding A_n -> A_m (n ≤ m) keeping ε_1..ε_{n+1}.
inline LaurentPoly pn_embed(const LaurentPoly& f, const RootSystem& from, const RootSystem& to) {
  if (to.rank() < from.rank()) throw DomainError("embedding into a smaller lattice");
  return f.map_weights(to.rank(), [&](const Weight& w) {
    auto k = from.root_coords(w);
    if (!k) throw DomainError("weight " + w.str() + " is not in the root lattice");
    k->resize(to.rank(), 0);
    return to.from_root_coords(*k);
  });
}

/// Root-lattice shift A_{n−1} -> A_n, ε_i ↦ ε_{i+1}.
inline LaurentPoly pn_levi_shift(const LaurentPoly& f, const RootSystem& from, const RootSystem& to) {
  if (to.rank() != from.rank() + 1) throw DomainError("shift must raise the rank by one");
  return f.map_weights(to.rank(), [&](const Weight& w) {
    auto k = from.root_coords(w);
    if (!k) throw DomainError("weight " + w.str() + " is not in the root lattice");
    k->insert(k->begin(), 0);
    return to.from_root_coords(*k);
  });
}

/// Renders a root-lattice element in y_{ij} = e^{ε_i − ε_j}: each weight's
/// ε-coordinates are split greedily into pairs (positive i, negative j).
inline std::string render_y(const LaurentPoly& f, const RootSystem& rs) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    auto k = rs.root_coords(t.w);
    if (!k) throw DomainError("weight " + t.w.str() + " is not in the root lattice");
    std::vector<std::int64_t> c(k->size() + 1, 0);  // ε-coordinates
    for (std::size_t j = 0; j < k->size(); ++j) {
      c[j] += (*k)[j];
      c[j + 1] -= (*k)[j];
    }
    std::vector<std::string> factors;
    std::size_t i = 0, j = 0;
    while (true) {
      while (i < c.size() && c[i] <= 0) ++i;
      while (j < c.size() && c[j] >= 0) ++j;
      if (i == c.size() || j == c.size()) break;
      std::int64_t m = std::min(c[i], -c[j]);
      std::string y = "y" + std::to_string(i + 1) + std::to_string(j + 1);
      if (m > 1) y += "^" + std::to_string(m);
      factors.push_back(y);
      c[i] -= m;
      c[j] += m;
    }
    Coeff a = t.c < 0 ? -t.c : t.c;
    os << (first ? (t.c < 0 ? "-" : "") : (t.c < 0 ? " - " : " + "));
    std::string body;
    for (std::size_t q = 0; q < factors.size(); ++q) body += (q ? "*" : "") + factors[q];
    if (body.empty()) {
      os << a;
    } else {
      if (a != 1) os << a << '*';
      os << body;
    }
    first = false;
  }
  return os.str();
}

}  // namespace ktflag
