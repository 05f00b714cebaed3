#pragma once

// Fixed-point localization model of K_T(G/P). A class is the tuple of its
// restrictions to the T-fixed points wP, w ∈ W^P.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ktflag/error.hpp"
#include "ktflag/lattice.hpp"
#include "ktflag/roots.hpp"

namespace ktflag {

class FlagVariety;
using FlagVarietyPtr = std::shared_ptr<const FlagVariety>;

inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

enum class Variant { Ordinary, Opposite };

/// Bases of K_T(G/P) that expansions can target. Dualizing is the basis of
/// opposite dualizing classes [ω_{X^w}] (full flag only).
enum class Basis { OrdinaryO, OppositeO, DualXi, Dualizing };

enum class Family { P, B, C, D };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::P: return "p";
    case Family::B: return "b";
    case Family::C: return "c";
    case Family::D: return "d";
  }
  return "?";
}

/// The four sign/side choices for the divided-difference operator:
///   RightPlus:  (γ(v) − e^{vα}γ(vs))/(1 − e^{vα})
///   RightMinus: (γ(v) − e^{−vα}γ(vs))/(1 − e^{−vα})
///   LeftPlus:   (γ(v) − e^{α}γ(sv))/(1 − e^{α})
///   LeftMinus:  (γ(v) − e^{−α}γ(sv))/(1 − e^{−α})
enum class DemazureVariant { RightPlus, RightMinus, LeftPlus, LeftMinus };

inline const char* variant_name(DemazureVariant v) {
  switch (v) {
    case DemazureVariant::RightPlus: return "right,+";
    case DemazureVariant::RightMinus: return "right,-";
    case DemazureVariant::LeftPlus: return "left,+";
    case DemazureVariant::LeftMinus: return "left,-";
  }
  return "?";
}

struct GKMClass {
  const FlagVariety* space = nullptr;
  std::vector<LaurentPoly> vals;  // indexed by fixed-point position in W^P

  const LaurentPoly& operator[](std::size_t i) const { return vals[i]; }
  std::size_t size() const { return vals.size(); }
  bool is_zero() const {
    return std::all_of(vals.begin(), vals.end(), [](const LaurentPoly& p) { return p.is_zero(); });
  }

  friend GKMClass operator+(const GKMClass& a, const GKMClass& b) { return zip(a, b, [](auto& x, auto& y) { return x + y; }); }
  friend GKMClass operator-(const GKMClass& a, const GKMClass& b) { return zip(a, b, [](auto& x, auto& y) { return x - y; }); }
  friend GKMClass operator*(const GKMClass& a, const GKMClass& b) { return zip(a, b, [](auto& x, auto& y) { return x * y; }); }
  friend GKMClass operator*(const LaurentPoly& k, const GKMClass& a) {
    GKMClass r = a;
    for (auto& v : r.vals) v = k * v;
    return r;
  }
  GKMClass operator-() const {
    GKMClass r = *this;
    for (auto& v : r.vals) v = -v;
    return r;
  }
  friend bool operator==(const GKMClass& a, const GKMClass& b) { return a.space == b.space && a.vals == b.vals; }

 private:
  template <typename F>
  static GKMClass zip(const GKMClass& a, const GKMClass& b, F f) {
    if (a.space != b.space) throw DomainError("classes live on different flag varieties");
    GKMClass r{a.space, {}};
    r.vals.reserve(a.vals.size());
    for (std::size_t i = 0; i < a.vals.size(); ++i) r.vals.push_back(f(a.vals[i], b.vals[i]));
    return r;
  }
};

/// Pointwise involution; the class of the dual bundle.
inline GKMClass star(const GKMClass& g) {
  GKMClass r = g;
  for (auto& v : r.vals) v = star(v);
  return r;
}

/// Coefficients of an expansion, indexed like the fixed points of `space`.
struct ExpansionCoeffs {
  const FlagVariety* space = nullptr;
  std::vector<LaurentPoly> coef;

  const LaurentPoly& operator[](std::size_t i) const { return coef[i]; }
  std::size_t size() const { return coef.size(); }
  friend bool operator==(const ExpansionCoeffs& a, const ExpansionCoeffs& b) {
    return a.space == b.space && a.coef == b.coef;
  }
};

/// d = unit·e^{shift}·∏(1 − e^{γ}); division by d is a chain of binomial
/// divisions. `general` holds d itself when it does not factor that way.
struct FactoredDivisor {
  Coeff unit = 1;
  Weight shift;
  std::vector<Weight> binomials;
  std::optional<LaurentPoly> general;

  static FactoredDivisor factor(const LaurentPoly& d, const RootSystem& rs) {
    if (d.is_zero()) throw DomainError("zero diagonal restriction");
    FactoredDivisor f;
    LaurentPoly rest = d;
    for (const auto& g : rs.positive_roots()) {
      while (rest.size() > 1) {
        auto q = try_divide_one_minus_exp(rest, g);
        if (!q) break;
        f.binomials.push_back(g);
        rest = *std::move(q);
      }
    }
    if (rest.size() == 1) {
      f.unit = rest.terms()[0].c;
      f.shift = rest.terms()[0].w;
    } else {
      f.general = d;
      f.binomials.clear();
    }
    return f;
  }

  std::optional<LaurentPoly> try_divide_into(const LaurentPoly& x) const {
    if (general) return try_divide(x, *general);
    LaurentPoly r = x;
    for (const auto& g : binomials) {
      auto q = try_divide_one_minus_exp(r, g);
      if (!q) return std::nullopt;
      r = *std::move(q);
    }
    for (const auto& t : r.terms())
      if (t.c % unit != 0) return std::nullopt;
    std::vector<Term> out;
    out.reserve(r.size());
    for (const auto& t : r.terms()) out.push_back({t.w - shift, t.c / unit});
    return LaurentPoly::from_terms(x.rank(), std::move(out));
  }
};

/// Restrictions of the full-flag Schubert classes [O_{X_w}] built by a chosen
/// divided-difference variant; result[w][v] is the value at vB. Returns
/// nullopt if some division is inexact.
inline std::optional<std::vector<std::vector<LaurentPoly>>> demazure_classes(const RootSystem& rs, DemazureVariant var) {
  const std::size_t n = rs.order(), r = rs.rank();
  std::vector<std::vector<LaurentPoly>> cls(n);
  LaurentPoly point = LaurentPoly::constant(r, 1);
  for (const auto& b : rs.positive_roots()) point *= one_minus_exp(b);
  cls[0].assign(n, LaurentPoly(r));
  cls[0][0] = point;
  for (std::uint32_t w = 1; w < n; ++w) {
    const auto& wd = rs.word({w});
    std::size_t i = wd.back();
    const auto& prev = cls[rs.mul_simple_right({w}, i).id];
    auto& out = cls[w];
    out.resize(n, LaurentPoly(r));
    for (std::uint32_t v = 0; v < n; ++v) {
      Weight a(r);
      std::uint32_t partner;
      switch (var) {
        case DemazureVariant::RightPlus:
          a = rs.act({v}, rs.simple_root(i));
          partner = rs.mul_simple_right({v}, i).id;
          break;
        case DemazureVariant::RightMinus:
          a = -rs.act({v}, rs.simple_root(i));
          partner = rs.mul_simple_right({v}, i).id;
          break;
        case DemazureVariant::LeftPlus:
          a = rs.simple_root(i);
          partner = rs.mul_simple_left(i, {v}).id;
          break;
        default:
          a = -rs.simple_root(i);
          partner = rs.mul_simple_left(i, {v}).id;
          break;
      }
      LaurentPoly num = prev[v] - prev[partner].scaled_shift(a);
      auto q = try_divide_one_minus_exp(num, a);
      if (!q) return std::nullopt;
      out[v] = *std::move(q);
    }
  }
  return cls;
}

class FlagVariety {
 public:
  static FlagVarietyPtr create(RootSystemPtr rs, SimpleSubset s = {}) {
    for (auto i : s.indices())
      if (i >= rs->rank()) throw DomainError("parabolic index out of range");
    return FlagVarietyPtr(new FlagVariety(std::move(rs), s));
  }

  const RootSystem& roots() const { return *rs_; }
  RootSystemPtr roots_ptr() const { return rs_; }
  SimpleSubset parabolic() const { return s_; }
  bool is_full() const { return s_.empty(); }
  std::size_t rank() const { return rs_->rank(); }
  std::size_t num_points() const { return points_.size(); }
  const std::vector<WeylElem>& points() const { return points_; }
  WeylElem point(std::size_t i) const { return points_[i]; }
  /// dim G/P = ℓ(w_o) − ℓ(w_{o,S}).
  int dimension() const { return static_cast<int>(tangent_.size()); }

  bool contains(WeylElem w) const { return pos_[w.id] >= 0; }
  std::size_t index_of(WeylElem w) const {
    if (pos_[w.id] < 0) throw DomainError(rs_->word_str(w) + " is not a minimal coset representative");
    return static_cast<std::size_t>(pos_[w.id]);
  }
  int length(std::size_t i) const { return rs_->length(points_[i]); }
  bool leq(std::size_t a, std::size_t b) const { return rs_->bruhat_leq(points_[a], points_[b]); }

  /// Möbius function of the Bruhat poset restricted to W^P.
  int mobius(std::size_t a, std::size_t b) const { return mobius_[a][b]; }

  const FlagVariety& full_flag() const { return s_.empty() ? *this : *full_; }

  // ---- basic classes ----

  GKMClass zero() const { return GKMClass{this, std::vector<LaurentPoly>(num_points(), LaurentPoly(rank()))}; }
  GKMClass constant(const LaurentPoly& c) const { return GKMClass{this, std::vector<LaurentPoly>(num_points(), c)}; }
  GKMClass one() const { return constant(LaurentPoly::constant(rank(), 1)); }

  /// [L(λ)] with L(λ) = G ×_P C_{λ^{-1}}; restriction at w is e^{−wλ}.
  GKMClass line_bundle(const Weight& lambda) const {
    for (auto i : s_.indices())
      if (lambda[i] != 0) throw DomainError("weight " + lambda.str() + " does not extend to a character of P");
    GKMClass g = zero();
    for (std::size_t i = 0; i < num_points(); ++i) g.vals[i] = LaurentPoly::monomial(-rs_->act(points_[i], lambda));
    return g;
  }

  const GKMClass& schubert(WeylElem w, Variant var) const {
    ensure_schubert();
    return var == Variant::Ordinary ? ordinary_[index_of(w)] : opposite_[index_of(w)];
  }

  /// ξ^v = Σ_{w ≥ v} μ(v,w)[O_{X^w}], the basis dual to the ordinary Schubert basis.
  const GKMClass& xi(WeylElem v) const {
    ensure_xi();
    return xi_[index_of(v)];
  }

  /// Full flag only: [ω_{X^w}] = e^ρ[L(−ρ)]ξ^w and
  /// [ω_{X_w}] = e^{−ρ}[L(−ρ)]·Σ_{v≤w} μ(v,w)[O_{X_v}].
  const GKMClass& dualizing(WeylElem w, Variant var) const {
    require_full("dualizing classes");
    ensure_dualizing();
    return var == Variant::Opposite ? dual_opp_[index_of(w)] : dual_ord_[index_of(w)];
  }

  /// [ω_{G/B}] as the opposite dualizing class at the identity.
  const GKMClass& canonical() const { return dualizing(rs_->identity(), Variant::Opposite); }

  const GKMClass& basis_element(std::size_t i, Basis b) const {
    switch (b) {
      case Basis::OrdinaryO: return schubert(points_[i], Variant::Ordinary);
      case Basis::OppositeO: return schubert(points_[i], Variant::Opposite);
      case Basis::DualXi: return xi(points_[i]);
      case Basis::Dualizing: return dualizing(points_[i], Variant::Opposite);
    }
    throw DomainError("unknown basis");
  }

  // ---- localization ----

  LaurentPoly euler_char(const GKMClass& g) const {
    check_space(g);
    LaurentPoly num(rank());
    for (std::size_t i = 0; i < num_points(); ++i)
      if (!g.vals[i].is_zero()) num += g.vals[i] * euler_mult_[i];
    for (const auto& b : euler_denominator_) {
      auto q = try_divide_one_minus_exp(num, b);
      if (!q) throw InexactDivision("localization sum is not a Laurent polynomial; class violates GKM conditions");
      num = *std::move(q);
    }
    return num;
  }

  LaurentPoly pairing(const GKMClass& a, const GKMClass& b) const { return euler_char(a * b); }

  /// For each w ∈ W^P and positive root β with w' = min-coset-rep(s_β w) ≠ w,
  /// γ(w) − γ(w') must be divisible by 1 − e^{β}. Returns a description of
  /// the first violation, or nullopt.
  std::optional<std::string> gkm_violation(const GKMClass& g) const {
    check_space(g);
    const auto& pos = rs_->positive_roots();
    for (std::size_t i = 0; i < num_points(); ++i)
      for (std::size_t b = 0; b < pos.size(); ++b) {
        WeylElem w2 = rs_->min_coset_rep(rs_->mul(rs_->reflection(b), points_[i]), s_);
        std::size_t j = index_of(w2);
        if (j <= i) continue;
        if (!try_divide_one_minus_exp(g.vals[i] - g.vals[j], pos[b]))
          return "points " + rs_->word_str(points_[i]) + " and " + rs_->word_str(w2) + " along root " + pos[b].str();
      }
    return std::nullopt;
  }

  // ---- expansions ----

  /// Unique coefficients of g in the chosen basis, by Bruhat-triangular
  /// elimination with exact division by diagonal restrictions.
  ExpansionCoeffs expand(const GKMClass& g, Basis b) const {
    check_space(g);
    ensure_divisors(b);
    const auto& divs = divisors_[static_cast<int>(b)];
    const bool upward = b != Basis::OrdinaryO;
    std::vector<LaurentPoly> res = g.vals;
    ExpansionCoeffs out{this, std::vector<LaurentPoly>(num_points(), LaurentPoly(rank()))};
    const std::size_t n = num_points();
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t y = upward ? step : n - 1 - step;
      if (res[y].is_zero()) continue;
      auto c = divs[y].try_divide_into(res[y]);
      if (!c) throw InexactDivision("class is not in the span of the basis at " + rs_->word_str(points_[y]));
      const GKMClass& be = basis_element(y, b);
      for (std::size_t z = 0; z < n; ++z)
        if (!be.vals[z].is_zero()) res[z] -= *c * be.vals[z];
      out.coef[y] = *std::move(c);
    }
    for (const auto& r : res)
      if (!r.is_zero()) throw InexactDivision("nonzero residual after triangular elimination");
    return out;
  }

  /// Coefficients by pairing with the dual basis: ordinary coefficients are
  /// ⟨g, ξ^w⟩ and ξ coefficients are ⟨g, [O_{X_w}]⟩.
  ExpansionCoeffs expand_by_pairing(const GKMClass& g, Basis b) const {
    if (b != Basis::OrdinaryO && b != Basis::DualXi) throw DomainError("pairing expansion needs a basis with known dual");
    ExpansionCoeffs out{this, {}};
    for (std::size_t i = 0; i < num_points(); ++i)
      out.coef.push_back(pairing(g, b == Basis::OrdinaryO ? xi(points_[i]) : schubert(points_[i], Variant::Ordinary)));
    return out;
  }

  GKMClass combine(const ExpansionCoeffs& e, Basis b) const {
    GKMClass g = zero();
    for (std::size_t i = 0; i < num_points(); ++i)
      if (!e.coef[i].is_zero()) g = g + e.coef[i] * basis_element(i, b);
    return g;
  }

  /// Structure constants of the chosen family for the product of basis
  /// elements at u and v; entry w of the result is the coefficient at w.
  ExpansionCoeffs structure_constants(WeylElem u, WeylElem v, Family f) const {
    switch (f) {
      case Family::P: return expand(xi(u) * xi(v), Basis::DualXi);
      case Family::B: return expand(schubert(u, Variant::Ordinary) * schubert(v, Variant::Ordinary), Basis::OrdinaryO);
      case Family::C: return expand(schubert(u, Variant::Opposite) * schubert(v, Variant::Opposite), Basis::OppositeO);
      case Family::D: {
        require_full("d-constants");
        GKMClass prod = dualizing(u, Variant::Opposite) * dualizing(v, Variant::Opposite);
        // [ω_{G/B}] = [L(−2ρ)]
        GKMClass k = line_bundle(-(rs_->rho() + rs_->rho()));
        for (std::size_t i = 0; i < num_points(); ++i) prod.vals[i] = exact_divide(prod.vals[i], k.vals[i]);
        return expand(prod, Basis::Dualizing);
      }
    }
    throw DomainError("unknown family");
  }

  /// p^w_{u,v}(P) as Σ_{u'∈uW_P, v'∈vW_P} p^w_{u',v'}(B).
  ExpansionCoeffs parabolic_p_from_B(WeylElem u, WeylElem v) const {
    index_of(u);
    index_of(v);
    const FlagVariety& full = full_flag();
    ExpansionCoeffs out{this, std::vector<LaurentPoly>(num_points(), LaurentPoly(rank()))};
    for (auto u2 : rs_->coset(u, s_))
      for (auto v2 : rs_->coset(v, s_)) {
        auto pb = full.structure_constants(u2, v2, Family::P);
        for (std::size_t i = 0; i < num_points(); ++i) out.coef[i] += pb.coef[full.index_of(points_[i])];
      }
    return out;
  }

  // ---- translated and Richardson classes ----

  /// (v·g)(u) = v·(g(min-coset-rep(v^{-1}u)))
  GKMClass translate(WeylElem v, const GKMClass& g) const {
    check_space(g);
    GKMClass r = zero();
    WeylElem vinv = rs_->inverse(v);
    for (std::size_t i = 0; i < num_points(); ++i) {
      std::size_t j = index_of(rs_->min_coset_rep(rs_->mul(vinv, points_[i]), s_));
      r.vals[i] = rs_->act(v, g.vals[j]);
    }
    return r;
  }

  /// [O_{vX_w}]
  GKMClass translated_class(WeylElem v, WeylElem w) const { return translate(v, schubert(w, Variant::Ordinary)); }

  /// f^v_{w,·}: coefficients of [O_{vX_w}] in the ordinary basis.
  ExpansionCoeffs translated_coeffs(WeylElem v, WeylElem w) const {
    return expand(translated_class(v, w), Basis::OrdinaryO);
  }

  /// f^v_{w,·} by recursion on a reduced word of v, starting from
  /// f^e_{w,u} = δ_{u,w}: for vs > v,
  ///   f^{vs}_{w,·} = e^{−vα}f^v_{w,·} − (e^{−vα} − 1)f^v_{sw,·} if sw > w,
  ///   f^{vs}_{w,·} = f^v_{w,·} if sw < w.
  ExpansionCoeffs translated_coeffs_recursive(WeylElem v, WeylElem w) const {
    require_full("the translation recursion");
    const std::size_t n = num_points();
    std::vector<ExpansionCoeffs> table(n);
    for (std::size_t x = 0; x < n; ++x) {
      table[x] = ExpansionCoeffs{this, std::vector<LaurentPoly>(n, LaurentPoly(rank()))};
      table[x].coef[x] = LaurentPoly::constant(rank(), 1);
    }
    WeylElem cur = rs_->identity();
    for (auto i : rs_->word(v)) {
      Weight a = rs_->act(cur, rs_->simple_root(i));
      LaurentPoly em = LaurentPoly::monomial(-a);
      LaurentPoly em1 = em - LaurentPoly::constant(rank(), 1);
      std::vector<ExpansionCoeffs> next = table;
      for (std::size_t x = 0; x < n; ++x) {
        WeylElem sx = rs_->mul_simple_left(i, points_[x]);
        if (rs_->length(sx) < length(x)) continue;
        const auto& fx = table[x];
        const auto& fsx = table[index_of(sx)];
        for (std::size_t u = 0; u < n; ++u) next[x].coef[u] = em * fx.coef[u] - em1 * fsx.coef[u];
      }
      table = std::move(next);
      cur = rs_->mul_simple_right(cur, i);
    }
    return table[index_of(w)];
  }

  /// [O_{X_w ∩ X^v}] = [O_{X_w}]·[O_{X^v}]
  GKMClass richardson_class(WeylElem v, WeylElem w) const {
    return schubert(w, Variant::Ordinary) * schubert(v, Variant::Opposite);
  }

 private:
  FlagVariety(RootSystemPtr rs, SimpleSubset s) : rs_(std::move(rs)), s_(s) {
    points_ = rs_->min_coset_reps(s_);
    pos_.assign(rs_->order(), -1);
    for (std::size_t i = 0; i < points_.size(); ++i) pos_[points_[i].id] = static_cast<int>(i);
    if (!s_.empty()) full_ = create(rs_, {});
    const auto& pos = rs_->positive_roots();
    for (const auto& b : pos)
      if (!rs_->in_levi(b, s_)) tangent_.push_back(b);
    compute_mobius();
    compute_euler_data();
  }

  void compute_mobius() {
    const std::size_t n = points_.size();
    mobius_.assign(n, std::vector<int>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
      mobius_[a][a] = 1;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!leq(a, b)) continue;
        int s = 0;
        for (std::size_t z = a; z < b; ++z)
          if (leq(a, z) && leq(z, b)) s += mobius_[a][z];
        mobius_[a][b] = -s;
      }
    }
  }

  // Tangent factor at w: 1 − e^{wβ}. Writing 1 − e^{−γ} = −e^{−γ}(1 − e^{γ})
  // for negative wβ = −γ puts every point over the common denominator
  // ∏_{γ∈U}(1 − e^{γ}) with U ⊆ Δ⁺.
  void compute_euler_data() {
    const std::size_t r = rank();
    std::vector<std::vector<Weight>> dv(points_.size());
    std::vector<Coeff> sign(points_.size(), 1);
    std::vector<Weight> shift(points_.size(), Weight(r));
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (const auto& b : tangent_) {
        Weight x = rs_->act(points_[i], b);
        if (rs_->is_positive_root(x)) {
          dv[i].push_back(x);
        } else {
          dv[i].push_back(-x);
          sign[i] = -sign[i];
          shift[i] -= -x;
        }
        if (std::find(euler_denominator_.begin(), euler_denominator_.end(), dv[i].back()) == euler_denominator_.end())
          euler_denominator_.push_back(dv[i].back());
      }
    std::sort(euler_denominator_.begin(), euler_denominator_.end());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      LaurentPoly m = LaurentPoly::monomial(-shift[i], sign[i]);
      for (const auto& g : euler_denominator_)
        if (std::find(dv[i].begin(), dv[i].end(), g) == dv[i].end()) m *= one_minus_exp(g);
      euler_mult_.push_back(std::move(m));
    }
  }

  void require_full(const char* what) const {
    if (!s_.empty()) throw DomainError(std::string(what) + " are implemented for the full flag variety only");
  }

  void check_space(const GKMClass& g) const {
    if (g.space != this) throw DomainError("class belongs to a different flag variety");
  }

  const std::vector<std::vector<LaurentPoly>>& full_demazure() const {
    std::call_once(demazure_once_, [this] {
      auto cls = demazure_classes(*rs_, DemazureVariant::RightPlus);
      if (!cls) throw InexactDivision("divided-difference construction failed");
      demazure_ = std::move(*cls);
    });
    return demazure_;
  }

  void ensure_schubert() const {
    std::call_once(schubert_once_, [this] {
      const FlagVariety& full = full_flag();
      const auto& dem = full.full_demazure();
      WeylElem wo = rs_->longest();
      for (auto w : points_) {
        // ordinary: pullback of X^P_w is X_{w·w_{o,S}}
        const auto& col = dem[rs_->max_coset_rep(w, s_).id];
        GKMClass o = zero();
        for (std::size_t i = 0; i < num_points(); ++i) o.vals[i] = col[points_[i].id];
        ordinary_.push_back(std::move(o));
        // opposite: X^w = w_o X_{w_o w}
        const auto& oc = dem[rs_->mul(wo, w).id];
        GKMClass p = zero();
        for (std::size_t i = 0; i < num_points(); ++i) p.vals[i] = rs_->act(wo, oc[rs_->mul(wo, points_[i]).id]);
        opposite_.push_back(std::move(p));
      }
    });
  }

  void ensure_xi() const {
    std::call_once(xi_once_, [this] {
      ensure_schubert();
      for (std::size_t v = 0; v < num_points(); ++v) {
        GKMClass g = zero();
        for (std::size_t w = v; w < num_points(); ++w) {
          int m = mobius_[v][w];
          if (m == 0) continue;
          for (std::size_t i = 0; i < num_points(); ++i)
            if (!opposite_[w].vals[i].is_zero()) g.vals[i] += static_cast<Coeff>(m) * opposite_[w].vals[i];
        }
        xi_.push_back(std::move(g));
      }
    });
  }

  void ensure_dualizing() const {
    std::call_once(dual_once_, [this] {
      ensure_xi();
      const std::size_t n = num_points();
      LaurentPoly erho = LaurentPoly::monomial(rs_->rho());
      LaurentPoly emrho = LaurentPoly::monomial(-rs_->rho());
      GKMClass lmr = line_bundle(-rs_->rho());
      for (std::size_t w = 0; w < n; ++w) {
        dual_opp_.push_back(erho * (lmr * xi_[w]));
        GKMClass s = zero();
        for (std::size_t v = 0; v <= w; ++v) {
          int m = rs_->mobius(points_[v], points_[w]);
          if (m != 0) s = s + LaurentPoly::constant(rank(), m) * ordinary_[v];
        }
        dual_ord_.push_back(emrho * (lmr * s));
      }
    });
  }

  void ensure_divisors(Basis b) const {
    auto k = static_cast<int>(b);
    std::call_once(div_once_[k], [this, b, k] {
      for (std::size_t i = 0; i < num_points(); ++i)
        divisors_[k].push_back(FactoredDivisor::factor(basis_element(i, b).vals[i], *rs_));
    });
  }

  RootSystemPtr rs_;
  SimpleSubset s_;
  FlagVarietyPtr full_;
  std::vector<WeylElem> points_;
  std::vector<int> pos_;
  std::vector<Weight> tangent_;
  std::vector<std::vector<int>> mobius_;
  std::vector<Weight> euler_denominator_;
  std::vector<LaurentPoly> euler_mult_;

  mutable std::once_flag demazure_once_, schubert_once_, xi_once_, dual_once_;
  mutable std::once_flag div_once_[4];
  mutable std::vector<std::vector<LaurentPoly>> demazure_;
  mutable std::vector<GKMClass> ordinary_, opposite_, xi_, dual_opp_, dual_ord_;
  mutable std::vector<FactoredDivisor> divisors_[4];
};

}  // namespace ktflag
