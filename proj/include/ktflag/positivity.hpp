#pragma once

// Membership in the cones ℤ₊[e^{−β}−1] and ℤ₊[e^{β}−1] (β ∈ Δ⁺), with
// explicit certificates. The positive convention reduces to the negative one
// through the involution.
//
// With y_j = e^{−α_j} − 1 every generator e^{−β} − 1 = ∏(1 + y_j)^{k_j} − 1
// has nonnegative coefficients in y, and the y_j are generators themselves.
// So the cone equals ℤ₊[y_1, ..., y_r], and f is a member iff its expansion
// in the y_j has nonnegative coefficients. That expansion is the default
// certificate.
//
// KostantSearch is an independent decision procedure over all of Δ⁺. In
// simple-root coordinates k (weight −Σ k_j α_j) a cone monomial
// ∏(e^{−β}−1)^{n_β} has its unique extreme term at k = Σ n_β β with
// coefficient +1 and all other terms componentwise below it. The residual's
// top term (maximal height, lexicographic tie-break) therefore comes only from
// monomials whose extreme term sits exactly there; its coefficient must be
// nonnegative and is distributed over the Kostant partitions of that weight.
// The search enumerates these choices exhaustively up to a node cap.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ktflag/error.hpp"
#include "ktflag/lattice.hpp"
#include "ktflag/roots.hpp"

namespace ktflag {

enum class ConeSign { NegativeRoots, PositiveRoots };

inline const char* cone_sign_name(ConeSign s) {
  return s == ConeSign::NegativeRoots ? "negative_roots" : "positive_roots";
}

struct CertTerm {
  std::map<int, int> exps;  // positive-root index -> exponent
  Coeff coef = 0;
  friend bool operator==(const CertTerm&, const CertTerm&) = default;
};

struct Certificate {
  ConeSign sign = ConeSign::NegativeRoots;
  std::vector<CertTerm> terms;
};

enum class Strategy { SimpleRootNormalForm, KostantSearch };

enum class Verdict { Member, NotMember, Unknown };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Member: return "member";
    case Verdict::NotMember: return "not_member";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct ConeResult {
  Verdict verdict = Verdict::Unknown;
  Certificate cert;  // meaningful for Member only
  std::uint64_t nodes = 0;
  std::string reason;
};

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000;

/// Σ c ∏_β (e^{∓β} − 1)^{n_β}
inline LaurentPoly expand_certificate(const Certificate& cert, const RootSystem& rs) {
  const auto& pos = rs.positive_roots();
  const std::size_t r = rs.rank();
  LaurentPoly total(r);
  for (const auto& t : cert.terms) {
    LaurentPoly m = LaurentPoly::constant(r, t.coef);
    for (auto [b, n] : t.exps) {
      if (b < 0 || static_cast<std::size_t>(b) >= pos.size()) throw DomainError("certificate root index out of range");
      Weight w = cert.sign == ConeSign::NegativeRoots ? -pos[b] : pos[b];
      LaurentPoly g = exp_minus_one(w);
      for (int k = 0; k < n; ++k) m *= g;
    }
    total += m;
  }
  return total;
}

/// supp(f) ⊆ −Q⁺ (negative convention) or Q⁺; the ring ℤ[e^{∓β}−1] equals
/// ℤ[e^{∓α_i}].
inline bool ring_membership(const LaurentPoly& f, ConeSign sign, const RootSystem& rs) {
  for (const auto& t : f.terms())
    if (!rs.in_positive_cone(sign == ConeSign::NegativeRoots ? -t.w : t.w)) return false;
  return true;
}

/// f ∈ Σ_{β∈Q⁺} ℤ₊e^{−β}: nonnegative coefficients on −Q⁺.
inline bool monomial_cone_member(const LaurentPoly& f, const RootSystem& rs) {
  return ring_membership(f, ConeSign::NegativeRoots, rs) &&
         std::all_of(f.terms().begin(), f.terms().end(), [](const Term& t) { return t.c > 0; });
}

/// Reusable certifier for one root system; caches Kostant partitions and
/// monomial expansions. Safe to share between threads.
class ConeCertifier {
 public:
  explicit ConeCertifier(RootSystemPtr rs) : rs_(std::move(rs)) {
    for (const auto& b : rs_->positive_roots()) {
      auto k = *rs_->root_coords(b);
      Weight kw(rs_->rank());
      for (std::size_t j = 0; j < k.size(); ++j) kw[j] = static_cast<std::int32_t>(k[j]);
      root_k_.push_back(kw);
    }
    for (std::size_t j = 0; j < rs_->rank(); ++j) simple_index_.push_back(rs_->positive_root_index(rs_->simple_root(j)));
  }

  const RootSystem& roots() const { return *rs_; }

  /// `cap` bounds the search nodes (KostantSearch) or the number of
  /// y-monomials (SimpleRootNormalForm); exceeding it yields Unknown.
  ConeResult certify(const LaurentPoly& f, ConeSign sign, std::uint64_t cap = kDefaultNodeCap,
                     Strategy strategy = Strategy::SimpleRootNormalForm) const {
    if (f.rank() != rs_->rank()) throw RankMismatch("polynomial rank differs from root system rank");
    ConeResult res;
    res.cert.sign = sign;
    if (f.is_zero()) {
      res.verdict = Verdict::Member;
      return res;
    }
    const LaurentPoly g = sign == ConeSign::NegativeRoots ? f : star(f);
    if (!ring_membership(g, ConeSign::NegativeRoots, *rs_)) {
      res.verdict = Verdict::NotMember;
      res.reason = "support outside the root cone";
      return res;
    }
    if (forgetful(g) < 0) {
      res.verdict = Verdict::NotMember;
      res.reason = "negative image under the forgetful map";
      return res;
    }
    // residual in k-coordinates
    std::vector<Term> kt;
    for (const auto& t : g.terms()) kt.push_back({to_k(t.w), t.c});
    LaurentPoly residual = LaurentPoly::from_terms(rs_->rank(), std::move(kt));

    if (strategy == Strategy::SimpleRootNormalForm) {
      auto y = simple_root_normal_form(residual, cap);
      if (!y) {
        res.verdict = Verdict::Unknown;
        res.nodes = cap;
        res.reason = "expansion exceeds the size cap";
        return res;
      }
      res.nodes = y->size();
      for (const auto& t : y->terms())
        if (t.c < 0) {
          res.verdict = Verdict::NotMember;
          res.reason = "negative coefficient " + std::to_string(t.c) + " at y^" + t.w.str();
          return res;
        }
      for (const auto& t : y->terms()) {
        CertTerm ct;
        for (std::size_t j = 0; j < rs_->rank(); ++j)
          if (t.w[j] > 0) ct.exps[simple_index_[j]] = t.w[j];
        ct.coef = t.c;
        res.cert.terms.push_back(std::move(ct));
      }
      res.verdict = Verdict::Member;
      if (expand_certificate(res.cert, *rs_) != f) throw Error("certificate does not re-expand to its input");
      return res;
    }

    Search s{this, cap, 0, {}};
    SearchOutcome out = s.run(residual, Weight(rs_->rank()), 0, true);
    res.nodes = s.nodes;
    if (out == SearchOutcome::Found) {
      res.verdict = Verdict::Member;
      res.cert.terms = collapse(s.chosen);
      if (expand_certificate(res.cert, *rs_) != f) throw Error("certificate does not re-expand to its input");
    } else if (out == SearchOutcome::Exhausted) {
      res.verdict = Verdict::NotMember;
      res.reason = "no nonnegative combination exists";
    } else {
      res.verdict = Verdict::Unknown;
      res.reason = "node cap reached";
    }
    return res;
  }

 private:
  struct Partition {
    std::vector<int> counts;  // per positive root
    int parts = 0;
    LaurentPoly expansion;  // ∏(x^{k_β} − 1)^{n_β} in k-coordinates
  };

  enum class SearchOutcome { Found, Exhausted, CapReached };

  struct Search {
    const ConeCertifier* self;
    std::uint64_t cap;
    std::uint64_t nodes;
    std::vector<std::vector<int>> chosen;

    // `first` is the smallest partition index allowed while the top term
    // stays at `top_prev`, so each multiset of monomials is visited once.
    SearchOutcome run(const LaurentPoly& res, const Weight& top_prev, std::size_t first, bool fresh) {
      if (++nodes > cap) return SearchOutcome::CapReached;
      if (res.is_zero()) return SearchOutcome::Found;
      const Term& top = self->top_term(res);
      if (top.c < 0) return SearchOutcome::Exhausted;
      if (top.w.is_zero()) {
        // only the constant remains
        if (res.size() != 1) return SearchOutcome::Exhausted;
        chosen.push_back(std::vector<int>(self->root_k_.size(), 0));
        for (Coeff i = 1; i < top.c; ++i) chosen.push_back(chosen.back());
        return SearchOutcome::Found;
      }
      const auto& parts = self->partitions(top.w);
      std::size_t start = (!fresh && top.w == top_prev) ? first : 0;
      for (std::size_t p = start; p < parts.size(); ++p) {
        LaurentPoly next = res - parts[p].expansion;
        chosen.push_back(parts[p].counts);
        SearchOutcome o = run(next, top.w, p, false);
        if (o != SearchOutcome::Exhausted) return o;
        chosen.pop_back();
      }
      return SearchOutcome::Exhausted;
    }
  };

  Weight to_k(const Weight& w) const {
    auto k = *rs_->root_coords(-w);
    Weight r(rs_->rank());
    for (std::size_t j = 0; j < k.size(); ++j) r[j] = static_cast<std::int32_t>(k[j]);
    return r;
  }

  static int height(const Weight& k) {
    int h = 0;
    for (auto x : k.coords()) h += x;
    return h;
  }

  const Term& top_term(const LaurentPoly& p) const {
    const Term* best = &p.terms().front();
    int bh = height(best->w);
    for (const auto& t : p.terms()) {
      int h = height(t.w);
      if (h > bh || (h == bh && best->w < t.w)) {
        best = &t;
        bh = h;
      }
    }
    return *best;
  }

  const std::vector<Partition>& partitions(const Weight& k) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    std::vector<Partition> out;
    std::vector<int> counts(root_k_.size(), 0);
    enumerate(k, root_k_.size(), counts, out);
    std::stable_sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) { return a.parts < b.parts; });
    for (auto& p : out) p.expansion = monomial_k(p.counts);
    return cache_.emplace(k, std::move(out)).first->second;
  }

  void enumerate(const Weight& rem, std::size_t upto, std::vector<int>& counts, std::vector<Partition>& out) const {
    if (rem.is_zero()) {
      Partition p;
      p.counts = counts;
      for (int c : counts) p.parts += c;
      out.push_back(std::move(p));
      return;
    }
    if (upto == 0) return;
    const std::size_t b = upto - 1;
    Weight r = rem;
    int used = 0;
    while (true) {
      enumerate(r, b, counts, out);
      r -= root_k_[b];
      if (std::any_of(r.coords().begin(), r.coords().end(), [](auto x) { return x < 0; })) break;
      ++used;
      counts[b] = used;
    }
    counts[b] = 0;
  }

  LaurentPoly monomial_k(const std::vector<int>& counts) const {
    const std::size_t r = rs_->rank();
    LaurentPoly m = LaurentPoly::constant(r, 1);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      LaurentPoly g = LaurentPoly::monomial(root_k_[b]) - LaurentPoly::constant(r, 1);
      for (int i = 0; i < counts[b]; ++i) m *= g;
    }
    return m;
  }

  static std::vector<CertTerm> collapse(const std::vector<std::vector<int>>& chosen) {
    std::map<std::vector<int>, Coeff> acc;
    for (const auto& c : chosen) acc[c] += 1;
    std::vector<CertTerm> out;
    for (const auto& [counts, coef] : acc) {
      CertTerm t;
      for (std::size_t b = 0; b < counts.size(); ++b)
        if (counts[b] > 0) t.exps[static_cast<int>(b)] = counts[b];
      t.coef = coef;
      out.push_back(std::move(t));
    }
    return out;
  }

  /// Substitutes x^{k} -> ∏_j (1 + y_j)^{k_j}, one coordinate at a time; the
  /// result is keyed by y-exponents. nullopt if it would exceed `cap` terms.
  static std::optional<LaurentPoly> simple_root_normal_form(const LaurentPoly& fk, std::uint64_t cap) {
    LaurentPoly cur = fk;
    for (std::size_t j = 0; j < fk.rank(); ++j) {
      std::vector<Term> out;
      for (const auto& t : cur.terms()) {
        const int k = t.w[j];
        Coeff binom = 1;
        for (int a = 0; a <= k; ++a) {
          Weight w = t.w;
          w[j] = a;
          out.push_back({w, detail::checked_mul(t.c, binom)});
          binom = detail::checked_mul(binom, k - a) / (a + 1);
        }
        if (out.size() > cap) return std::nullopt;
      }
      cur = LaurentPoly::from_terms(fk.rank(), std::move(out));
    }
    return cur;
  }

  RootSystemPtr rs_;
  std::vector<int> simple_index_;
  std::vector<Weight> root_k_;
  mutable std::mutex mu_;
  mutable std::map<Weight, std::vector<Partition>> cache_;
};

inline ConeResult cone_certificate(const LaurentPoly& f, ConeSign sign, RootSystemPtr rs, std::uint64_t cap = kDefaultNodeCap,
                                   Strategy strategy = Strategy::SimpleRootNormalForm) {
  return ConeCertifier(std::move(rs)).certify(f, sign, cap, strategy);
}

}  // namespace ktflag
