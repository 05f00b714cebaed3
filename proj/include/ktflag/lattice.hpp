#pragma once

// Exact arithmetic in the representation ring R(T): weights of the character
// lattice and finitely supported integer combinations of characters e^λ.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ktflag/error.hpp"

namespace ktflag {

inline constexpr std::size_t kMaxRank = 8;

using Coeff = std::int64_t;

namespace detail {

inline Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw CoefficientOverflow("coefficient overflow in addition");
  return r;
}

inline Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw CoefficientOverflow("coefficient overflow in multiplication");
  return r;
}

}  // namespace detail

/// Integral point of the character lattice, stored in fundamental-weight
/// coordinates. Unused trailing slots are always zero, so the defaulted
/// comparison is lexicographic on the coordinate tuple.
class Weight {
 public:
  Weight() = default;

  explicit Weight(std::size_t rank) : rank_(static_cast<std::uint8_t>(rank)) {
    if (rank > kMaxRank) throw DomainError("rank exceeds kMaxRank");
  }

  Weight(std::initializer_list<int> coords) : Weight(coords.size()) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  static Weight from(std::span<const int> coords) {
    Weight w(coords.size());
    std::copy(coords.begin(), coords.end(), w.c_.begin());
    return w;
  }

  static Weight unit(std::size_t rank, std::size_t i) {
    Weight w(rank);
    w.c_.at(i) = 1;
    return w;
  }

  std::size_t rank() const { return rank_; }
  std::int32_t operator[](std::size_t i) const { return c_[i]; }
  std::int32_t& operator[](std::size_t i) { return c_[i]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), rank_}; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.begin() + rank_, [](auto x) { return x == 0; });
  }

  Weight& operator+=(const Weight& o) {
    same_rank(o);
    for (std::size_t i = 0; i < rank_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    same_rank(o);
    for (std::size_t i = 0; i < rank_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  Weight operator-() const {
    Weight r(*this);
    for (std::size_t i = 0; i < rank_; ++i) r.c_[i] = -r.c_[i];
    return r;
  }
  friend Weight operator*(int k, Weight a) {
    for (std::size_t i = 0; i < a.rank_; ++i) a.c_[i] *= k;
    return a;
  }

  friend auto operator<=>(const Weight&, const Weight&) = default;
  friend bool operator==(const Weight&, const Weight&) = default;

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rank_; ++i) os << (i ? "," : "") << c_[i];
    os << ']';
    return os.str();
  }

  void same_rank(const Weight& o) const {
    if (o.rank_ != rank_) throw RankMismatch("weights of rank " + std::to_string(rank_) + " and " + std::to_string(o.rank_));
  }

 private:
  std::array<std::int32_t, kMaxRank> c_{};
  std::uint8_t rank_ = 0;
};

struct WeightHash {
  std::size_t operator()(const Weight& w) const noexcept {
    std::size_t h = w.rank();
    for (auto x : w.coords()) h = h * 1000003u ^ static_cast<std::size_t>(static_cast<std::uint32_t>(x));
    return h;
  }
};

struct Term {
  Weight w;
  Coeff c;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Element of R(T): a finitely supported map Weight -> nonzero integer,
/// kept sorted ascending by weight.
class LaurentPoly {
 public:
  explicit LaurentPoly(std::size_t rank = 0) : rank_(rank) {}

  static LaurentPoly constant(std::size_t rank, Coeff c) {
    LaurentPoly p(rank);
    if (c != 0) p.terms_.push_back({Weight(rank), c});
    return p;
  }
  /// e^λ
  static LaurentPoly monomial(const Weight& w, Coeff c = 1) {
    LaurentPoly p(w.rank());
    if (c != 0) p.terms_.push_back({w, c});
    return p;
  }
  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  static LaurentPoly from_terms(std::size_t rank, std::vector<Term> terms) {
    LaurentPoly p(rank);
    for (const auto& t : terms) {
      if (t.w.rank() != rank) throw RankMismatch("term rank differs from polynomial rank");
    }
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].w.is_zero()); }

  Coeff coefficient(const Weight& w) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w, [](const Term& t, const Weight& x) { return t.w < x; });
    return (it != terms_.end() && it->w == w) ? it->c : 0;
  }
  Coeff constant_term() const { return coefficient(Weight(rank_)); }

  /// Largest / smallest term in the lexicographic order.
  const Term& leading() const { return terms_.back(); }
  const Term& lowest() const { return terms_.front(); }

  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = merge(*this, o, 1); }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = merge(*this, o, -1); }
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, 1); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, -1); }
  LaurentPoly operator-() const {
    LaurentPoly r(*this);
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    check_rank(a, b);
    if (a.is_zero() || b.is_zero()) return LaurentPoly(a.rank_);
    if (a.terms_.size() == 1) return b.scaled_shift(a.terms_[0].w, a.terms_[0].c);
    if (b.terms_.size() == 1) return a.scaled_shift(b.terms_[0].w, b.terms_[0].c);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({x.w + y.w, detail::checked_mul(x.c, y.c)});
    LaurentPoly r(a.rank_);
    r.terms_ = std::move(out);
    r.normalize();
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator*(Coeff k, const LaurentPoly& a) {
    if (k == 0) return LaurentPoly(a.rank_);
    LaurentPoly r(a);
    for (auto& t : r.terms_) t.c = detail::checked_mul(t.c, k);
    return r;
  }

  /// k·e^λ·this
  LaurentPoly scaled_shift(const Weight& lambda, Coeff k = 1) const {
    if (lambda.rank() != rank_) throw RankMismatch("shift weight rank differs from polynomial rank");
    if (k == 0) return LaurentPoly(rank_);
    LaurentPoly r(*this);
    for (auto& t : r.terms_) {
      t.w += lambda;
      t.c = detail::checked_mul(t.c, k);
    }
    return r;  // translation preserves the order
  }

  /// Applies a weight map termwise and renormalizes.
  template <typename F>
  LaurentPoly map_weights(F&& f) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({f(t.w), t.c});
    std::size_t rank = out.empty() ? rank_ : out.front().w.rank();
    return from_terms(rank, std::move(out));
  }

  /// As above, into a lattice of the given rank.
  template <typename F>
  LaurentPoly map_weights(std::size_t rank, F&& f) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({f(t.w), t.c});
    return from_terms(rank, std::move(out));
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }

  /// Human-readable form in fundamental coordinates, e.g. "2*e[1,-1] - 1".
  std::string str() const;

  friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

 private:
  static void check_rank(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.rank_ != b.rank_)
      throw RankMismatch("Laurent polynomials of rank " + std::to_string(a.rank_) + " and " + std::to_string(b.rank_));
  }

  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, Coeff sign) {
    check_rank(a, b);
    LaurentPoly r(a.rank_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->w < j->w)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->w < i->w) {
        r.terms_.push_back({j->w, sign * j->c});
        ++j;
      } else {
        Coeff c = detail::checked_add(i->c, sign * j->c);
        if (c != 0) r.terms_.push_back({i->w, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.w < y.w; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      Weight w = terms_[i].w;
      Coeff c = 0;
      for (; i < terms_.size() && terms_[i].w == w; ++i) c = detail::checked_add(c, terms_[i].c);
      if (c != 0) terms_[out++] = {w, c};
    }
    terms_.resize(out);
  }

  std::size_t rank_;
  std::vector<Term> terms_;
};

inline std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Coeff c = t.c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    Coeff a = c < 0 ? -c : c;
    if (t.w.is_zero()) {
      os << a;
    } else {
      if (a != 1) os << a << '*';
      os << 'e' << t.w.str();
    }
    first = false;
  }
  return os.str();
}

enum class ArithKind { Add, Mul, Neg };

/// Ring operations on R(T); `g` is ignored for negation.
inline LaurentPoly lp_arith(const LaurentPoly& f, const LaurentPoly& g, ArithKind kind) {
  switch (kind) {
    case ArithKind::Add: return f + g;
    case ArithKind::Mul: return f * g;
    case ArithKind::Neg: return -f;
  }
  return f;
}

/// The involution e^λ -> e^{-λ}.
inline LaurentPoly star(const LaurentPoly& f) {
  return f.map_weights([](const Weight& w) { return -w; });
}

/// Forgetful map R(T) -> Z, e^λ -> 1.
inline Coeff forgetful(const LaurentPoly& f) {
  Coeff s = 0;
  for (const auto& t : f.terms()) s = detail::checked_add(s, t.c);
  return s;
}

/// 1 - e^λ
inline LaurentPoly one_minus_exp(const Weight& lambda) {
  return LaurentPoly::constant(lambda.rank(), 1) - LaurentPoly::monomial(lambda);
}

/// e^λ - 1
inline LaurentPoly exp_minus_one(const Weight& lambda) { return -one_minus_exp(lambda); }

/// Exact quotient f/(1 - e^λ), λ ≠ 0, or nullopt. Along each line μ + ℤλ the
/// quotient is the running sum of f, which must return to zero.
inline std::optional<LaurentPoly> try_divide_one_minus_exp(const LaurentPoly& f, const Weight& lambda) {
  const std::size_t rank = f.rank();
  std::size_t j = 0;
  while (j < rank && lambda[j] == 0) ++j;
  if (j == rank) throw DomainError("division by 1 - e^0");
  const std::int64_t lj = lambda[j];
  auto floordiv = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  struct Item {
    Weight base;
    std::int64_t t;
    Coeff c;
  };
  std::vector<Item> items;
  items.reserve(f.size());
  for (const auto& term : f.terms()) {
    std::int64_t t = floordiv(term.w[j], lj);
    items.push_back({term.w - static_cast<int>(t) * lambda, t, term.c});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.base != b.base ? a.base < b.base : a.t < b.t;
  });
  std::vector<Term> out;
  for (std::size_t a = 0; a < items.size();) {
    std::size_t b = a;
    Coeff run = 0;
    while (b < items.size() && items[b].base == items[a].base) {
      run = detail::checked_add(run, items[b].c);
      std::int64_t next = (b + 1 < items.size() && items[b + 1].base == items[a].base) ? items[b + 1].t : items[b].t + 1;
      if (run != 0)
        for (std::int64_t t = items[b].t; t < next; ++t) out.push_back({items[a].base + static_cast<int>(t) * lambda, run});
      ++b;
    }
    if (run != 0) return std::nullopt;
    a = b;
  }
  return LaurentPoly::from_terms(rank, std::move(out));
}

/// Exact quotient f/g, or nullopt when g does not divide f in the Laurent
/// ring. Leading-term elimination in the lexicographic order; every quotient
/// term must fall inside the coordinate box forced by the Newton polytopes,
/// which bounds the loop.
inline std::optional<LaurentPoly> try_divide(const LaurentPoly& f, const LaurentPoly& g) {
  if (f.rank() != g.rank()) throw RankMismatch("division of polynomials of different rank");
  if (g.is_zero()) throw DomainError("division by zero polynomial");
  const std::size_t rank = f.rank();
  if (f.is_zero()) return LaurentPoly(rank);
  if (g.size() == 1) {
    const auto& t = g.terms().front();
    for (const auto& ft : f.terms())
      if (ft.c % t.c != 0) return std::nullopt;
    std::vector<Term> out;
    out.reserve(f.size());
    for (const auto& ft : f.terms()) out.push_back({ft.w - t.w, ft.c / t.c});
    return LaurentPoly::from_terms(rank, std::move(out));
  }
  if (g.size() == 2 && g.terms()[0].c == -g.terms()[1].c) {
    // g = a·e^μ·(1 - e^{ν-μ})
    const auto& lo = g.terms()[0];
    const auto& hi = g.terms()[1];
    auto q = try_divide_one_minus_exp(f, hi.w - lo.w);
    if (!q) return std::nullopt;
    std::vector<Term> out;
    out.reserve(q->size());
    for (const auto& t : q->terms()) {
      if (t.c % lo.c != 0) return std::nullopt;
      out.push_back({t.w - lo.w, t.c / lo.c});
    }
    return LaurentPoly::from_terms(rank, std::move(out));
  }

  std::array<std::int32_t, kMaxRank> fmin{}, fmax{}, gmin{}, gmax{};
  auto bounds = [rank](const LaurentPoly& p, auto& lo, auto& hi) {
    for (std::size_t i = 0; i < rank; ++i) {
      lo[i] = hi[i] = p.terms().front().w[i];
    }
    for (const auto& t : p.terms())
      for (std::size_t i = 0; i < rank; ++i) {
        lo[i] = std::min(lo[i], t.w[i]);
        hi[i] = std::max(hi[i], t.w[i]);
      }
  };
  bounds(f, fmin, fmax);
  bounds(g, gmin, gmax);
  for (std::size_t i = 0; i < rank; ++i)
    if (fmax[i] - gmax[i] < fmin[i] - gmin[i]) return std::nullopt;

  const Term glead = g.leading();
  std::map<Weight, Coeff, std::greater<>> rem;
  for (const auto& t : f.terms()) rem.emplace(t.w, t.c);
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto [lw, lc] = *rem.begin();
    if (lc % glead.c != 0) return std::nullopt;
    Weight m = lw - glead.w;
    for (std::size_t i = 0; i < rank; ++i)
      if (m[i] < fmin[i] - gmin[i] || m[i] > fmax[i] - gmax[i]) return std::nullopt;
    Coeff q = lc / glead.c;
    quot.push_back({m, q});
    for (const auto& gt : g.terms()) {
      Weight w = gt.w + m;
      Coeff d = detail::checked_mul(q, gt.c);
      auto it = rem.find(w);
      if (it == rem.end()) {
        rem.emplace(w, -d);
      } else {
        it->second = detail::checked_add(it->second, -d);
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  return LaurentPoly::from_terms(rank, std::move(quot));
}

/// Exact quotient; throws InexactDivision on a nonzero remainder.
inline LaurentPoly exact_divide(const LaurentPoly& f, const LaurentPoly& g) {
  auto q = try_divide(f, g);
  if (!q) throw InexactDivision("(" + f.str() + ") is not divisible by (" + g.str() + ")");
  return *std::move(q);
}

inline bool divides(const LaurentPoly& g, const LaurentPoly& f) { return try_divide(f, g).has_value(); }

}  // namespace ktflag
