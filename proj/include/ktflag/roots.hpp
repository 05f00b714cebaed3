#pragma once

// Cartan data, positive roots, the full Weyl group with multiplication
// tables, Bruhat order, parabolic cosets and the Möbius function.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ktflag/error.hpp"
#include "ktflag/lattice.hpp"

namespace ktflag {

/// Handle to an element of an enumerated Weyl group. Ids are assigned in
/// breadth-first order, so they are nondecreasing in length and id 0 is e.
struct WeylElem {
  std::uint32_t id = 0;
  friend auto operator<=>(const WeylElem&, const WeylElem&) = default;
};

/// Subset of simple-reflection indices (0-based) as a bitmask.
class SimpleSubset {
 public:
  SimpleSubset() = default;
  explicit SimpleSubset(std::uint32_t mask) : mask_(mask) {}
  SimpleSubset(std::initializer_list<int> idx) {
    for (int i : idx) mask_ |= 1u << i;
  }
  static SimpleSubset all(std::size_t rank) { return SimpleSubset((1u << rank) - 1); }

  /// Inverse of str(): comma-separated 1-based indices, each at most rank.
  static SimpleSubset parse(const std::string& text, std::size_t rank) {
    SimpleSubset s;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string::npos) end = text.size();
      std::string tok = text.substr(pos, end - pos);
      int i = 0;
      try {
        std::size_t used = 0;
        i = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw DomainError("bad simple-root index '" + tok + "'");
      }
      if (i < 1 || static_cast<std::size_t>(i) > rank) throw DomainError("simple-root index " + tok + " out of range");
      s.mask_ |= 1u << (i - 1);
      pos = end + 1;
    }
    return s;
  }

  bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::uint32_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < 32; ++i)
      if (contains(i)) r.push_back(i);
    return r;
  }
  SimpleSubset complement(std::size_t rank) const { return SimpleSubset(~mask_ & ((1u << rank) - 1)); }
  friend bool operator==(const SimpleSubset&, const SimpleSubset&) = default;

  /// "1,3" style, 1-based; empty string for the empty set.
  std::string str() const {
    std::string s;
    for (auto i : indices()) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    return s;
  }

 private:
  std::uint32_t mask_ = 0;
};

/// All subsets of {0..rank-1}, in increasing mask order.
inline std::vector<SimpleSubset> all_subsets(std::size_t rank) {
  std::vector<SimpleSubset> r;
  for (std::uint32_t m = 0; m < (1u << rank); ++m) r.emplace_back(m);
  return r;
}

class RootSystem {
 public:
  using Matrix = std::vector<std::vector<int>>;

  /// Builds the root system and enumerates its Weyl group. Tags: "A1".."A6",
  /// "A1xA1", "B2", "G2".
  static std::shared_ptr<const RootSystem> build(const std::string& tag) {
    Matrix c;
    if (tag.size() == 2 && tag[0] == 'A' && tag[1] >= '1' && tag[1] <= '6') {
      int n = tag[1] - '0';
      c.assign(n, std::vector<int>(n, 0));
      for (int i = 0; i < n; ++i) {
        c[i][i] = 2;
        if (i + 1 < n) c[i][i + 1] = c[i + 1][i] = -1;
      }
    } else if (tag == "A1xA1") {
      c = {{2, 0}, {0, 2}};
    } else if (tag == "B2") {
      c = {{2, -1}, {-2, 2}};
    } else if (tag == "G2") {
      c = {{2, -3}, {-1, 2}};
    } else {
      throw UnsupportedType("unsupported root system type '" + tag + "'");
    }
    return std::shared_ptr<const RootSystem>(new RootSystem(tag, std::move(c)));
  }

  const std::string& tag() const { return tag_; }
  std::size_t rank() const { return rank_; }
  const Matrix& cartan() const { return cartan_; }

  const Weight& simple_root(std::size_t i) const { return simple_[i]; }
  const std::vector<Weight>& simple_roots() const { return simple_; }
  /// Sorted by height, then by simple-root coordinates descending; the
  /// simple roots come first in index order.
  const std::vector<Weight>& positive_roots() const { return positive_; }
  Weight fundamental_weight(std::size_t i) const { return Weight::unit(rank_, i); }
  Weight zero_weight() const { return Weight(rank_); }
  const Weight& rho() const { return rho_; }

  /// Σ_{i∉S} ω_i
  Weight rho_complement(SimpleSubset s) const {
    Weight r(rank_);
    for (std::size_t i = 0; i < rank_; ++i)
      if (!s.contains(i)) r[i] = 1;
    return r;
  }

  /// Coordinates of λ in the simple-root basis, if λ is in the root lattice.
  std::optional<std::vector<std::int64_t>> root_coords(const Weight& lambda) const {
    std::vector<std::int64_t> k(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < rank_; ++j) s += static_cast<std::int64_t>(adj_[i][j]) * lambda[j];
      if (s % det_ != 0) return std::nullopt;
      k[i] = s / det_;
    }
    return k;
  }

  Weight from_root_coords(std::span<const std::int64_t> k) const {
    Weight r(rank_);
    for (std::size_t j = 0; j < rank_; ++j)
      for (std::size_t i = 0; i < rank_; ++i) r[i] += static_cast<std::int32_t>(cartan_[i][j] * k[j]);
    return r;
  }

  /// True iff λ ∈ Q⁺ (nonnegative integer combination of simple roots).
  bool in_positive_cone(const Weight& lambda) const {
    auto k = root_coords(lambda);
    return k && std::all_of(k->begin(), k->end(), [](auto x) { return x >= 0; });
  }

  int height(const Weight& root) const {
    auto k = root_coords(root);
    if (!k) throw DomainError("weight " + root.str() + " is not in the root lattice");
    return static_cast<int>(std::accumulate(k->begin(), k->end(), std::int64_t{0}));
  }

  /// Index of a positive root in positive_roots(), or -1.
  int positive_root_index(const Weight& beta) const {
    auto it = std::find(positive_.begin(), positive_.end(), beta);
    return it == positive_.end() ? -1 : static_cast<int>(it - positive_.begin());
  }

  bool is_positive_root(const Weight& w) const { return positive_root_index(w) >= 0; }

  /// Roots of the Levi subsystem spanned by {α_i : i ∈ S}.
  bool in_levi(const Weight& beta, SimpleSubset s) const {
    auto k = root_coords(beta);
    for (std::size_t i = 0; i < rank_; ++i)
      if (!s.contains(i) && (*k)[i] != 0) return false;
    return true;
  }

  // ---- Weyl group ----

  std::size_t order() const { return len_.size(); }
  WeylElem identity() const { return {0}; }
  WeylElem longest() const { return {static_cast<std::uint32_t>(order() - 1)}; }
  WeylElem simple(std::size_t i) const { return {right_[0][i]}; }
  std::vector<WeylElem> elements() const {
    std::vector<WeylElem> r(order());
    for (std::uint32_t i = 0; i < r.size(); ++i) r[i] = {i};
    return r;
  }

  int length(WeylElem w) const { return len_[w.id]; }
  /// Reduced word (0-based indices), w = s_{i1} s_{i2} ... s_{ik}.
  const std::vector<std::uint8_t>& word(WeylElem w) const { return word_[w.id]; }
  WeylElem mul_simple_right(WeylElem w, std::size_t i) const { return {right_[w.id][i]}; }
  WeylElem mul_simple_left(std::size_t i, WeylElem w) const { return {left_[w.id][i]}; }
  WeylElem inverse(WeylElem w) const { return {inv_[w.id]}; }

  WeylElem mul(WeylElem a, WeylElem b) const {
    for (auto i : word_[b.id]) a = mul_simple_right(a, i);
    return a;
  }

  WeylElem from_word(std::span<const int> word) const {
    WeylElem w = identity();
    for (int i : word) {
      if (i < 0 || static_cast<std::size_t>(i) >= rank_) throw DomainError("simple reflection index out of range");
      w = mul_simple_right(w, static_cast<std::size_t>(i));
    }
    return w;
  }

  bool is_right_descent(WeylElem w, std::size_t i) const { return length(mul_simple_right(w, i)) < length(w); }
  bool is_left_descent(std::size_t i, WeylElem w) const { return length(mul_simple_left(i, w)) < length(w); }

  Weight act(WeylElem w, const Weight& lambda) const {
    lambda.same_rank(rho_);
    const auto& m = mat_[w.id];
    Weight r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      std::int32_t s = 0;
      for (std::size_t j = 0; j < rank_; ++j) s += m[i * rank_ + j] * lambda[j];
      r[i] = s;
    }
    return r;
  }

  LaurentPoly act(WeylElem w, const LaurentPoly& f) const {
    if (f.rank() != rank_) throw RankMismatch("polynomial rank differs from root system rank");
    if (w.id == 0) return f;
    return f.map_weights([&](const Weight& x) { return act(w, x); });
  }

  /// Reflection s_β for a positive root β, indexed as in positive_roots().
  WeylElem reflection(std::size_t beta_index) const { return {refl_[beta_index]}; }

  bool bruhat_leq(WeylElem v, WeylElem w) const {
    return (bruhat_[w.id][v.id / 64] >> (v.id % 64)) & 1u;
  }

  int mobius(WeylElem v, WeylElem w) const {
    if (!bruhat_leq(v, w)) return 0;
    return ((length(v) + length(w)) % 2 == 0) ? 1 : -1;
  }

  // ---- parabolic cosets ----

  bool is_min_coset_rep(WeylElem w, SimpleSubset s) const {
    for (auto i : s.indices())
      if (is_right_descent(w, i)) return false;
    return true;
  }

  /// W^P in id order (nondecreasing length).
  std::vector<WeylElem> min_coset_reps(SimpleSubset s) const {
    std::vector<WeylElem> r;
    for (auto w : elements())
      if (is_min_coset_rep(w, s)) r.push_back(w);
    return r;
  }

  WeylElem min_coset_rep(WeylElem w, SimpleSubset s) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto i : s.indices())
        if (is_right_descent(w, i)) {
          w = mul_simple_right(w, i);
          changed = true;
        }
    }
    return w;
  }

  WeylElem max_coset_rep(WeylElem w, SimpleSubset s) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto i : s.indices())
        if (!is_right_descent(w, i)) {
          w = mul_simple_right(w, i);
          changed = true;
        }
    }
    return w;
  }

  /// wW_S, in id order.
  std::vector<WeylElem> coset(WeylElem w, SimpleSubset s) const {
    std::vector<char> seen(order(), 0);
    std::vector<std::uint32_t> stack{w.id};
    seen[w.id] = 1;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto i : s.indices()) {
        auto y = right_[x][i];
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::vector<WeylElem> r;
    for (std::uint32_t i = 0; i < order(); ++i)
      if (seen[i]) r.push_back({i});
    return r;
  }

  /// W_S as a subgroup, in id order.
  std::vector<WeylElem> parabolic_subgroup(SimpleSubset s) const { return coset(identity(), s); }

  /// Id lookup by reduced word text such as "s1s2" or "e" (1-based).
  WeylElem parse_word(const std::string& text) const {
    if (text == "e" || text.empty()) return identity();
    std::vector<int> idx;
    std::size_t p = 0;
    while (p < text.size()) {
      if (text[p] != 's') throw DomainError("malformed word '" + text + "'");
      std::size_t q = p + 1;
      while (q < text.size() && std::isdigit(static_cast<unsigned char>(text[q]))) ++q;
      if (q == p + 1) throw DomainError("malformed word '" + text + "'");
      idx.push_back(std::stoi(text.substr(p + 1, q - p - 1)) - 1);
      p = q;
    }
    return from_word(idx);
  }

  /// "s1s2" style, 1-based; "e" for the identity.
  std::string word_str(WeylElem w) const {
    if (w.id == 0) return "e";
    std::string s;
    for (auto i : word_[w.id]) s += "s" + std::to_string(i + 1);
    return s;
  }

 private:
  RootSystem(std::string tag, Matrix cartan) : tag_(std::move(tag)), rank_(cartan.size()), cartan_(std::move(cartan)) {
    for (std::size_t j = 0; j < rank_; ++j) {
      Weight a(rank_);
      for (std::size_t i = 0; i < rank_; ++i) a[i] = cartan_[i][j];
      simple_.push_back(a);
    }
    rho_ = Weight(rank_);
    for (std::size_t i = 0; i < rank_; ++i) rho_[i] = 1;
    compute_adjugate();
    enumerate_group();
    compute_positive_roots();
    compute_bruhat();
  }

  static std::int64_t determinant(const std::vector<std::vector<std::int64_t>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    std::int64_t d = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (m[0][c] == 0) continue;
      std::vector<std::vector<std::int64_t>> minor;
      for (std::size_t r = 1; r < n; ++r) {
        std::vector<std::int64_t> row;
        for (std::size_t k = 0; k < n; ++k)
          if (k != c) row.push_back(m[r][k]);
        minor.push_back(std::move(row));
      }
      d += ((c % 2 == 0) ? 1 : -1) * m[0][c] * determinant(minor);
    }
    return d;
  }

  void compute_adjugate() {
    const std::size_t n = rank_;
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = cartan_[i][j];
    det_ = determinant(a);
    adj_.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<std::int64_t>> minor;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == j) continue;
          std::vector<std::int64_t> row;
          for (std::size_t k = 0; k < n; ++k)
            if (k != i) row.push_back(a[r][k]);
          minor.push_back(std::move(row));
        }
        adj_[i][j] = (((i + j) % 2 == 0) ? 1 : -1) * determinant(minor);
      }
  }

  using Mat = std::vector<std::int32_t>;

  Mat simple_matrix(std::size_t i) const {
    Mat m(rank_ * rank_, 0);
    for (std::size_t r = 0; r < rank_; ++r) m[r * rank_ + r] = 1;
    for (std::size_t r = 0; r < rank_; ++r) m[r * rank_ + i] -= simple_[i][r];
    return m;
  }

  Mat matmul(const Mat& a, const Mat& b) const {
    Mat c(rank_ * rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t k = 0; k < rank_; ++k)
        for (std::size_t j = 0; j < rank_; ++j) c[i * rank_ + j] += a[i * rank_ + k] * b[k * rank_ + j];
    return c;
  }

  void enumerate_group() {
    std::vector<Mat> gens;
    for (std::size_t i = 0; i < rank_; ++i) gens.push_back(simple_matrix(i));
    std::unordered_map<Weight, std::uint32_t, WeightHash> index;
    Mat ident(rank_ * rank_, 0);
    for (std::size_t r = 0; r < rank_; ++r) ident[r * rank_ + r] = 1;
    mat_.push_back(ident);
    len_.push_back(0);
    word_.emplace_back();
    index.emplace(rho_, 0);
    for (std::size_t head = 0; head < mat_.size(); ++head) {
      std::vector<std::uint32_t> row(rank_);
      for (std::size_t i = 0; i < rank_; ++i) {
        Mat m = matmul(mat_[head], gens[i]);
        Weight key = apply(m, rho_);
        auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(mat_.size()));
        if (inserted) {
          mat_.push_back(std::move(m));
          len_.push_back(len_[head] + 1);
          auto wd = word_[head];
          wd.push_back(static_cast<std::uint8_t>(i));
          word_.push_back(std::move(wd));
        }
        row[i] = it->second;
      }
      right_.push_back(row);
    }
    left_.assign(mat_.size(), std::vector<std::uint32_t>(rank_));
    for (std::size_t w = 0; w < mat_.size(); ++w)
      for (std::size_t i = 0; i < rank_; ++i) left_[w][i] = index.at(apply(gens[i], apply(mat_[w], rho_)));
    inv_.resize(mat_.size());
    for (std::size_t w = 0; w < mat_.size(); ++w) {
      std::uint32_t x = 0;
      for (auto it = word_[w].rbegin(); it != word_[w].rend(); ++it) x = right_[x][*it];
      inv_[w] = x;
    }
  }

  Weight apply(const Mat& m, const Weight& v) const {
    Weight r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      std::int32_t s = 0;
      for (std::size_t j = 0; j < rank_; ++j) s += m[i * rank_ + j] * v[j];
      r[i] = s;
    }
    return r;
  }

  void compute_positive_roots() {
    struct Found {
      Weight root;
      std::uint32_t w;
      std::size_t i;
    };
    std::vector<Found> found;
    for (std::uint32_t w = 0; w < order(); ++w)
      for (std::size_t i = 0; i < rank_; ++i) {
        Weight b = act({w}, simple_[i]);
        if (!in_positive_cone(b)) continue;
        if (std::none_of(found.begin(), found.end(), [&](const Found& f) { return f.root == b; }))
          found.push_back({b, w, i});
      }
    auto key = [this](const Weight& b) {
      auto k = *root_coords(b);
      return std::make_pair(std::accumulate(k.begin(), k.end(), std::int64_t{0}), k);
    };
    std::sort(found.begin(), found.end(), [&](const Found& x, const Found& y) {
      auto kx = key(x.root), ky = key(y.root);
      if (kx.first != ky.first) return kx.first < ky.first;
      return kx.second > ky.second;
    });
    for (const auto& f : found) {
      positive_.push_back(f.root);
      // s_β = w s_i w^{-1} for wα_i = β
      WeylElem r = mul(mul_simple_right({f.w}, f.i), inverse({f.w}));
      refl_.push_back(r.id);
    }
  }

  void compute_bruhat() {
    const std::size_t n = order();
    const std::size_t words = (n + 63) / 64;
    bruhat_.assign(n, std::vector<std::uint64_t>(words, 0));
    bruhat_[0][0] = 1;
    for (std::size_t w = 1; w < n; ++w) {
      std::size_t s = word_[w].front();
      std::uint32_t sw = left_[w][s];
      auto& row = bruhat_[w];
      const auto& base = bruhat_[sw];
      row = base;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t sv = left_[v][s];
        if ((base[sv / 64] >> (sv % 64)) & 1u) row[v / 64] |= std::uint64_t{1} << (v % 64);
      }
    }
  }

  std::string tag_;
  std::size_t rank_;
  Matrix cartan_;
  std::vector<Weight> simple_;
  std::vector<Weight> positive_;
  std::vector<std::uint32_t> refl_;
  Weight rho_;
  std::vector<std::vector<std::int64_t>> adj_;
  std::int64_t det_ = 1;

  std::vector<Mat> mat_;
  std::vector<int> len_;
  std::vector<std::vector<std::uint8_t>> word_;
  std::vector<std::vector<std::uint32_t>> right_, left_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::vector<std::uint64_t>> bruhat_;
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

}  // namespace ktflag
